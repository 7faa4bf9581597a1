#pragma once

/**
 * @brief Exact lattice-polytope kernel.
 *
 * Convex hulls, facet enumeration (incremental double description), lattice
 * points, face queries, reflexivity / local anti-blocking / compressedness,
 * normalized volume, free sums and joins. Everything is exact; polytopes
 * whose affine hull is a proper subspace are handled by restricting to a
 * saturated integer basis of the affine hull, so the reduced coordinate
 * system always carries the full induced lattice.
 */

#include <flowlattice/numeric.hpp>

#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <tuple>

namespace flowlattice {

/// Geometric dimension cap (affine dimension of any hull). Overridable via
/// the FLOWLATTICE_DIM_CAP environment variable; default 7.
inline std::size_t dim_cap() {
    if (const char* s = std::getenv("FLOWLATTICE_DIM_CAP")) {
        long v = std::strtol(s, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return 7;
}

inline constexpr std::size_t kVertexCap = 200;
inline constexpr std::size_t kLatticeScanCap = 5'000'000;

namespace detail {

/**
 * @brief Extreme rays of the pointed cone { z : rows * z <= 0 }.
 *
 * Incremental double description with the combinatorial adjacency test; the
 * caller fixes the insertion order, output is gcd-reduced and sorted, so the
 * result is deterministic. Throws if the cone is not pointed.
 */
inline IntMat dd_cone_rays(const IntMat& rows, std::size_t m) {
    for (const auto& r : rows)
        if (r.size() != m) throw InvalidParameterError("dd_cone_rays: row size mismatch");
    // greedy full-rank initial subsystem
    std::vector<std::size_t> chosen;
    IntMat picked;
    for (std::size_t i = 0; i < rows.size() && chosen.size() < m; ++i) {
        picked.push_back(rows[i]);
        if (rank_of(picked) == picked.size())
            chosen.push_back(i);
        else
            picked.pop_back();
    }
    if (chosen.size() != m)
        throw InvalidParameterError("dd_cone_rays: cone is not pointed");

    // extreme rays of the initial simplicial cone: columns of -picked^{-1}
    IntMat rays;
    for (std::size_t j = 0; j < m; ++j) {
        IntVec e(m, 0);
        e[j] = -1;
        auto x = solve(picked, e);
        if (!x) throw ContractError("dd_cone_rays: initial system not invertible");
        Int scale;
        IntVec r = clear_denominators(*x, scale);
        make_primitive(r);
        rays.push_back(std::move(r));
    }

    std::vector<std::size_t> processed = chosen;
    std::set<std::size_t> chosen_set(chosen.begin(), chosen.end());
    auto tight_set = [&](const IntVec& r) {
        std::vector<bool> t(processed.size());
        for (std::size_t i = 0; i < processed.size(); ++i)
            t[i] = dot(rows[processed[i]], r) == 0;
        return t;
    };

    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (chosen_set.count(i)) continue;
        std::vector<Int> s(rays.size());
        bool any_pos = false;
        for (std::size_t k = 0; k < rays.size(); ++k) {
            s[k] = dot(rows[i], rays[k]);
            if (s[k] > 0) any_pos = true;
        }
        if (!any_pos) {
            processed.push_back(i);
            continue;
        }
        std::vector<std::vector<bool>> tights(rays.size());
        for (std::size_t k = 0; k < rays.size(); ++k) tights[k] = tight_set(rays[k]);
        IntMat next;
        for (std::size_t k = 0; k < rays.size(); ++k)
            if (s[k] <= 0) next.push_back(rays[k]);
        for (std::size_t p = 0; p < rays.size(); ++p) {
            if (s[p] <= 0) continue;
            for (std::size_t q = 0; q < rays.size(); ++q) {
                if (s[q] >= 0) continue;
                // adjacency: no third ray is tight on everything p and q share
                std::vector<bool> common(processed.size());
                for (std::size_t t = 0; t < processed.size(); ++t)
                    common[t] = tights[p][t] && tights[q][t];
                bool adjacent = true;
                for (std::size_t r3 = 0; r3 < rays.size() && adjacent; ++r3) {
                    if (r3 == p || r3 == q) continue;
                    bool covers = true;
                    for (std::size_t t = 0; t < processed.size() && covers; ++t)
                        if (common[t] && !tights[r3][t]) covers = false;
                    if (covers) adjacent = false;
                }
                if (!adjacent) continue;
                IntVec nr(m);
                for (std::size_t t = 0; t < m; ++t)
                    nr[t] = s[p] * rays[q][t] - s[q] * rays[p][t];
                make_primitive(nr);
                next.push_back(std::move(nr));
            }
        }
        processed.push_back(i);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        rays = std::move(next);
    }
    std::sort(rays.begin(), rays.end());
    return rays;
}

/**
 * @brief Vertex enumeration of { x : eqs, ineqs } by double description on
 * the homogenization cone. Throws InvalidParameterError when the region is
 * empty or unbounded. Vertices may be rational.
 */
inline RatMat enumerate_h_vertices(std::size_t ambient_dim,
                                   const std::vector<std::pair<IntVec, Int>>& equalities,
                                   const std::vector<std::pair<IntVec, Int>>& inequalities) {
    RatVec x0(ambient_dim, Rat(0));
    IntMat dir = identity_matrix(ambient_dim);
    if (!equalities.empty()) {
        IntMat a;
        IntVec b;
        for (const auto& [n, c] : equalities) {
            if (n.size() != ambient_dim)
                throw InvalidParameterError("enumerate_h_vertices: equation size mismatch");
            a.push_back(n);
            b.push_back(c);
        }
        auto part = solve(a, b);
        if (!part) throw InvalidParameterError("enumerate_h_vertices: inconsistent equalities");
        x0 = *part;
        dir = kernel(a, ambient_dim);
    }
    const std::size_t d = dir.size();
    // substitute x = x0 + dir^T y into each inequality
    IntMat cone_rows;
    for (const auto& [n, c] : inequalities) {
        if (n.size() != ambient_dim)
            throw InvalidParameterError("enumerate_h_vertices: inequality size mismatch");
        IntVec coeff(d);
        for (std::size_t j = 0; j < d; ++j) coeff[j] = dot(n, dir[j]);
        Rat rhs = Rat(c) - rat_dot(to_rat(n), x0);
        Int den = denominator(rhs);
        IntVec row(d + 1);
        for (std::size_t j = 0; j < d; ++j) row[j] = coeff[j] * den;
        row[d] = -numerator(rhs);
        cone_rows.push_back(std::move(row));
    }
    {
        IntVec trow(d + 1, 0);
        trow[d] = -1;
        cone_rows.push_back(std::move(trow));
    }
    IntMat rays = dd_cone_rays(cone_rows, d + 1);
    RatMat verts;
    for (const auto& r : rays) {
        if (r[d] == 0)
            throw InvalidParameterError("enumerate_h_vertices: region empty or unbounded");
        RatVec y(ambient_dim);
        for (std::size_t i = 0; i < ambient_dim; ++i) {
            Rat acc = x0[i];
            for (std::size_t j = 0; j < d; ++j) acc += Rat(dir[j][i] * r[j], r[d]);
            y[i] = acc;
        }
        verts.push_back(std::move(y));
    }
    if (verts.empty())
        throw InvalidParameterError("enumerate_h_vertices: region empty or unbounded");
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    return verts;
}

}  // namespace detail

struct FaceHandle {
    std::vector<std::size_t> inequalities;  ///< indices into facets(), all tight
    std::vector<std::size_t> vertices;      ///< indices into vertices(), tight on all of them
};

class LatticePolytope {
public:
    enum class NonExtreme { filter, reject };

    /// Facet inequality normal·y <= offset in reduced (affine-hull) coordinates.
    struct Facet {
        IntVec normal;  ///< primitive
        Int offset;
        bool operator==(const Facet&) const = default;
    };

    /// Inequality representative in ambient coordinates (unique modulo equations).
    struct AmbientInequality {
        IntVec normal;
        Int offset;
    };

    /// Affine-hull equation normal·x == value in ambient coordinates.
    struct Equation {
        IntVec normal;
        Int value;
        bool operator==(const Equation&) const = default;
    };

    LatticePolytope() = default;

    static LatticePolytope hull(IntMat points, NonExtreme mode = NonExtreme::filter) {
        if (points.empty()) throw InvalidParameterError("hull: no points");
        const std::size_t n = points[0].size();
        for (const auto& p : points)
            if (p.size() != n) throw InvalidParameterError("hull: ragged point list");
        std::sort(points.begin(), points.end());
        points.erase(std::unique(points.begin(), points.end()), points.end());
        if (points.size() > kVertexCap)
            throw ResourceLimitError("hull: vertex cap exceeded (" +
                                     std::to_string(points.size()) + " > " +
                                     std::to_string(kVertexCap) + ")");
        auto impl = std::make_shared<Impl>();
        impl->ambient = n;
        impl->points = std::move(points);
        impl->basepoint = impl->points[0];
        IntMat diffs;
        for (const auto& p : impl->points) {
            IntVec d(n);
            for (std::size_t i = 0; i < n; ++i) d[i] = p[i] - impl->basepoint[i];
            diffs.push_back(std::move(d));
        }
        impl->basis = lattice_canonical(saturate_rows(diffs, n));
        if (impl->basis.size() > dim_cap())
            throw ResourceLimitError("hull: affine dimension " +
                                     std::to_string(impl->basis.size()) +
                                     " exceeds cap " + std::to_string(dim_cap()));
        if (impl->basis.size() == n) {
            // full-dimensional: anchor the chart at the origin so reduced and
            // ambient coordinates coincide
            impl->basepoint.assign(n, Int(0));
            impl->basis = identity_matrix(n);
        }
        IntMat eqn = lattice_canonical(kernel(impl->basis, n));
        for (auto& e : eqn) impl->equations.push_back({e, dot(e, impl->basepoint)});
        LatticePolytope p;
        p.impl_ = std::move(impl);
        if (mode == NonExtreme::reject) {
            const auto& data = p.impl_->data();
            if (data.vertices_ambient.size() != p.impl_->points.size())
                throw InvalidParameterError("hull: input contains non-extreme points");
        }
        return p;
    }

    /// Build from an exact H-description; all vertices must be lattice points.
    static LatticePolytope from_h_description(
        std::size_t ambient_dim, const std::vector<std::pair<IntVec, Int>>& equalities,
        const std::vector<std::pair<IntVec, Int>>& inequalities) {
        RatMat verts = detail::enumerate_h_vertices(ambient_dim, equalities, inequalities);
        IntMat pts;
        for (const auto& v : verts) {
            IntVec p(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (!is_integral(v[i]))
                    throw NonLatticeError("from_h_description: non-integral vertex");
                p[i] = numerator(v[i]);
            }
            pts.push_back(std::move(p));
        }
        return hull(std::move(pts));
    }

    bool valid() const { return impl_ != nullptr; }
    std::size_t ambient_dim() const { return impl().ambient; }
    std::size_t dim() const { return impl().basis.size(); }
    const IntVec& chart_basepoint() const { return impl().basepoint; }
    const IntMat& chart_basis() const { return impl().basis; }
    const std::vector<Equation>& equations() const { return impl().equations; }

    /// Ambient-coordinate vertices, lexicographically sorted.
    const IntMat& vertices() const { return impl().data().vertices_ambient; }
    /// The same vertices in reduced coordinates, in matching order.
    const IntMat& reduced_vertices() const { return impl().data().vertices_reduced; }
    /// Reduced-coordinate facets, deterministically ordered.
    const std::vector<Facet>& facets() const { return impl().data().facets; }

    bool operator==(const LatticePolytope& o) const {
        return impl().ambient == o.impl().ambient && vertices() == o.vertices();
    }
    bool operator!=(const LatticePolytope& o) const { return !(*this == o); }

    /// Reduced coordinates of an ambient point, if it lies in the affine hull.
    std::optional<RatVec> reduce_point(const RatVec& p) const {
        const auto& im = impl();
        if (p.size() != im.ambient) throw InvalidParameterError("reduce_point: size mismatch");
        const std::size_t d = im.basis.size();
        RatMat a(im.ambient, RatVec(d));
        RatVec b(im.ambient);
        for (std::size_t i = 0; i < im.ambient; ++i) {
            for (std::size_t j = 0; j < d; ++j) a[i][j] = Rat(im.basis[j][i]);
            b[i] = p[i] - Rat(im.basepoint[i]);
        }
        return solve_rat(a, b);
    }

    /// Reduced coordinates of an ambient lattice point of the affine hull.
    std::optional<IntVec> reduce_lattice_point(const IntVec& p) const {
        auto y = reduce_point(to_rat(p));
        if (!y) return std::nullopt;
        IntVec out(y->size());
        for (std::size_t i = 0; i < y->size(); ++i) {
            // saturated chart basis: lattice points of the hull have integer coords
            if (!is_integral((*y)[i]))
                throw ContractError("reduce_lattice_point: chart lattice not saturated");
            out[i] = numerator((*y)[i]);
        }
        return out;
    }

    /// Map reduced coordinates back to the ambient space.
    IntVec unreduce(const IntVec& y) const {
        const auto& im = impl();
        IntVec p = im.basepoint;
        for (std::size_t j = 0; j < im.basis.size(); ++j)
            for (std::size_t i = 0; i < im.ambient; ++i) p[i] += y[j] * im.basis[j][i];
        return p;
    }

    bool contains(const RatVec& p) const {
        auto y = reduce_point(p);
        if (!y) return false;
        for (const auto& f : facets())
            if (rat_dot(to_rat(f.normal), *y) > Rat(f.offset)) return false;
        return true;
    }
    bool contains(const IntVec& p) const { return contains(to_rat(p)); }

    /// Relative-interior membership (strict on every facet).
    bool contains_in_relative_interior(const RatVec& p) const {
        auto y = reduce_point(p);
        if (!y) return false;
        for (const auto& f : facets())
            if (rat_dot(to_rat(f.normal), *y) >= Rat(f.offset)) return false;
        return true;
    }
    bool contains_in_relative_interior(const IntVec& p) const {
        return contains_in_relative_interior(to_rat(p));
    }

    /// All lattice points, by bounding-box scan in reduced coordinates.
    IntMat lattice_points() const {
        const auto& rv = reduced_vertices();
        const std::size_t d = dim();
        if (d == 0) return vertices();
        IntVec lo(d), hi(d);
        for (std::size_t j = 0; j < d; ++j) {
            lo[j] = rv[0][j];
            hi[j] = rv[0][j];
            for (const auto& v : rv) {
                lo[j] = std::min(lo[j], v[j]);
                hi[j] = std::max(hi[j], v[j]);
            }
        }
        Int cells = 1;
        for (std::size_t j = 0; j < d; ++j) cells *= hi[j] - lo[j] + 1;
        if (cells > kLatticeScanCap)
            throw ResourceLimitError("lattice_points: bounding box too large");
        IntMat out;
        IntVec y = lo;
        const auto& fs = facets();
        while (true) {
            bool inside = true;
            for (const auto& f : fs)
                if (dot(f.normal, y) > f.offset) {
                    inside = false;
                    break;
                }
            if (inside) out.push_back(unreduce(y));
            std::size_t j = 0;
            while (j < d) {
                if (y[j] < hi[j]) {
                    ++y[j];
                    break;
                }
                y[j] = lo[j];
                ++j;
            }
            if (j == d) break;
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Lattice points in the relative interior.
    IntMat interior_lattice_points() const {
        IntMat out;
        for (auto& p : lattice_points())
            if (contains_in_relative_interior(p)) out.push_back(p);
        return out;
    }

    /**
     * @brief True iff the polytope is reflexive: full-dimensional with a
     * unique interior lattice point v such that every facet of P - v has
     * offset 1 (facet normals are primitive by construction).
     */
    bool is_reflexive() const {
        if (dim() != ambient_dim())
            throw ContractError("is_reflexive: polytope is not full-dimensional");
        IntMat interior = interior_lattice_points();
        if (interior.size() != 1) return false;
        auto v = reduce_lattice_point(interior[0]);
        for (const auto& f : facets())
            if (f.offset - dot(f.normal, *v) != 1) return false;
        return true;
    }

    /// True iff every facet has lattice width one over the polytope.
    bool is_compressed() const {
        const auto& rv = reduced_vertices();
        for (const auto& f : facets()) {
            Int mn = dot(f.normal, rv[0]);
            for (const auto& v : rv) mn = std::min(mn, dot(f.normal, v));
            if (f.offset - mn != 1) return false;
        }
        return true;
    }

    /**
     * @brief True iff every coordinate-zeroing projection of every vertex
     * stays inside the polytope.
     */
    bool is_locally_anti_blocking() const {
        for (const auto& v : vertices()) {
            std::vector<std::size_t> support;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (v[i] != 0) support.push_back(i);
            if (support.size() > 20)
                throw ResourceLimitError("is_locally_anti_blocking: support too large");
            for (std::size_t mask = 0; mask < (std::size_t{1} << support.size()); ++mask) {
                IntVec proj = v;
                for (std::size_t b = 0; b < support.size(); ++b)
                    if (mask & (std::size_t{1} << b)) proj[support[b]] = 0;
                if (!contains(proj)) return false;
            }
        }
        return true;
    }

    /// Smallest face containing all the given points (which must lie in P).
    FaceHandle minimal_face(const IntMat& pts) const {
        RatMat rpts;
        for (const auto& p : pts) rpts.push_back(to_rat(p));
        return minimal_face_rat(rpts);
    }

    FaceHandle minimal_face_rat(const RatMat& pts) const {
        if (pts.empty()) throw InvalidParameterError("minimal_face: no points");
        const auto& fs = facets();
        std::vector<RatVec> reduced;
        for (const auto& p : pts) {
            auto y = reduce_point(p);
            if (!y || !contains(p))
                throw InvalidParameterError("minimal_face: point outside polytope");
            reduced.push_back(*y);
        }
        FaceHandle fh;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            bool tight = true;
            for (const auto& y : reduced)
                if (rat_dot(to_rat(fs[i].normal), y) != Rat(fs[i].offset)) {
                    tight = false;
                    break;
                }
            if (tight) fh.inequalities.push_back(i);
        }
        const auto& rv = reduced_vertices();
        for (std::size_t k = 0; k < rv.size(); ++k) {
            bool on = true;
            for (std::size_t i : fh.inequalities)
                if (dot(fs[i].normal, rv[k]) != fs[i].offset) {
                    on = false;
                    break;
                }
            if (on) fh.vertices.push_back(k);
        }
        return fh;
    }

    /// Ambient coordinates of a face's vertices.
    IntMat face_vertex_points(const FaceHandle& fh) const {
        IntMat out;
        for (std::size_t k : fh.vertices) out.push_back(vertices()[k]);
        return out;
    }

    /// Affine dimension of a face.
    std::size_t face_dim(const FaceHandle& fh) const {
        if (fh.vertices.empty()) throw InvalidParameterError("face_dim: empty face");
        const auto& rv = reduced_vertices();
        IntMat diffs;
        for (std::size_t i = 1; i < fh.vertices.size(); ++i) {
            IntVec d(dim());
            for (std::size_t j = 0; j < dim(); ++j)
                d[j] = rv[fh.vertices[i]][j] - rv[fh.vertices[0]][j];
            diffs.push_back(std::move(d));
        }
        return diffs.empty() ? 0 : rank_of(diffs);
    }

    /// True iff the face is the whole polytope.
    bool face_is_whole_polytope(const FaceHandle& fh) const {
        return fh.vertices.size() == vertices().size();
    }

    /// Vertex average (exact rational), in ambient coordinates.
    RatVec barycenter() const {
        const auto& vs = vertices();
        RatVec c(ambient_dim(), Rat(0));
        for (const auto& v : vs)
            for (std::size_t i = 0; i < c.size(); ++i) c[i] += Rat(v[i], vs.size());
        return c;
    }

    /// Ambient inequality representatives (unique only modulo the equations).
    std::vector<AmbientInequality> ambient_inequalities() const {
        const auto& im = impl();
        std::vector<AmbientInequality> out;
        for (const auto& f : facets()) {
            // find w with basis * w = normal, then w·x <= scale*offset + w·v0
            RatMat a(im.basis.size(), RatVec(im.ambient));
            for (std::size_t i = 0; i < im.basis.size(); ++i)
                for (std::size_t j = 0; j < im.ambient; ++j) a[i][j] = Rat(im.basis[i][j]);
            auto w = solve_rat(a, to_rat(f.normal));
            if (!w) throw ContractError("ambient_inequalities: unsolvable pullback");
            Int scale;
            IntVec wi = clear_denominators(*w, scale);
            out.push_back({wi, scale * f.offset + dot(wi, im.basepoint)});
        }
        return out;
    }

    /**
     * @brief Normalized volume with respect to the affine-hull lattice
     * (unimodular simplex = 1). Pyramid decomposition over facets, memoized
     * on vertex subsets.
     */
    Int normalized_volume() const {
        std::map<IntMat, Int> memo;
        IntMat rv = reduced_vertices();
        std::sort(rv.begin(), rv.end());
        return nvol(rv, memo);
    }

private:
    struct HullData {
        IntMat vertices_ambient;
        IntMat vertices_reduced;
        std::vector<Facet> facets;
    };

    struct Impl {
        std::size_t ambient = 0;
        IntMat points;  ///< deduped, sorted input points (ambient)
        IntVec basepoint;
        IntMat basis;  ///< rows: saturated lattice basis of the direction space
        std::vector<Equation> equations;
        mutable std::once_flag flag;
        mutable std::unique_ptr<const HullData> hull_data;

        const HullData& data() const {
            std::call_once(flag, [this] { hull_data = std::make_unique<HullData>(build()); });
            return *hull_data;
        }

        HullData build() const {
            const std::size_t d = basis.size();
            HullData out;
            IntMat reduced;
            for (const auto& p : points) {
                IntVec diff(ambient);
                for (std::size_t i = 0; i < ambient; ++i) diff[i] = p[i] - basepoint[i];
                auto y = solve(transpose_basis(), diff);
                if (!y) throw ContractError("hull: point escaped its own affine hull");
                IntVec yi(d);
                for (std::size_t j = 0; j < d; ++j) {
                    if (!is_integral((*y)[j]))
                        throw ContractError("hull: non-integral reduced coordinate");
                    yi[j] = numerator((*y)[j]);
                }
                reduced.push_back(std::move(yi));
            }
            if (d == 0) {
                out.vertices_ambient = points;
                out.vertices_reduced = reduced;
                return out;
            }
            // facets of conv(reduced) = extreme rays of {(a,c): a·p - c <= 0}
            IntMat rows;
            for (const auto& y : reduced) {
                IntVec r = y;
                r.push_back(Int(-1));
                rows.push_back(std::move(r));
            }
            IntMat rays = detail::dd_cone_rays(rows, d + 1);
            for (const auto& r : rays) {
                Facet f;
                f.normal.assign(r.begin(), r.end() - 1);
                f.offset = r.back();
                if (is_zero(f.normal))
                    throw ContractError("hull: degenerate facet ray");
                out.facets.push_back(std::move(f));
            }
            std::sort(out.facets.begin(), out.facets.end(),
                      [](const Facet& a, const Facet& b) {
                          return std::tie(a.normal, a.offset) < std::tie(b.normal, b.offset);
                      });
            // vertices: points whose tight facet normals span everything
            for (std::size_t k = 0; k < reduced.size(); ++k) {
                IntMat tight;
                for (const auto& f : out.facets)
                    if (dot(f.normal, reduced[k]) == f.offset) tight.push_back(f.normal);
                if (rank_of(tight) == d) {
                    out.vertices_ambient.push_back(points[k]);
                    out.vertices_reduced.push_back(reduced[k]);
                }
            }
            return out;
        }

        IntMat transpose_basis() const { return transpose(basis, ambient); }
    };

    const Impl& impl() const {
        if (!impl_) throw ContractError("LatticePolytope: empty handle");
        return *impl_;
    }

    static Int nvol(const IntMat& verts, std::map<IntMat, Int>& memo) {
        auto it = memo.find(verts);
        if (it != memo.end()) return it->second;
        LatticePolytope p = hull(verts);
        const std::size_t d = p.dim();
        Int result;
        const auto& rv = p.reduced_vertices();
        if (d == 0) {
            result = 1;
        } else if (rv.size() == d + 1) {
            IntMat edges;
            for (std::size_t i = 1; i <= d; ++i) {
                IntVec e(d);
                for (std::size_t j = 0; j < d; ++j) e[j] = rv[i][j] - rv[0][j];
                edges.push_back(std::move(e));
            }
            result = boost::multiprecision::abs(determinant(edges));
        } else {
            result = 0;
            const IntVec& apex = rv[0];
            for (const auto& f : p.facets()) {
                Int height = f.offset - dot(f.normal, apex);
                if (height == 0) continue;
                IntMat fverts;
                for (std::size_t k = 0; k < rv.size(); ++k)
                    if (dot(f.normal, rv[k]) == f.offset) fverts.push_back(rv[k]);
                std::sort(fverts.begin(), fverts.end());
                result += height * nvol(fverts, memo);
            }
        }
        memo.emplace(verts, result);
        return result;
    }

    std::shared_ptr<const Impl> impl_;
};

// ---------------------------------------------------------------------------
// free functions
// ---------------------------------------------------------------------------

/// P ∩ {x : sigma_i * x_i >= 0}; requires a full-dimensional polytope.
inline LatticePolytope restrict_to_orthant(const LatticePolytope& p,
                                           const std::vector<int>& sigma) {
    if (p.dim() != p.ambient_dim())
        throw ContractError("restrict_to_orthant: polytope is not full-dimensional");
    if (sigma.size() != p.ambient_dim())
        throw InvalidParameterError("restrict_to_orthant: sign vector size mismatch");
    std::vector<std::pair<IntVec, Int>> ineqs;
    for (const auto& f : p.ambient_inequalities()) ineqs.emplace_back(f.normal, f.offset);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (sigma[i] != 1 && sigma[i] != -1)
            throw InvalidParameterError("restrict_to_orthant: signs must be ±1");
        IntVec n(p.ambient_dim(), 0);
        n[i] = -sigma[i];
        ineqs.emplace_back(std::move(n), Int(0));
    }
    return LatticePolytope::from_h_description(p.ambient_dim(), {}, ineqs);
}

/// Free sum: conv((P × 0) ∪ (0 × Q)); both must contain the origin strictly.
inline LatticePolytope free_sum(const LatticePolytope& p, const LatticePolytope& q) {
    const IntVec zp(p.ambient_dim(), 0), zq(q.ambient_dim(), 0);
    if (!p.contains_in_relative_interior(zp) || p.dim() != p.ambient_dim())
        throw InvalidParameterError("free_sum: origin not interior to first summand");
    if (!q.contains_in_relative_interior(zq) || q.dim() != q.ambient_dim())
        throw InvalidParameterError("free_sum: origin not interior to second summand");
    IntMat pts;
    for (const auto& v : p.vertices()) {
        IntVec x = v;
        x.insert(x.end(), q.ambient_dim(), Int(0));
        pts.push_back(std::move(x));
    }
    for (const auto& v : q.vertices()) {
        IntVec x(p.ambient_dim(), 0);
        x.insert(x.end(), v.begin(), v.end());
        pts.push_back(std::move(x));
    }
    return LatticePolytope::hull(std::move(pts));
}

/// Join: conv((P × 0 × {0}) ∪ (0 × Q × {1})).
inline LatticePolytope join(const LatticePolytope& p, const LatticePolytope& q) {
    IntMat pts;
    for (const auto& v : p.vertices()) {
        IntVec x = v;
        x.insert(x.end(), q.ambient_dim(), Int(0));
        x.push_back(Int(0));
        pts.push_back(std::move(x));
    }
    for (const auto& v : q.vertices()) {
        IntVec x(p.ambient_dim(), 0);
        x.insert(x.end(), v.begin(), v.end());
        x.push_back(Int(1));
        pts.push_back(std::move(x));
    }
    return LatticePolytope::hull(std::move(pts));
}

/**
 * @brief True iff d+1 affinely independent lattice points span a simplex
 * that is unimodular within the lattice of its affine hull.
 */
inline bool simplex_is_unimodular(const IntMat& pts) {
    if (pts.empty()) throw InvalidParameterError("simplex_is_unimodular: no points");
    const std::size_t n = pts[0].size();
    IntMat edges;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        IntVec e(n);
        for (std::size_t j = 0; j < n; ++j) e[j] = pts[i][j] - pts[0][j];
        edges.push_back(std::move(e));
    }
    const std::size_t d = pts.size() - 1;
    if (d == 0) return true;
    if (rank_of(edges) != d)
        throw InvalidParameterError("simplex_is_unimodular: points affinely dependent");
    IntMat sat = saturate_rows(edges, n);
    IntMat coords;
    for (const auto& e : edges) {
        auto y = solve(transpose(sat, n), e);
        if (!y) throw ContractError("simplex_is_unimodular: edge escaped saturation");
        IntVec yi(y->size());
        for (std::size_t j = 0; j < y->size(); ++j) {
            if (!is_integral((*y)[j]))
                throw ContractError("simplex_is_unimodular: non-integral saturated coords");
            yi[j] = numerator((*y)[j]);
        }
        coords.push_back(std::move(yi));
    }
    Int det = determinant(coords);
    return det == 1 || det == -1;
}

/**
 * @brief Lattice-affine equivalence along an explicit vertex correspondence:
 * corr[i] = (index into p.vertices(), index into q.vertices()). True iff an
 * integer affine map with |det| = 1 on the affine-hull lattices maps each
 * corresponding pair onto each other.
 */
inline bool integral_equivalence(const LatticePolytope& p, const LatticePolytope& q,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& corr) {
    if (p.dim() != q.dim()) return false;
    if (corr.size() != p.vertices().size() || corr.size() != q.vertices().size()) return false;
    const std::size_t d = p.dim();
    const auto& pv = p.reduced_vertices();
    const auto& qv = q.reduced_vertices();
    // greedy affinely independent subset of the correspondence
    std::vector<std::size_t> idx{0};
    IntMat diffs;
    for (std::size_t i = 1; i < corr.size() && idx.size() < d + 1; ++i) {
        IntVec e(d);
        for (std::size_t j = 0; j < d; ++j)
            e[j] = pv[corr[i].first][j] - pv[corr[0].first][j];
        diffs.push_back(e);
        if (rank_of(diffs) == diffs.size())
            idx.push_back(i);
        else
            diffs.pop_back();
    }
    if (idx.size() != d + 1) return false;  // degenerate correspondence
    if (d == 0) return true;
    // solve M * (pv_i - pv_0) = qv_i - qv_0 over the chosen subset
    IntMat e_cols(d, IntVec(d)), f_cols(d, IntVec(d));
    for (std::size_t c = 0; c < d; ++c)
        for (std::size_t r = 0; r < d; ++r) {
            e_cols[r][c] = pv[corr[idx[c + 1]].first][r] - pv[corr[idx[0]].first][r];
            f_cols[r][c] = qv[corr[idx[c + 1]].second][r] - qv[corr[idx[0]].second][r];
        }
    // M = F E^{-1}: solve E^T M^T = F^T row by row
    IntMat et = transpose(e_cols, d);
    IntMat m_rows;
    for (std::size_t r = 0; r < d; ++r) {
        IntVec f_row(d);
        for (std::size_t c = 0; c < d; ++c) f_row[c] = f_cols[r][c];
        auto x = solve(et, f_row);
        if (!x) return false;
        IntVec xi(d);
        for (std::size_t j = 0; j < d; ++j) {
            if (!is_integral((*x)[j])) return false;
            xi[j] = numerator((*x)[j]);
        }
        m_rows.push_back(std::move(xi));
    }
    Int det = determinant(m_rows);
    if (det != 1 && det != -1) return false;
    // t = qv_0 - M pv_0, then verify the whole correspondence
    IntVec t(d);
    {
        IntVec mp = mat_vec(m_rows, pv[corr[idx[0]].first]);
        for (std::size_t j = 0; j < d; ++j) t[j] = qv[corr[idx[0]].second][j] - mp[j];
    }
    for (const auto& [pi, qi] : corr) {
        IntVec mp = mat_vec(m_rows, pv[pi]);
        for (std::size_t j = 0; j < d; ++j)
            if (mp[j] + t[j] != qv[qi][j]) return false;
    }
    return true;
}

/**
 * @brief True iff the given lattice points are exactly the vertex set of a
 * polytope integrally equivalent to the unit k-cube.
 */
inline bool is_unimodular_cube(IntMat pts, std::size_t k) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() != (std::size_t{1} << k)) return false;
    if (k == 0) return true;
    const std::size_t n = pts[0].size();
    const IntVec& v0 = pts[0];  // lex-min corner
    std::set<IntVec> diffs;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        IntVec d(n);
        for (std::size_t j = 0; j < n; ++j) d[j] = pts[i][j] - v0[j];
        diffs.insert(std::move(d));
    }
    std::vector<IntVec> dlist(diffs.begin(), diffs.end());
    // choose k generators; subset sums must reproduce the difference set
    std::vector<std::size_t> comb(k);
    std::function<bool(std::size_t, std::size_t)> try_comb = [&](std::size_t pos,
                                                                 std::size_t start) {
        if (pos == k) {
            std::set<IntVec> sums;
            for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
                IntVec s(n, 0);
                for (std::size_t b = 0; b < k; ++b)
                    if (mask & (std::size_t{1} << b))
                        for (std::size_t j = 0; j < n; ++j) s[j] += dlist[comb[b]][j];
                sums.insert(std::move(s));
            }
            if (sums != diffs) return false;
            IntMat simplex{v0};
            for (std::size_t b = 0; b < k; ++b) {
                IntVec p = v0;
                for (std::size_t j = 0; j < n; ++j) p[j] += dlist[comb[b]][j];
                simplex.push_back(std::move(p));
            }
            IntMat gens;
            for (std::size_t b = 0; b < k; ++b) gens.push_back(dlist[comb[b]]);
            if (rank_of(gens) != k) return false;
            return simplex_is_unimodular(simplex);
        }
        for (std::size_t i = start; i < dlist.size(); ++i) {
            comb[pos] = i;
            if (try_comb(pos + 1, i + 1)) return true;
        }
        return false;
    };
    return try_comb(0, 0);
}

}  // namespace flowlattice
