#include <catch2/catch_amalgamated.hpp>

#include <flowlattice/polytope.hpp>

#include <test_support.hpp>

#include <algorithm>
#include <cstdlib>
#include <random>

using namespace flowlattice;

namespace {

IntVec iv(std::initializer_list<int> xs) {
    IntVec v;
    for (int x : xs) v.emplace_back(x);
    return v;
}

IntMat im(std::initializer_list<std::initializer_list<int>> rows) {
    IntMat m;
    for (auto r : rows) m.push_back(iv(r));
    return m;
}

// fixtures: pentagon and hexagon with unit facet offsets around the origin
const IntMat kPentagon = im({{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}});
const IntMat kHexagon = im({{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}});

using EnvGuard = fixtures::EnvGuard;

}  // namespace

TEST_CASE("hull filters interior and non-extreme points; reject mode throws") {
    IntMat pts = im({{0, 0}, {2, 0}, {0, 2}, {2, 2}, {1, 1}, {2, 1}});
    auto p = LatticePolytope::hull(pts);
    CHECK(p.vertices() == im({{0, 0}, {0, 2}, {2, 0}, {2, 2}}));
    CHECK(p.dim() == 2);
    CHECK(p.ambient_dim() == 2);
    CHECK_THROWS_AS(LatticePolytope::hull(pts, LatticePolytope::NonExtreme::reject),
                    InvalidParameterError);
    CHECK_NOTHROW(LatticePolytope::hull(p.vertices(), LatticePolytope::NonExtreme::reject));
    CHECK_THROWS_AS(LatticePolytope::hull(IntMat{}), InvalidParameterError);
}

TEST_CASE("hull is idempotent and input-order independent") {
    std::mt19937 rng(7);
    IntMat pts = kPentagon;
    for (int it = 0; it < 10; ++it) {
        std::shuffle(pts.begin(), pts.end(), rng);
        auto p = LatticePolytope::hull(pts);
        auto q = LatticePolytope::hull(p.vertices());
        CHECK(p == q);
        CHECK(p.facets() == q.facets());
    }
}

TEST_CASE("unit square: facets, volume, lattice points, predicates") {
    auto sq = LatticePolytope::hull(im({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
    REQUIRE(sq.facets().size() == 4);
    // every facet is tight on dim affinely independent vertices
    for (std::size_t i = 0; i < sq.facets().size(); ++i) {
        FaceHandle fh;
        fh.inequalities = {i};
        const auto& f = sq.facets()[i];
        for (std::size_t k = 0; k < sq.reduced_vertices().size(); ++k)
            if (dot(f.normal, sq.reduced_vertices()[k]) == f.offset) fh.vertices.push_back(k);
        CHECK(sq.face_dim(fh) == 1);
        CHECK(fh.vertices.size() >= 2);
    }
    CHECK(sq.normalized_volume() == 2);
    CHECK(sq.lattice_points().size() == 4);
    CHECK(sq.is_compressed());
    CHECK(sq.is_locally_anti_blocking());
    CHECK(!sq.is_reflexive());  // no interior lattice point
}

TEST_CASE("pentagon fixture: facet list, reflexivity, volume") {
    auto p = LatticePolytope::hull(kPentagon);
    REQUIRE(p.vertices().size() == 5);
    std::vector<LatticePolytope::Facet> expect = {
        {iv({-1, -1}), Int(1)}, {iv({-1, 0}), Int(1)}, {iv({0, 1}), Int(1)},
        {iv({1, -1}), Int(1)}, {iv({1, 1}), Int(1)},
    };
    CHECK(p.facets() == expect);
    CHECK(p.is_reflexive());
    CHECK(p.interior_lattice_points() == im({{0, 0}}));
    CHECK(p.normalized_volume() == 5);
    CHECK(!p.is_compressed());  // width 2 across x+y<=1
    CHECK(p.is_locally_anti_blocking());
    CHECK(p.lattice_points().size() == 6);
}

TEST_CASE("hexagon fixture: reflexive with exactly seven lattice points") {
    auto h = LatticePolytope::hull(kHexagon);
    CHECK(h.vertices().size() == 6);
    CHECK(h.facets().size() == 6);
    CHECK(h.is_reflexive());
    CHECK(h.lattice_points().size() == 7);
    CHECK(h.normalized_volume() == 6);
}

TEST_CASE("low-dimensional polytopes reduce to a saturated chart") {
    // collinear points in R^3 with a non-primitive-looking spread
    auto seg = LatticePolytope::hull(im({{1, 1, 1}, {2, 3, 4}, {3, 5, 7}}));
    CHECK(seg.dim() == 1);
    CHECK(seg.vertices() == im({{1, 1, 1}, {3, 5, 7}}));
    CHECK(seg.lattice_points() == im({{1, 1, 1}, {2, 3, 4}, {3, 5, 7}}));
    CHECK(seg.equations().size() == 2);
    for (const auto& e : seg.equations())
        for (const auto& v : seg.vertices()) CHECK(dot(e.normal, v) == e.value);
    CHECK(seg.contains(iv({2, 3, 4})));
    CHECK(!seg.contains(iv({2, 3, 5})));
    RatVec mid{Rat(3, 2), Rat(2), Rat(5, 2)};
    CHECK(seg.contains(mid));
    CHECK(seg.contains_in_relative_interior(mid));
    CHECK(!seg.contains_in_relative_interior(iv({1, 1, 1})));
    // ambient inequality representatives describe the same segment
    for (const auto& q : seg.ambient_inequalities())
        for (const auto& v : seg.vertices()) CHECK(dot(q.normal, v) <= q.offset);
    CHECK_THROWS_AS(seg.is_reflexive(), ContractError);
}

TEST_CASE("from_h_description round-trips the square and rejects bad regions") {
    std::vector<std::pair<IntVec, Int>> ineqs = {
        {iv({1, 0}), Int(1)}, {iv({-1, 0}), Int(0)}, {iv({0, 1}), Int(1)}, {iv({0, -1}), Int(0)},
    };
    auto sq = LatticePolytope::from_h_description(2, {}, ineqs);
    CHECK(sq.vertices() == im({{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
    // equality-constrained: segment x+y=1 in the square
    auto seg = LatticePolytope::from_h_description(2, {{iv({1, 1}), Int(1)}}, ineqs);
    CHECK(seg.vertices() == im({{0, 1}, {1, 0}}));
    // half-integral vertex
    std::vector<std::pair<IntVec, Int>> halved = ineqs;
    halved[0] = {iv({2, 0}), Int(1)};
    CHECK_THROWS_AS(LatticePolytope::from_h_description(2, {}, halved), NonLatticeError);
    // unbounded
    CHECK_THROWS_AS(
        LatticePolytope::from_h_description(2, {}, {{iv({-1, 0}), Int(0)}, {iv({0, -1}), Int(0)}}),
        InvalidParameterError);
    // empty
    CHECK_THROWS_AS(
        LatticePolytope::from_h_description(1, {}, {{iv({1}), Int(-1)}, {iv({-1}), Int(0)}}),
        InvalidParameterError);
}

TEST_CASE("minimal_face identifies vertices, edges, and the whole polytope") {
    auto sq = LatticePolytope::hull(im({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
    auto corner = sq.minimal_face(im({{0, 0}}));
    CHECK(corner.vertices.size() == 1);
    CHECK(sq.face_vertex_points(corner) == im({{0, 0}}));
    CHECK(sq.face_dim(corner) == 0);
    auto edge = sq.minimal_face(im({{0, 0}, {1, 0}}));
    CHECK(sq.face_vertex_points(edge) == im({{0, 0}, {1, 0}}));
    CHECK(sq.face_dim(edge) == 1);
    auto whole = sq.minimal_face(im({{0, 0}, {1, 1}}));
    CHECK(sq.face_is_whole_polytope(whole));
    CHECK(whole.inequalities.empty());
    CHECK_THROWS_AS(sq.minimal_face(im({{5, 5}})), InvalidParameterError);
}

TEST_CASE("lattice point scan matches recursive slicing oracle") {
    // oracle: slice along the first reduced coordinate using H->V enumeration
    auto slice_count = [](const LatticePolytope& p) {
        std::function<std::size_t(const std::vector<std::pair<IntVec, Int>>&, std::size_t)>
            count_rec = [&](const std::vector<std::pair<IntVec, Int>>& ineqs, std::size_t d) {
                RatMat verts = detail::enumerate_h_vertices(d, {}, ineqs);
                Rat lo = verts[0][0], hi = verts[0][0];
                for (const auto& v : verts) {
                    lo = std::min(lo, v[0]);
                    hi = std::max(hi, v[0]);
                }
                std::size_t total = 0;
                for (Int t = rat_ceil(lo); t <= rat_floor(hi); ++t) {
                    if (d == 1) {
                        ++total;
                        continue;
                    }
                    // substitute y0 = t
                    std::vector<std::pair<IntVec, Int>> sub;
                    bool feasible = true;
                    for (const auto& [n, c] : ineqs) {
                        IntVec rest(n.begin() + 1, n.end());
                        Int rhs = c - n[0] * t;
                        if (is_zero(rest)) {
                            if (rhs < 0) feasible = false;
                            continue;
                        }
                        sub.emplace_back(rest, rhs);
                    }
                    if (!feasible) continue;
                    try {
                        total += count_rec(sub, d - 1);
                    } catch (const InvalidParameterError&) {
                        // empty slice
                    }
                }
                return total;
            };
        std::vector<std::pair<IntVec, Int>> ineqs;
        for (const auto& f : p.facets()) ineqs.emplace_back(f.normal, f.offset);
        return count_rec(ineqs, p.dim());
    };
    for (const auto& pts : {kPentagon, kHexagon, im({{0, 0}, {2, 0}, {0, 2}, {2, 2}})}) {
        auto p = LatticePolytope::hull(pts);
        CHECK(p.lattice_points().size() == slice_count(p));
    }
}

TEST_CASE("normalized volume is intrinsic and matches slice examples") {
    CHECK(LatticePolytope::hull(im({{0, 0}, {1, 0}, {0, 1}})).normalized_volume() == 1);
    CHECK(LatticePolytope::hull(im({{0, 0}, {2, 0}, {0, 2}})).normalized_volume() == 4);
    auto cube = LatticePolytope::hull(
        im({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}));
    CHECK(cube.normalized_volume() == 6);
    // simplex in the plane x+y+z = 1 has intrinsic volume 1
    auto tri = LatticePolytope::hull(im({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    CHECK(tri.normalized_volume() == 1);
}

TEST_CASE("simplex_is_unimodular distinguishes unit from doubled simplices") {
    CHECK(simplex_is_unimodular(im({{0, 0}, {1, 0}, {0, 1}})));
    CHECK(!simplex_is_unimodular(im({{0, 0}, {2, 0}, {0, 1}})));
    CHECK(simplex_is_unimodular(im({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})));
    CHECK(!simplex_is_unimodular(im({{0, 0, 0}, {1, 1, 0}, {1, -1, 0}})));
    CHECK(simplex_is_unimodular(im({{4, 7}})));  // a point
    CHECK_THROWS_AS(simplex_is_unimodular(im({{0, 0}, {1, 0}, {2, 0}})), InvalidParameterError);
}

TEST_CASE("free sum and join") {
    auto seg = LatticePolytope::hull(im({{-1}, {1}}));
    auto cross = free_sum(seg, seg);
    CHECK(cross.vertices() == im({{-1, 0}, {0, -1}, {0, 1}, {1, 0}}));
    // normalized volumes multiply under free sums: 2 * 2
    CHECK(cross.normalized_volume() == 4);
    CHECK(cross.is_reflexive());
    auto unit = LatticePolytope::hull(im({{0}, {1}}));
    CHECK_THROWS_AS(free_sum(unit, seg), InvalidParameterError);
    auto j = join(unit, unit);
    CHECK(j.ambient_dim() == 3);
    CHECK(j.dim() == 3);
    CHECK(j.vertices().size() == 4);
    CHECK(j.normalized_volume() == 1);  // join of simplices is a simplex
}

TEST_CASE("integral equivalence via explicit correspondence") {
    auto sq = LatticePolytope::hull(im({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
    // shear + translate: (x, y) -> (x + y + 3, y + 4)
    IntMat mapped;
    for (const auto& v : sq.vertices()) mapped.push_back(iv({0, 0}));
    for (std::size_t i = 0; i < sq.vertices().size(); ++i) {
        mapped[i][0] = sq.vertices()[i][0] + sq.vertices()[i][1] + 3;
        mapped[i][1] = sq.vertices()[i][1] + 4;
    }
    auto sheared = LatticePolytope::hull(mapped);
    // correspondence by construction: vertex i of sq maps to mapped[i]
    std::vector<std::pair<std::size_t, std::size_t>> corr;
    for (std::size_t i = 0; i < sq.vertices().size(); ++i) {
        auto it = std::find(sheared.vertices().begin(), sheared.vertices().end(), mapped[i]);
        REQUIRE(it != sheared.vertices().end());
        corr.emplace_back(i, static_cast<std::size_t>(it - sheared.vertices().begin()));
    }
    CHECK(integral_equivalence(sq, sheared, corr));
    // doubled square is not equivalent under any correspondence of this shape
    auto big = LatticePolytope::hull(im({{0, 0}, {2, 0}, {0, 2}, {2, 2}}));
    std::vector<std::pair<std::size_t, std::size_t>> ident;
    for (std::size_t i = 0; i < 4; ++i) ident.emplace_back(i, i);
    CHECK(!integral_equivalence(sq, big, ident));
}

TEST_CASE("unimodular cube recognition") {
    CHECK(is_unimodular_cube(im({{3, 7}}), 0));
    CHECK(is_unimodular_cube(im({{0, 0}, {1, 0}}), 1));
    CHECK(is_unimodular_cube(im({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), 2));
    CHECK(is_unimodular_cube(im({{0, 0}, {1, 0}, {1, 1}, {2, 1}}), 2));  // sheared
    CHECK(!is_unimodular_cube(im({{0, 0}, {2, 0}, {0, 2}, {2, 2}}), 2));  // doubled
    CHECK(!is_unimodular_cube(im({{0, 0}, {1, 0}, {0, 1}}), 2));          // wrong count
    // square living in a plane of R^3
    CHECK(is_unimodular_cube(im({{0, 0, 0}, {1, 0, 1}, {0, 1, 0}, {1, 1, 1}}), 2));
    auto cube = im({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1},
                    {1, 1, 1}});
    CHECK(is_unimodular_cube(cube, 3));
    CHECK(!is_unimodular_cube(cube, 2));
}

TEST_CASE("orthant restrictions of the pentagon") {
    auto p = LatticePolytope::hull(kPentagon);
    auto pp = restrict_to_orthant(p, {1, 1});
    CHECK(pp.vertices() == im({{0, 0}, {0, 1}, {1, 0}}));
    CHECK(pp.is_compressed());
    auto mp = restrict_to_orthant(p, {-1, 1});
    CHECK(mp.vertices() == im({{-1, 0}, {-1, 1}, {0, 0}, {0, 1}}));
    CHECK(mp.is_compressed());
    CHECK_THROWS_AS(restrict_to_orthant(p, {1}), InvalidParameterError);
    auto seg = LatticePolytope::hull(im({{0, 0}, {1, 1}}));
    CHECK_THROWS_AS(restrict_to_orthant(seg, {1, 1}), ContractError);
}

TEST_CASE("local anti-blocking detects a shifted square") {
    auto shifted = LatticePolytope::hull(im({{1, 1}, {2, 1}, {1, 2}, {2, 2}}));
    CHECK(!shifted.is_locally_anti_blocking());
    auto cross = LatticePolytope::hull(im({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}));
    CHECK(cross.is_locally_anti_blocking());
}

TEST_CASE("resource caps: dimension and vertex count") {
    // 8-dimensional cross-polytope exceeds the default cap of 7
    IntMat pts;
    for (int i = 0; i < 8; ++i) {
        IntVec a(8, 0), b(8, 0);
        a[static_cast<std::size_t>(i)] = 1;
        b[static_cast<std::size_t>(i)] = -1;
        pts.push_back(a);
        pts.push_back(b);
    }
    CHECK_THROWS_AS(LatticePolytope::hull(pts), ResourceLimitError);
    {
        EnvGuard guard("FLOWLATTICE_DIM_CAP", "8");
        CHECK_NOTHROW(LatticePolytope::hull(pts));
    }
    CHECK_THROWS_AS(LatticePolytope::hull(pts), ResourceLimitError);
    IntMat many;
    for (int i = 0; i <= 200; ++i) many.push_back(iv({i}));
    CHECK_THROWS_AS(LatticePolytope::hull(many), ResourceLimitError);
}

TEST_CASE("barycenter is the exact vertex average") {
    auto tri = LatticePolytope::hull(im({{0, 0}, {1, 0}, {0, 1}}));
    RatVec c = tri.barycenter();
    CHECK(c == RatVec{Rat(1, 3), Rat(1, 3)});
    CHECK(tri.contains(c));
    CHECK(tri.contains_in_relative_interior(c));
}
