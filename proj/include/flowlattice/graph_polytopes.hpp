#pragma once

/**
 * @brief Polytopes attached to a framed DAG: the unit flow polytope (hull of
 * route indicators), the g-polytope (hull of g-vectors), the conservation
 * H-description, and the face-of-edge-set correspondence.
 */

#include <flowlattice/dag.hpp>
#include <flowlattice/polytope.hpp>
#include <flowlattice/routes.hpp>

#include <optional>
#include <set>
#include <vector>

namespace flowlattice {

/// Coordinates of R^E in ascending edge-id order.
inline std::vector<std::size_t> edge_coordinate_order(const FramedDag& d) {
    std::vector<std::size_t> order;
    for (const auto& e : d.edges()) order.push_back(e.id);
    return order;
}

/// Convex hull of the indicator vectors of all routes. Every route indicator
/// is a vertex, so hull construction runs in reject mode as a self-check.
inline LatticePolytope flow_polytope(const FramedDag& d) {
    IntMat pts;
    for (const Route& r : enumerate_routes(d)) pts.push_back(route_indicator(d, r));
    return LatticePolytope::hull(pts, LatticePolytope::NonExtreme::reject);
}

/// The same polytope from its defining linear system: nonnegative edge
/// variables, conservation at every inner vertex, unit outflow at the source.
inline LatticePolytope flow_polytope_from_conservation(const FramedDag& d) {
    const auto order = edge_coordinate_order(d);
    const std::size_t m = order.size();
    auto coord = [&](std::size_t id) {
        return static_cast<std::size_t>(
            std::lower_bound(order.begin(), order.end(), id) - order.begin());
    };
    std::vector<std::pair<IntVec, Int>> eqs, ineqs;
    for (std::size_t v = 1; v <= d.n_inner(); ++v) {
        IntVec row(m, Int(0));
        for (const auto& e : d.edges()) {
            if (e.head == v) row[coord(e.id)] += 1;
            if (e.tail == v) row[coord(e.id)] -= 1;
        }
        eqs.push_back({row, Int(0)});
    }
    IntVec unit(m, Int(0));
    for (const auto& e : d.edges())
        if (e.tail == d.source()) unit[coord(e.id)] = 1;
    eqs.push_back({unit, Int(1)});
    for (std::size_t j = 0; j < m; ++j) {
        IntVec row(m, Int(0));
        row[j] = -1;
        ineqs.push_back({row, Int(0)});
    }
    return LatticePolytope::from_h_description(m, eqs, ineqs);
}

/// Convex hull of the g-vectors of all routes (exceptional routes contribute
/// the origin, which lands in the interior).
inline LatticePolytope g_polytope(const FramedDag& d) {
    IntMat pts;
    for (const Route& r : enumerate_routes(d)) pts.push_back(g_vector(d, r).entries);
    return LatticePolytope::hull(pts, LatticePolytope::NonExtreme::filter);
}

/// Routes supported inside an edge set, and the face of the g-polytope their
/// g-vectors generate. The face is proper exactly when the edge set contains
/// no complete exceptional route; otherwise the g-vectors include the origin
/// and only the whole polytope contains them, reported via is_proper=false.
struct EdgeSetFace {
    std::vector<std::size_t> route_indices;  ///< indices into enumerate_routes(d)
    bool is_proper = true;
    std::optional<FaceHandle> face;  ///< face of the g-polytope when proper
};

inline EdgeSetFace face_from_edge_set(const FramedDag& d, const std::set<std::size_t>& edge_set,
                                      const LatticePolytope& gp) {
    EdgeSetFace out;
    const auto routes = enumerate_routes(d);
    IntMat gs;
    for (std::size_t i = 0; i < routes.size(); ++i) {
        bool inside = true;
        for (std::size_t id : routes[i].edge_ids)
            if (!edge_set.count(id)) inside = false;
        if (!inside) continue;
        out.route_indices.push_back(i);
        if (routes[i].is_exceptional) out.is_proper = false;
        gs.push_back(g_vector(d, routes[i]).entries);
    }
    if (out.is_proper && !gs.empty()) out.face = gp.minimal_face(gs);
    return out;
}

inline EdgeSetFace face_from_edge_set(const FramedDag& d,
                                      const std::set<std::size_t>& edge_set) {
    return face_from_edge_set(d, edge_set, g_polytope(d));
}

}  // namespace flowlattice
