#pragma once

/**
 * @brief Route enumeration, coherence, g-vectors, route pairs, and the
 * coherence-clique (DKK) triangulation data.
 */

#include <flowlattice/dag.hpp>
#include <flowlattice/numeric.hpp>

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <vector>

namespace flowlattice {

/// A source-to-sink directed path.
struct Route {
    std::vector<std::size_t> edge_ids;
    std::vector<std::size_t> vertex_seq;  ///< edge_ids.size() + 1 vertices
    bool is_exceptional = false;          ///< constant framing labels

    bool operator==(const Route& o) const { return edge_ids == o.edge_ids; }
};

/// All source-to-sink routes, ordered lexicographically by edge-id sequence.
inline std::vector<Route> enumerate_routes(const FramedDag& d) {
    std::vector<Route> out;
    std::vector<std::size_t> edges;
    std::vector<std::size_t> verts{d.source()};
    auto dfs = [&](auto&& self, std::size_t v) -> void {
        if (v == d.sink()) {
            Route r;
            r.edge_ids = edges;
            r.vertex_seq = verts;
            r.is_exceptional = true;
            for (std::size_t id : edges)
                if (d.edge(id).label != d.edge(edges[0]).label) r.is_exceptional = false;
            out.push_back(std::move(r));
            return;
        }
        for (std::size_t id : d.out_edges(v)) {
            edges.push_back(id);
            verts.push_back(d.edge(id).head);
            self(self, d.edge(id).head);
            verts.pop_back();
            edges.pop_back();
        }
    };
    dfs(dfs, d.source());
    return out;
}

struct CoherenceResult {
    bool coherent = true;
    /// first (in R's traversal order) maximal common subroute [u,v] where the
    /// framing orders the partial routes differently on the two sides
    std::optional<std::array<std::size_t, 2>> conflict_at;
};

/**
 * @brief Maximal common subroutes of R and S, as endpoint pairs [u,v] in R's
 * traversal order. Components may be single vertices; the ones containing
 * the source or the sink are included, so any two routes have at least two.
 */
inline std::vector<std::array<std::size_t, 2>> overlap_components(const FramedDag& d,
                                                                  const Route& r,
                                                                  const Route& s) {
    (void)d;
    std::set<std::size_t> s_edges(s.edge_ids.begin(), s.edge_ids.end());
    std::set<std::size_t> s_verts(s.vertex_seq.begin(), s.vertex_seq.end());
    std::vector<std::array<std::size_t, 2>> out;
    const std::size_t n = r.vertex_seq.size();
    std::size_t i = 0;
    while (i < n) {
        if (!s_verts.count(r.vertex_seq[i])) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i + 1 < n && s_edges.count(r.edge_ids[i])) ++i;
        out.push_back({r.vertex_seq[start], r.vertex_seq[i]});
        ++i;
    }
    return out;
}

/**
 * @brief Decides coherence of two routes.
 *
 * Scans the maximal common subroutes of R and S. At a component [u,v] with
 * both endpoints inner, the routes enter u on the two distinct in-edges and
 * leave v on the two distinct out-edges, so the in-side order and out-side
 * order disagree exactly when R's entry label at u differs from R's exit
 * label at v. Components touching the source or sink have equal partial
 * routes on that side and never conflict.
 */
inline CoherenceResult coherent(const FramedDag& d, const Route& r, const Route& s) {
    for (const auto& comp : overlap_components(d, r, s)) {
        const std::size_t u = comp[0], v = comp[1];
        if (!d.is_inner(u) || !d.is_inner(v)) continue;
        auto pos = [&](std::size_t w) {
            return static_cast<std::size_t>(
                std::find(r.vertex_seq.begin(), r.vertex_seq.end(), w) - r.vertex_seq.begin());
        };
        int in_label = d.edge(r.edge_ids[pos(u) - 1]).label;
        int out_label = d.edge(r.edge_ids[pos(v)]).label;
        if (in_label != out_label) return {false, {{u, v}}};
    }
    return {true, std::nullopt};
}

/// Entries indexed by inner vertex (v-1); values in {-1, 0, +1}.
struct GVector {
    IntVec entries;
    bool operator==(const GVector& o) const { return entries == o.entries; }
    bool operator<(const GVector& o) const { return entries < o.entries; }
};

/// a_v = -1 where the route passes v entering with label 1 and leaving with
/// label 2; +1 for the reverse pattern; 0 otherwise.
inline GVector g_vector(const FramedDag& d, const Route& r) {
    GVector g;
    g.entries.assign(d.n_inner(), Int(0));
    for (std::size_t j = 1; j + 1 < r.vertex_seq.size(); ++j) {
        int in = d.edge(r.edge_ids[j - 1]).label;
        int out = d.edge(r.edge_ids[j]).label;
        if (in == 1 && out == 2) g.entries[r.vertex_seq[j] - 1] = -1;
        if (in == 2 && out == 1) g.entries[r.vertex_seq[j] - 1] = 1;
    }
    return g;
}

/// Number of label changes along the route's edge sequence.
inline int switch_count(const FramedDag& d, const Route& r) {
    int n = 0;
    for (std::size_t j = 0; j + 1 < r.edge_ids.size(); ++j)
        if (d.edge(r.edge_ids[j]).label != d.edge(r.edge_ids[j + 1]).label) ++n;
    return n;
}

enum class LegLabel { one, two, short_exceptional };

/// Ordered name pair of a route: (source-edge, sink-edge) when the route's
/// inner support lies on a label-2 leg, the reverse on a label-1 leg, and
/// (i,i) for the short exceptional at vertex i.
struct RoutePair {
    EdgeName first;
    EdgeName second;
    LegLabel leg_label = LegLabel::short_exceptional;

    auto operator<=>(const RoutePair&) const = default;
};

inline RoutePair route_pair(const FramedDag& d, const Route& r) {
    if ((d.kind() != DagKind::path && d.kind() != DagKind::cycle) || !d.is_lab_framing())
        throw ContractError("route_pair: requires a lab-framed path or cycle DAG");
    const Edge& src = d.edge(r.edge_ids.front());
    const Edge& snk = d.edge(r.edge_ids.back());
    if (r.edge_ids.size() == 2 && src.label == snk.label)
        return {src.name.value(), snk.name.value(), LegLabel::short_exceptional};
    int leg_label = 0;
    if (r.edge_ids.size() == 2) {
        auto through = d.legs_through(src.head);
        if (through.size() != 1)
            throw ContractError("route_pair: single-vertex support on several legs");
        leg_label = d.legs()[through[0]].label;
    } else {
        for (const Leg& leg : d.legs()) {
            bool all = true;
            for (std::size_t j = 1; j + 1 < r.edge_ids.size(); ++j)
                if (std::find(leg.edge_ids.begin(), leg.edge_ids.end(), r.edge_ids[j]) ==
                    leg.edge_ids.end())
                    all = false;
            if (all) {
                leg_label = leg.label;
                break;
            }
        }
        if (leg_label == 0)
            throw ContractError("route_pair: route not supported on a single leg");
    }
    if (leg_label == 2) return {src.name.value(), snk.name.value(), LegLabel::two};
    return {snk.name.value(), src.name.value(), LegLabel::one};
}

/// A set of pairwise coherent routes, as sorted indices into the route list.
struct Clique {
    std::vector<std::size_t> route_indices;
    bool operator==(const Clique& o) const { return route_indices == o.route_indices; }
};

/**
 * @brief All maximal cliques of the coherence graph, deterministically
 * ordered. For ample framings these index the maximal simplices of the
 * canonical triangulation of the flow polytope.
 */
inline std::vector<Clique> dkk_triangulation(const FramedDag& d) {
    const std::vector<Route> routes = enumerate_routes(d);
    const std::size_t n = routes.size();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            adj[i][j] = adj[j][i] = coherent(d, routes[i], routes[j]).coherent;

    std::vector<Clique> cliques;
    std::vector<std::size_t> current;
    // Bron-Kerbosch with pivoting; sets kept sorted for determinism
    auto bk = [&](auto&& self, std::vector<std::size_t> p, std::vector<std::size_t> x) -> void {
        if (p.empty() && x.empty()) {
            cliques.push_back({current});
            return;
        }
        std::size_t pivot = 0, best = 0;
        bool have = false;
        for (std::size_t u : p) {
            std::size_t cnt = 0;
            for (std::size_t w : p)
                if (adj[u][w]) ++cnt;
            if (!have || cnt > best) {
                have = true;
                best = cnt;
                pivot = u;
            }
        }
        for (std::size_t u : x) {
            std::size_t cnt = 0;
            for (std::size_t w : p)
                if (adj[u][w]) ++cnt;
            if (!have || cnt > best) {
                have = true;
                best = cnt;
                pivot = u;
            }
        }
        std::vector<std::size_t> candidates;
        for (std::size_t v : p)
            if (!adj[pivot][v]) candidates.push_back(v);
        for (std::size_t v : candidates) {
            std::vector<std::size_t> p2, x2;
            for (std::size_t w : p)
                if (adj[v][w]) p2.push_back(w);
            for (std::size_t w : x)
                if (adj[v][w]) x2.push_back(w);
            current.push_back(v);
            self(self, std::move(p2), std::move(x2));
            current.pop_back();
            p.erase(std::find(p.begin(), p.end(), v));
            x.insert(std::lower_bound(x.begin(), x.end(), v), v);
        }
    };
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    bk(bk, std::move(p), {});
    for (auto& c : cliques) std::sort(c.route_indices.begin(), c.route_indices.end());
    std::sort(cliques.begin(), cliques.end(), [](const Clique& a, const Clique& b) {
        return a.route_indices < b.route_indices;
    });
    return cliques;
}

/**
 * @brief For a two-leg cycle DAG: the eight routes contained in the edge
 * union of the two long exceptional routes. Empty for every other DAG.
 */
inline std::vector<Route> anomalous_routes(const FramedDag& d) {
    if (d.kind() != DagKind::cycle || d.k().size() != 2) return {};
    std::set<std::size_t> allowed;
    for (const auto& e : d.edges()) {
        if (e.tail != d.source() || e.name->marker == Marker::plain) continue;
        allowed.insert(e.id);
        std::size_t v = e.head;
        while (v != d.sink()) {
            std::size_t next = d.out_edge_with_label(v, e.label);
            allowed.insert(next);
            v = d.edge(next).head;
        }
    }
    std::vector<Route> out;
    for (const Route& r : enumerate_routes(d)) {
        bool inside = true;
        for (std::size_t id : r.edge_ids)
            if (!allowed.count(id)) inside = false;
        if (inside) out.push_back(r);
    }
    return out;
}

/// Indicator vector of a route in edge-id coordinate order.
inline IntVec route_indicator(const FramedDag& d, const Route& r) {
    IntVec x(d.edges().size(), Int(0));
    std::vector<std::size_t> order;
    for (const auto& e : d.edges()) order.push_back(e.id);
    for (std::size_t id : r.edge_ids) {
        auto it = std::lower_bound(order.begin(), order.end(), id);
        x[static_cast<std::size_t>(it - order.begin())] = 1;
    }
    return x;
}

}  // namespace flowlattice
