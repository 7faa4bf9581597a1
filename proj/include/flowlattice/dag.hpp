#pragma once

/**
 * @brief Framed DAG construction and validation.
 *
 * Builds the path and cycle families with their alternating-leg framing,
 * accepts validated general full DAGs, names source/sink edges by the
 * exceptional route through them, and enumerates ample framings.
 */

#include <flowlattice/numeric.hpp>

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace flowlattice {

enum class Marker { minus, plain, plus };

/// Name of a source- or sink-adjacent edge: an inner vertex with a marker,
/// ordered 1⁻ < 1 < 1⁺ < 2⁻ < …
struct EdgeName {
    std::size_t base = 0;
    Marker marker = Marker::plain;

    auto operator<=>(const EdgeName&) const = default;

    std::string str() const {
        std::string s = std::to_string(base);
        if (marker == Marker::minus) s += '-';
        if (marker == Marker::plus) s += '+';
        return s;
    }

    static EdgeName parse(const std::string& s) {
        if (s.empty()) throw InvalidParameterError("EdgeName: empty string");
        std::string digits = s;
        Marker m = Marker::plain;
        if (s.back() == '-') {
            m = Marker::minus;
            digits.pop_back();
        } else if (s.back() == '+') {
            m = Marker::plus;
            digits.pop_back();
        }
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw InvalidParameterError("EdgeName: bad string '" + s + "'");
        return {static_cast<std::size_t>(std::stoull(digits)), m};
    }
};

struct Edge {
    std::size_t id = 0;
    std::size_t tail = 0;
    std::size_t head = 0;
    int label = 0;  ///< framing label, 1 or 2
    std::optional<EdgeName> name;
};

enum class DagKind { path, cycle, general };

enum class InnerShape { path, cycle, other };

/// A leg: an inner route with constant framing label.
struct Leg {
    std::vector<std::size_t> vertices;  ///< in direction of the edges
    std::vector<std::size_t> edge_ids;
    int label = 0;
};

/// Which of two parallel source (or sink) edges gets label 2. The figures'
/// convention puts label 2 on the first-created (lower-id) edge.
enum class ParallelLabels { label2_first, label1_first };

class FramedDag {
public:
    /**
     * @brief Path(k): inner path on sum(k)+1 vertices split into legs of
     * lengths k, odd legs directed forward with label 2, even legs directed
     * backward with label 1, completed to a full DAG.
     */
    static FramedDag path(const std::vector<int>& k,
                          ParallelLabels choice = ParallelLabels::label2_first) {
        validate_k(k);
        FramedDag d;
        d.kind_ = DagKind::path;
        d.k_ = k;
        int s = 0;
        for (int v : k) s += v;
        d.n_inner_ = static_cast<std::size_t>(s) + 1;
        std::vector<std::size_t> b{1};
        for (int v : k) b.push_back(b.back() + static_cast<std::size_t>(v));
        for (std::size_t j = 0; j < k.size(); ++j) {
            Leg leg;
            leg.label = (j % 2 == 0) ? 2 : 1;
            if (j % 2 == 0)
                for (std::size_t v = b[j]; v < b[j + 1]; ++v)
                    d.add_leg_edge(leg, v, v + 1);
            else
                for (std::size_t v = b[j + 1]; v > b[j]; --v)
                    d.add_leg_edge(leg, v, v - 1);
            d.legs_.push_back(std::move(leg));
        }
        d.complete_and_finalize(choice);
        return d;
    }

    /**
     * @brief Cycle(k) for even-length k: inner cycle on sum(k) vertices; legs
     * as in the path case, the last leg wrapping through vertex 1.
     */
    static FramedDag cycle(const std::vector<int>& k,
                           ParallelLabels choice = ParallelLabels::label2_first) {
        validate_k(k);
        if (k.size() % 2 != 0)
            throw InvalidParameterError("cycle: leg count must be even");
        FramedDag d;
        d.kind_ = DagKind::cycle;
        d.k_ = k;
        std::size_t m = 0;
        for (int v : k) m += static_cast<std::size_t>(v);
        d.n_inner_ = m;
        std::vector<std::size_t> b{1};
        for (int v : k) b.push_back(b.back() + static_cast<std::size_t>(v));
        auto wrap = [m](std::size_t v) { return v > m ? v - m : v; };
        for (std::size_t j = 0; j < k.size(); ++j) {
            Leg leg;
            leg.label = (j % 2 == 0) ? 2 : 1;
            if (j % 2 == 0)
                for (std::size_t v = b[j]; v < b[j + 1]; ++v)
                    d.add_leg_edge(leg, wrap(v), wrap(v + 1));
            else
                for (std::size_t v = b[j + 1]; v > b[j]; --v)
                    d.add_leg_edge(leg, wrap(v), wrap(v - 1));
            d.legs_.push_back(std::move(leg));
        }
        d.complete_and_finalize(choice);
        return d;
    }

    /**
     * @brief Validated general full DAG: vertices 0 (source) .. n_inner+1
     * (sink), caller-supplied labeled edges. Edge names are derived; legs are
     * the maximal constant-label inner routes.
     */
    static FramedDag general(std::size_t n_inner, std::vector<Edge> edges) {
        FramedDag d;
        d.kind_ = DagKind::general;
        d.n_inner_ = n_inner;
        std::set<std::size_t> ids;
        for (auto& e : edges) {
            if (!ids.insert(e.id).second)
                throw InvalidParameterError("general: duplicate edge id");
            e.name.reset();
        }
        std::sort(edges.begin(), edges.end(),
                  [](const Edge& a, const Edge& b) { return a.id < b.id; });
        d.edges_ = std::move(edges);
        d.validate();
        d.compute_names();
        d.legs_ = d.maximal_constant_inner_routes();
        return d;
    }

    DagKind kind() const { return kind_; }
    const std::vector<int>& k() const { return k_; }
    std::size_t n_inner() const { return n_inner_; }
    std::size_t source() const { return 0; }
    std::size_t sink() const { return n_inner_ + 1; }
    const std::vector<Edge>& edges() const { return edges_; }

    const Edge& edge(std::size_t id) const {
        auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                                   [](const Edge& e, std::size_t v) { return e.id < v; });
        if (it == edges_.end() || it->id != id)
            throw InvalidParameterError("edge: unknown id");
        return *it;
    }

    bool is_inner(std::size_t v) const { return v >= 1 && v <= n_inner_; }
    bool is_inner_edge(const Edge& e) const { return is_inner(e.tail) && is_inner(e.head); }

    /// Edge ids leaving v, ascending by id.
    std::vector<std::size_t> out_edges(std::size_t v) const {
        std::vector<std::size_t> out;
        for (const auto& e : edges_)
            if (e.tail == v) out.push_back(e.id);
        return out;
    }

    /// Edge ids entering v, ascending by id.
    std::vector<std::size_t> in_edges(std::size_t v) const {
        std::vector<std::size_t> out;
        for (const auto& e : edges_)
            if (e.head == v) out.push_back(e.id);
        return out;
    }

    /// The unique out-edge of inner vertex v with the given label.
    std::size_t out_edge_with_label(std::size_t v, int label) const {
        for (const auto& e : edges_)
            if (e.tail == v && e.label == label) return e.id;
        throw ContractError("out_edge_with_label: missing");
    }

    std::size_t in_edge_with_label(std::size_t v, int label) const {
        for (const auto& e : edges_)
            if (e.head == v && e.label == label) return e.id;
        throw ContractError("in_edge_with_label: missing");
    }

    /// Legs: for built path/cycle DAGs these are the construction legs in
    /// 1-based order; in general, all maximal constant-label inner routes.
    const std::vector<Leg>& legs() const { return legs_; }

    /// Inner subgraph and the shape of its undirected form.
    struct InnerGraph {
        std::vector<std::size_t> edge_ids;
        InnerShape shape = InnerShape::other;
        std::size_t length = 0;  ///< edge count
    };

    InnerGraph inner_graph() const {
        InnerGraph g;
        std::map<std::size_t, std::size_t> degree;
        for (std::size_t v = 1; v <= n_inner_; ++v) degree[v] = 0;
        for (const auto& e : edges_)
            if (is_inner_edge(e)) {
                g.edge_ids.push_back(e.id);
                ++degree[e.tail];
                ++degree[e.head];
            }
        g.length = g.edge_ids.size();
        // connectivity of the undirected inner multigraph
        std::map<std::size_t, std::vector<std::size_t>> adj;
        for (std::size_t id : g.edge_ids) {
            const Edge& e = edge(id);
            adj[e.tail].push_back(e.head);
            adj[e.head].push_back(e.tail);
        }
        std::set<std::size_t> seen;
        if (n_inner_ > 0) {
            std::vector<std::size_t> stack{1};
            seen.insert(1);
            while (!stack.empty()) {
                std::size_t v = stack.back();
                stack.pop_back();
                for (std::size_t w : adj[v])
                    if (seen.insert(w).second) stack.push_back(w);
            }
        }
        bool connected = seen.size() == n_inner_;
        bool all_deg2 = true, path_like = true;
        std::size_t deg1 = 0;
        for (auto& [v, deg] : degree) {
            if (deg != 2) all_deg2 = false;
            if (deg > 2) path_like = false;
            if (deg == 1) ++deg1;
            if (deg == 0 && n_inner_ > 1) path_like = false;
        }
        if (connected && all_deg2 && g.length >= 2)
            g.shape = InnerShape::cycle;
        else if (connected && path_like && (deg1 == 2 || n_inner_ == 1))
            g.shape = InnerShape::path;
        else
            g.shape = InnerShape::other;
        return g;
    }

    /// True iff every maximal inner route has constant framing labels.
    bool is_lab_framing() const {
        for (const auto& r : maximal_inner_routes())
            if (!constant_label(r)) return false;
        return true;
    }

    /// All maximal inner routes (directed paths of the inner subgraph that
    /// cannot be extended), each as an edge-id sequence.
    std::vector<std::vector<std::size_t>> maximal_inner_routes() const {
        std::vector<std::vector<std::size_t>> out;
        std::vector<std::size_t> current;
        for (std::size_t v = 1; v <= n_inner_; ++v) {
            bool has_inner_in = false;
            for (const auto& e : edges_)
                if (e.head == v && is_inner_edge(e)) has_inner_in = true;
            if (has_inner_in) continue;
            extend_routes(v, current, out);
        }
        return out;
    }

    /// Maximal constant-label inner routes, as legs.
    std::vector<Leg> maximal_constant_inner_routes() const {
        std::vector<Leg> out;
        for (const auto& r : maximal_inner_routes()) {
            if (r.empty() || !constant_label(r)) continue;
            Leg leg;
            leg.label = edge(r[0]).label;
            leg.edge_ids = r;
            leg.vertices.push_back(edge(r[0]).tail);
            for (std::size_t id : r) leg.vertices.push_back(edge(id).head);
            out.push_back(std::move(leg));
        }
        return out;
    }

    /// 0-based indices into legs() of the legs visiting inner vertex v.
    std::vector<std::size_t> legs_through(std::size_t v) const {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < legs_.size(); ++j)
            if (std::find(legs_[j].vertices.begin(), legs_[j].vertices.end(), v) !=
                legs_[j].vertices.end())
                out.push_back(j);
        return out;
    }

    /**
     * @brief All ample relabelings of this DAG's shape: every {1,2} edge
     * labeling where each inner vertex's in-pair and out-pair get distinct
     * labels. Deterministic order.
     */
    std::vector<FramedDag> enumerate_ample_framings() const {
        std::vector<FramedDag> out;
        std::vector<Edge> work = edges_;
        enumerate_rec(work, 0, out);
        return out;
    }

private:
    DagKind kind_ = DagKind::general;
    std::vector<int> k_;
    std::size_t n_inner_ = 0;
    std::vector<Edge> edges_;
    std::vector<Leg> legs_;

    static void validate_k(const std::vector<int>& k) {
        if (k.empty()) throw InvalidParameterError("k must be nonempty");
        for (int v : k)
            if (v < 1) throw InvalidParameterError("k entries must be positive");
    }

    void add_leg_edge(Leg& leg, std::size_t tail, std::size_t head) {
        Edge e;
        e.id = edges_.size();
        e.tail = tail;
        e.head = head;
        e.label = leg.label;
        if (leg.vertices.empty()) leg.vertices.push_back(tail);
        leg.vertices.push_back(head);
        leg.edge_ids.push_back(e.id);
        edges_.push_back(e);
    }

    void complete_and_finalize(ParallelLabels choice) {
        // add source then sink edges to make every inner vertex full
        std::map<std::size_t, std::vector<int>> in_labels, out_labels;
        for (const auto& e : edges_) {
            in_labels[e.head].push_back(e.label);
            out_labels[e.tail].push_back(e.label);
        }
        const int first = choice == ParallelLabels::label2_first ? 2 : 1;
        for (std::size_t v = 1; v <= n_inner_; ++v) {
            const auto& in = in_labels[v];
            if (in.size() == 0) {
                push_edge(0, v, first);
                push_edge(0, v, 3 - first);
            } else if (in.size() == 1) {
                push_edge(0, v, 3 - in[0]);
            } else if (in.size() > 2) {
                throw ContractError("construction produced inner in-degree > 2");
            }
        }
        for (std::size_t v = 1; v <= n_inner_; ++v) {
            const auto& out = out_labels[v];
            if (out.size() == 0) {
                push_edge(v, sink(), first);
                push_edge(v, sink(), 3 - first);
            } else if (out.size() == 1) {
                push_edge(v, sink(), 3 - out[0]);
            } else if (out.size() > 2) {
                throw ContractError("construction produced inner out-degree > 2");
            }
        }
        validate();
        compute_names();
    }

    void push_edge(std::size_t tail, std::size_t head, int label) {
        Edge e;
        e.id = edges_.size();
        e.tail = tail;
        e.head = head;
        e.label = label;
        edges_.push_back(e);
    }

    void validate() const {
        for (const auto& e : edges_) {
            if (e.tail > sink() || e.head > sink())
                throw InvalidParameterError("validate: vertex out of range");
            if (e.label != 1 && e.label != 2)
                throw InvalidParameterError("validate: labels must be 1 or 2");
            if (e.tail == 0 && e.head == sink())
                throw InvalidParameterError("validate: idle edge (source to sink)");
            if (e.head == 0 || e.tail == sink())
                throw InvalidParameterError("validate: edge into source or out of sink");
        }
        // fullness and ample labels at every inner vertex
        for (std::size_t v = 1; v <= n_inner_; ++v) {
            std::vector<int> in, out;
            for (const auto& e : edges_) {
                if (e.head == v) in.push_back(e.label);
                if (e.tail == v) out.push_back(e.label);
            }
            if (in.size() != 2 || out.size() != 2)
                throw InvalidParameterError("validate: inner vertex not full");
            if (in[0] == in[1] || out[0] == out[1])
                throw InvalidParameterError("validate: framing not ample");
        }
        // acyclicity via Kahn's algorithm on the whole DAG
        std::map<std::size_t, std::size_t> indeg;
        for (std::size_t v = 0; v <= sink(); ++v) indeg[v] = 0;
        for (const auto& e : edges_) ++indeg[e.head];
        std::vector<std::size_t> queue;
        for (auto& [v, dg] : indeg)
            if (dg == 0) queue.push_back(v);
        if (queue.size() != 1 || queue[0] != 0)
            throw InvalidParameterError("validate: source must be the unique in-degree-0 vertex");
        std::size_t seen = 0;
        std::map<std::size_t, std::size_t> deg = indeg;
        while (!queue.empty()) {
            std::size_t v = queue.back();
            queue.pop_back();
            ++seen;
            for (const auto& e : edges_)
                if (e.tail == v && --deg[e.head] == 0) queue.push_back(e.head);
        }
        if (seen != sink() + 1) throw InvalidParameterError("validate: graph has a cycle");
        std::size_t outdeg0 = 0;
        for (std::size_t v = 0; v <= sink(); ++v) {
            bool any = false;
            for (const auto& e : edges_)
                if (e.tail == v) any = true;
            if (!any) ++outdeg0;
        }
        if (outdeg0 != 1)
            throw InvalidParameterError("validate: sink must be the unique out-degree-0 vertex");
    }

    void compute_names() {
        // follow the constant-label (exceptional) route through each source
        // edge; short routes get plain names on both ends, long routes get
        // marked names per the label convention
        for (auto& e : edges_) e.name.reset();
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            if (edges_[i].tail != 0) continue;
            const int label = edges_[i].label;
            const std::size_t enter = edges_[i].head;
            std::size_t v = enter;
            std::size_t hops = 0;
            std::size_t exit_edge = 0;
            while (true) {
                std::size_t next = out_edge_with_label(v, label);
                if (edge(next).head == sink()) {
                    exit_edge = next;
                    break;
                }
                v = edge(next).head;
                ++hops;
            }
            auto& src = edges_[i];
            auto& snk = mutable_edge(exit_edge);
            if (hops == 0) {
                src.name = EdgeName{enter, Marker::plain};
                snk.name = EdgeName{enter, Marker::plain};
            } else {
                src.name = EdgeName{enter, label == 2 ? Marker::minus : Marker::plus};
                snk.name = EdgeName{v, label == 2 ? Marker::plus : Marker::minus};
            }
        }
        for (const auto& e : edges_)
            if ((e.tail == 0 || e.head == sink()) && !e.name)
                throw ContractError("compute_names: unnamed boundary edge");
    }

    Edge& mutable_edge(std::size_t id) {
        for (auto& e : edges_)
            if (e.id == id) return e;
        throw ContractError("mutable_edge: unknown id");
    }

    bool constant_label(const std::vector<std::size_t>& route) const {
        for (std::size_t id : route)
            if (edge(id).label != edge(route[0]).label) return false;
        return true;
    }

    void extend_routes(std::size_t v, std::vector<std::size_t>& current,
                       std::vector<std::vector<std::size_t>>& out) const {
        bool extended = false;
        for (const auto& e : edges_)
            if (e.tail == v && is_inner_edge(e)) {
                extended = true;
                current.push_back(e.id);
                extend_routes(e.head, current, out);
                current.pop_back();
            }
        if (!extended && !current.empty()) out.push_back(current);
    }

    void enumerate_rec(std::vector<Edge>& work, std::size_t i,
                       std::vector<FramedDag>& out) const {
        if (i == work.size()) {
            out.push_back(general(n_inner_, work));
            return;
        }
        for (int label : {1, 2}) {
            work[i].label = label;
            bool ok = true;
            // check any pair constraint fully decided by edges 0..i
            for (std::size_t a = 0; a < i && ok; ++a) {
                if (work[a].head == work[i].head && work[a].label == label &&
                    work[a].head != sink())
                    ok = false;
                if (work[a].tail == work[i].tail && work[a].label == label &&
                    work[a].tail != 0)
                    ok = false;
            }
            if (ok) enumerate_rec(work, i + 1, out);
        }
    }
};

}  // namespace flowlattice
