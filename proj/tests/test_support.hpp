#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <flowlattice/dag.hpp>

#include <cstddef>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fixtures {

using flowlattice::Edge;
using flowlattice::FramedDag;

/// Scoped environment-variable override (used for FLOWLATTICE_DIM_CAP).
struct EnvGuard {
    std::string name;
    std::string old;
    bool had = false;
    EnvGuard(const std::string& n, const std::string& value) : name(n) {
        if (const char* v = std::getenv(n.c_str())) {
            had = true;
            old = v;
        }
        setenv(n.c_str(), value.c_str(), 1);
    }
    ~EnvGuard() {
        if (had)
            setenv(name.c_str(), old.c_str(), 1);
        else
            unsetenv(name.c_str());
    }
};

/// Inner star: leaves 1,2 feed center 3, center feeds leaf 4; completed to a
/// full ample DAG (13 edges). Its inner graph is neither a path nor a cycle.
inline std::vector<Edge> claw_edges() {
    std::vector<Edge> es;
    auto add = [&](std::size_t t, std::size_t h, int l) {
        es.push_back(Edge{es.size(), t, h, l, std::nullopt});
    };
    add(1, 3, 2);
    add(2, 3, 1);
    add(3, 4, 2);
    add(0, 1, 2);
    add(0, 1, 1);
    add(0, 2, 2);
    add(0, 2, 1);
    add(0, 4, 1);
    add(1, 5, 1);
    add(2, 5, 2);
    add(3, 5, 1);
    add(4, 5, 2);
    add(4, 5, 1);
    return es;
}

inline FramedDag claw() { return FramedDag::general(4, claw_edges()); }

/// Two disjoint one-edge inner components, each completed like the 1-leg path.
inline std::vector<Edge> disconnected_edges() {
    std::vector<Edge> es;
    auto add = [&](std::size_t t, std::size_t h, int l) {
        es.push_back(Edge{es.size(), t, h, l, std::nullopt});
    };
    add(1, 2, 2);
    add(3, 4, 2);
    add(0, 1, 2);
    add(0, 1, 1);
    add(0, 2, 1);
    add(0, 3, 2);
    add(0, 3, 1);
    add(0, 4, 1);
    add(1, 5, 1);
    add(2, 5, 2);
    add(2, 5, 1);
    add(3, 5, 1);
    add(4, 5, 2);
    add(4, 5, 1);
    return es;
}

inline FramedDag disconnected_pair() { return FramedDag::general(4, disconnected_edges()); }

/// The 2-leg path on legs (2,2) with the labels inside the first leg switched
/// (plus the forced relabelings that keep the framing ample): not lab.
inline FramedDag switched_path22() {
    FramedDag base = FramedDag::path({2, 2});
    std::vector<Edge> es = base.edges();
    auto flip = [&](std::size_t tail, std::size_t head, int from) {
        for (auto& e : es)
            if (e.tail == tail && e.head == head && e.label == from) {
                e.label = 3 - from;
                return;
            }
        throw std::logic_error("edge to flip not found");
    };
    flip(2, 3, 2);
    flip(2, 6, 1);
    flip(4, 3, 1);
    flip(4, 6, 2);
    return FramedDag::general(base.n_inner(), es);
}

/// Memoized source-to-sink path count; independent of route enumeration.
inline std::size_t count_paths(const FramedDag& d) {
    std::map<std::size_t, std::size_t> memo;
    auto rec = [&](auto&& self, std::size_t v) -> std::size_t {
        if (v == d.sink()) return 1;
        auto it = memo.find(v);
        if (it != memo.end()) return it->second;
        std::size_t total = 0;
        for (std::size_t id : d.out_edges(v)) total += self(self, d.edge(id).head);
        memo[v] = total;
        return total;
    };
    return rec(rec, d.source());
}

}  // namespace fixtures
