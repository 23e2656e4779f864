#pragma once

#include <vector>

#include "wcg/graph.hpp"

namespace wcg {

// Orientation of a graph: every edge directed exactly once; out_edges(u)
// partition E(G).
struct Orientation {
    // forward[id] == true means edge id is directed edge(id).first -> .second
    std::vector<char> forward;
    std::vector<std::vector<int>> out_edges; // per-vertex out edge ids

    int out_degree(int u) const { return static_cast<int>(out_edges[u].size()); }
};

// Eulerian-style orientation guaranteeing out-degree >= floor(d(u)/2) for
// every vertex. Construction: add an auxiliary vertex joined to all
// odd-degree vertices, decompose into circuits (lowest edge id first),
// orient along traversal, then drop the auxiliary edges.
inline Orientation euler_orientation(const Graph& g) {
    const int n = g.n();
    const int m = g.m();
    std::vector<int> odd;
    for (int u = 0; u < n; ++u)
        if (g.degree(u) % 2 == 1) odd.push_back(u);

    // star graph edges: ends[2k], ends[2k+1] are the endpoints of edge k
    const int aux = n;
    const int total_vertices = odd.empty() ? n : n + 1;
    std::vector<int> eu, ev;
    eu.reserve(m + odd.size());
    ev.reserve(m + odd.size());
    for (auto& [u, v] : g.edges()) { eu.push_back(u); ev.push_back(v); }
    for (int u : odd) { eu.push_back(u); ev.push_back(aux); }
    const int total_edges = static_cast<int>(eu.size());

    std::vector<std::vector<int>> inc(total_vertices); // edge ids, ascending
    for (int id = 0; id < total_edges; ++id) {
        inc[eu[id]].push_back(id);
        inc[ev[id]].push_back(id);
    }

    Orientation ori;
    ori.forward.assign(m, 0);
    ori.out_edges.assign(n, {});
    std::vector<char> used(total_edges, 0);
    std::vector<size_t> ptr(total_vertices, 0);

    // Hierholzer over every component; all degrees are even by construction.
    for (int start = 0; start < total_vertices; ++start) {
        if (ptr[start] >= inc[start].size()) continue;
        std::vector<int> stack{start};
        while (!stack.empty()) {
            int u = stack.back();
            while (ptr[u] < inc[u].size() && used[inc[u][ptr[u]]]) ++ptr[u];
            if (ptr[u] == inc[u].size()) {
                stack.pop_back();
                continue;
            }
            int id = inc[u][ptr[u]];
            used[id] = 1;
            int w = (eu[id] == u) ? ev[id] : eu[id];
            if (id < m) { // real edge, orient u -> w
                ori.forward[id] = (eu[id] == u);
                ori.out_edges[u].push_back(id);
            }
            stack.push_back(w);
        }
    }
    return ori;
}

} // namespace wcg
