#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wcg/rng.hpp"

namespace wcg {

using VertexSet = std::vector<int>; // sorted, unique

// Undirected simple graph with dense edge ids fixed at construction.
// Vertices are 0-indexed; edges are stored with u < v.
class Graph {
public:
    Graph() : n_(0) {}
    explicit Graph(int n) : n_(n), adj_(n) {
        if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
    }

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }

    // Returns the id of the new edge.
    int add_edge(int u, int v) {
        check_vertex(u);
        check_vertex(v);
        if (u == v) throw std::invalid_argument("Graph: self-loop");
        if (u > v) std::swap(u, v);
        auto key = pack(u, v);
        if (edge_index_.count(key)) throw std::invalid_argument("Graph: duplicate edge");
        int id = m();
        edges_.emplace_back(u, v);
        edge_index_.emplace(key, id);
        adj_[u].push_back(v);
        adj_[v].push_back(u);
        return id;
    }

    bool has_edge(int u, int v) const {
        if (u == v) return false;
        if (u > v) std::swap(u, v);
        return edge_index_.count(pack(u, v)) > 0;
    }

    // -1 if absent
    int edge_id(int u, int v) const {
        if (u > v) std::swap(u, v);
        auto it = edge_index_.find(pack(u, v));
        return it == edge_index_.end() ? -1 : it->second;
    }

    const std::pair<int, int>& edge(int id) const { return edges_.at(id); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int u) const { check_vertex(u); return adj_[u]; }

    int degree(int u) const { check_vertex(u); return static_cast<int>(adj_[u].size()); }

    int min_degree() const {
        int d = n_ == 0 ? 0 : degree(0);
        for (int u = 1; u < n_; ++u) d = std::min(d, degree(u));
        return d;
    }

    int max_degree() const {
        int d = 0;
        for (int u = 0; u < n_; ++u) d = std::max(d, degree(u));
        return d;
    }

    // Outer neighbourhood: vertices outside S adjacent to some vertex of S.
    VertexSet neighborhood(const VertexSet& s) const {
        std::vector<char> in_s(n_, 0), seen(n_, 0);
        for (int v : s) { check_vertex(v); in_s[v] = 1; }
        VertexSet out;
        for (int v : s)
            for (int w : adj_[v])
                if (!in_s[w] && !seen[w]) { seen[w] = 1; out.push_back(w); }
        std::sort(out.begin(), out.end());
        return out;
    }

    // Edge ids with one endpoint in X and one in Y; X and Y must be disjoint.
    std::vector<int> edges_between(const VertexSet& x, const VertexSet& y) const {
        std::vector<char> in_x(n_, 0), in_y(n_, 0);
        for (int v : x) { check_vertex(v); in_x[v] = 1; }
        for (int v : y) {
            check_vertex(v);
            if (in_x[v]) throw std::invalid_argument("edges_between: sets overlap");
            in_y[v] = 1;
        }
        std::vector<int> out;
        for (int id = 0; id < m(); ++id) {
            auto [u, v] = edges_[id];
            if ((in_x[u] && in_y[v]) || (in_x[v] && in_y[u])) out.push_back(id);
        }
        return out;
    }

    // Edge ids with both endpoints in A.
    std::vector<int> edges_within(const VertexSet& a) const {
        std::vector<char> in_a(n_, 0);
        for (int v : a) { check_vertex(v); in_a[v] = 1; }
        std::vector<int> out;
        for (int id = 0; id < m(); ++id) {
            auto [u, v] = edges_[id];
            if (in_a[u] && in_a[v]) out.push_back(id);
        }
        return out;
    }

    std::vector<VertexSet> connected_components() const {
        std::vector<int> comp(n_, -1);
        std::vector<VertexSet> out;
        std::vector<int> stack;
        for (int s = 0; s < n_; ++s) {
            if (comp[s] != -1) continue;
            int c = static_cast<int>(out.size());
            out.emplace_back();
            stack.push_back(s);
            comp[s] = c;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                out[c].push_back(u);
                for (int v : adj_[u])
                    if (comp[v] == -1) { comp[v] = c; stack.push_back(v); }
            }
            std::sort(out[c].begin(), out[c].end());
        }
        return out;
    }

    bool connected() const {
        return n_ <= 1 || connected_components().size() == 1;
    }

    // Edge-list text format: header "n m", then one "u v" line per edge in id order.
    void save(std::ostream& os) const {
        os << n_ << ' ' << m() << '\n';
        for (auto& [u, v] : edges_) os << u << ' ' << v << '\n';
    }

    static Graph load(std::istream& is) {
        int n, m;
        if (!(is >> n >> m)) throw std::runtime_error("Graph::load: bad header");
        Graph g(n);
        for (int i = 0; i < m; ++i) {
            int u, v;
            if (!(is >> u >> v)) throw std::runtime_error("Graph::load: truncated edge list");
            g.add_edge(u, v);
        }
        return g;
    }

    std::string to_string() const {
        std::ostringstream ss;
        save(ss);
        return ss.str();
    }

private:
    void check_vertex(int u) const {
        if (u < 0 || u >= n_) throw std::out_of_range("Graph: vertex id out of range");
    }

    static std::uint64_t pack(int u, int v) {
        return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
    }

    int n_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
    std::unordered_map<std::uint64_t, int> edge_index_;
};

struct RandomGraphSpec {
    int n = 1;
    double p = 0.0;
    std::uint64_t seed = 0;
};

// G(n,p): every pair included independently with probability p.
// Sparse case uses geometric skipping over the linearised pair order
// (0,1),(0,2),...,(0,n-1),(1,2),... so output is deterministic per seed.
inline Graph sample_gnp(const RandomGraphSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("sample_gnp: n >= 1 required");
    if (spec.p < 0.0 || spec.p > 1.0) throw std::invalid_argument("sample_gnp: p out of [0,1]");
    Graph g(spec.n);
    if (spec.p == 0.0 || spec.n < 2) return g;
    if (spec.p == 1.0) {
        for (int u = 0; u < spec.n; ++u)
            for (int v = u + 1; v < spec.n; ++v) g.add_edge(u, v);
        return g;
    }
    Rng rng(spec.seed);
    const double log1mp = std::log1p(-spec.p);
    const std::uint64_t n = static_cast<std::uint64_t>(spec.n);
    const std::uint64_t total = n * (n - 1) / 2;
    std::uint64_t pos = 0;       // linear index of the next candidate pair
    std::uint64_t row = 0;       // row u of pair order (0,1)..(0,n-1),(1,2)..
    std::uint64_t row_start = 0; // linear index of (row, row+1)
    while (true) {
        double r = rng.next_double();
        if (r >= 1.0) r = std::nextafter(1.0, 0.0);
        pos += static_cast<std::uint64_t>(std::floor(std::log1p(-r) / log1mp));
        if (pos >= total) break;
        while (pos >= row_start + (n - 1 - row)) {
            row_start += n - 1 - row;
            ++row;
        }
        g.add_edge(static_cast<int>(row), static_cast<int>(row + 1 + (pos - row_start)));
        ++pos;
    }
    return g;
}

// Partition E(G) into (main, reservoir); each edge lands in the reservoir
// independently with probability p_bar. Vertex sets are preserved.
inline std::pair<Graph, Graph> split_reservoir(const Graph& g, double p_bar,
                                               std::uint64_t seed) {
    if (p_bar < 0.0 || p_bar > 1.0)
        throw std::invalid_argument("split_reservoir: p out of [0,1]");
    Rng rng(seed);
    Graph main(g.n()), res(g.n());
    for (auto& [u, v] : g.edges()) {
        if (rng.bernoulli(p_bar))
            res.add_edge(u, v);
        else
            main.add_edge(u, v);
    }
    return {std::move(main), std::move(res)};
}

} // namespace wcg
