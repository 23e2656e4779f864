#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "wcg/box_game.hpp"
#include "wcg/game.hpp"
#include "wcg/graph.hpp"
#include "wcg/hamilton.hpp"
#include "wcg/orientation.hpp"
#include "wcg/rng.hpp"

namespace wcg {

// ---------------------------------------------------------------------------
// Baselines
// ---------------------------------------------------------------------------

// Offers the q+1 lowest-id free edges (or min(q+1, free) in Client-Waiter).
class LowestIdWaiter : public WaiterStrategy {
public:
    Offer offer(const GameState& state) override {
        Offer o;
        const int want = state.q() + 1;
        for (int id = 0; id < state.board().m() && static_cast<int>(o.size()) < want; ++id)
            if (state.owner(id) == Owner::Free) o.push_back(id);
        return o;
    }
};

class UniformRandomClient : public ClientStrategy {
public:
    explicit UniformRandomClient(std::uint64_t seed) : rng_(seed) {}
    int choose(const GameState&, const Offer& offer) override {
        return offer[rng_.next_below(offer.size())];
    }

private:
    Rng rng_;
};

class LowestIdClient : public ClientStrategy {
public:
    int choose(const GameState&, const Offer& offer) override {
        return *std::min_element(offer.begin(), offer.end());
    }
};

// Picks the offered edge maximizing the smaller current Client-degree of its
// endpoints, starving low-degree vertices.
class MinDegreeAvoiderClient : public ClientStrategy {
public:
    int choose(const GameState& state, const Offer& offer) override {
        std::vector<int> cdeg(state.board().n(), 0);
        for (int id = 0; id < state.board().m(); ++id)
            if (state.owner(id) == Owner::Client) {
                auto& [u, v] = state.board().edge(id);
                ++cdeg[u];
                ++cdeg[v];
            }
        int best = offer.front(), best_score = -1;
        for (int id : offer) {
            auto& [u, v] = state.board().edge(id);
            int score = std::min(cdeg[u], cdeg[v]);
            if (score > best_score || (score == best_score && id < best)) {
                best_score = score;
                best = id;
            }
        }
        return best;
    }
};

// Picks the offered edge whose addition least increases a cheap longest-path
// estimate of Client's graph.
class BoosterDodgerClient : public ClientStrategy {
public:
    explicit BoosterDodgerClient(std::uint64_t seed) : seed_(seed) {}

    int choose(const GameState& state, const Offer& offer) override {
        Graph gc = state.client_graph();
        int best = offer.front(), best_len = std::numeric_limits<int>::max();
        for (int id : offer) {
            auto& [u, v] = state.board().edge(id);
            Graph h = gc;
            h.add_edge(u, v);
            int len = estimate_longest(h);
            if (len < best_len || (len == best_len && id < best)) {
                best_len = len;
                best = id;
            }
        }
        ++round_;
        return best;
    }

private:
    int estimate_longest(const Graph& g) {
        if (g.n() <= kLongestPathCap && g.n() <= 14) return longest_path_vertices(g);
        PosaResult pr = posa_extend(g, derive_seed(seed_, round_), /*restarts=*/1,
                                    /*iter_factor=*/10);
        if (pr.cycle) return g.n() + 1;
        return static_cast<int>(pr.state.path.size());
    }

    std::uint64_t seed_;
    std::uint64_t round_ = 0;
};

// ---------------------------------------------------------------------------
// Min-degree forcer (Eulerian out-set schedule)
// ---------------------------------------------------------------------------

// Forces Client's graph to minimum degree gamma within (q+1) gamma n offered
// edges, against any Client: for each vertex in turn, gamma rounds of q+1
// free edges from its Eulerian out-set.
class MinDegreeForcer : public WaiterStrategy {
public:
    MinDegreeForcer(const Graph& g, int q, int gamma) : gamma_(gamma) {
        if (gamma < 0) throw std::invalid_argument("MinDegreeForcer: gamma >= 0");
        if (gamma > g.min_degree() / (2 * (q + 1)))
            throw std::invalid_argument(
                "MinDegreeForcer: gamma exceeds floor(delta/(2(q+1)))");
        Orientation ori = euler_orientation(g);
        out_sets_ = std::move(ori.out_edges);
        for (auto& s : out_sets_) std::sort(s.begin(), s.end());
    }

    // Out-sets carry ids of the graph the forcer was built on. When the
    // schedule is exhausted (or empty), falls through to lowest-id offers.
    Offer offer(const GameState& state) override {
        const int q1 = state.q() + 1;
        while (vertex_ < static_cast<int>(out_sets_.size())) {
            if (rounds_done_ >= gamma_) {
                ++vertex_;
                rounds_done_ = 0;
                continue;
            }
            Offer o;
            for (int id : out_sets_[vertex_]) {
                if (static_cast<int>(o.size()) == q1) break;
                if (state.owner(id) == Owner::Free) o.push_back(id);
            }
            if (static_cast<int>(o.size()) < q1) {
                // out-set exhausted early; move on rather than stall
                ++vertex_;
                rounds_done_ = 0;
                continue;
            }
            ++rounds_done_;
            forced_edges_ += q1;
            return o;
        }
        return fallback_.offer(state);
    }

    bool schedule_done() const { return vertex_ >= static_cast<int>(out_sets_.size()); }
    long long forced_edges_offered() const { return forced_edges_; }

private:
    int gamma_;
    std::vector<std::vector<int>> out_sets_;
    int vertex_ = 0;
    int rounds_done_ = 0;
    long long forced_edges_ = 0;
    LowestIdWaiter fallback_;
};

// ---------------------------------------------------------------------------
// Potential-based transversal Waiter (greedy realization of the
// sum-criterion; guaranteed-win not claimed, validated against minimax)
// ---------------------------------------------------------------------------

using EdgeFamily = std::vector<std::vector<int>>; // sets of board edge ids

class PotentialWaiter : public WaiterStrategy {
public:
    // family: sets of board edge ids Client must be forced to hit
    PotentialWaiter(EdgeFamily family, int q) : family_(std::move(family)), q_(q) {}

    Offer offer(const GameState& state) override {
        std::vector<int> free = state.free_edges();
        const int sz = std::min<int>(q_ + 1, static_cast<int>(free.size()));
        if (free.size() > 24)
            throw std::invalid_argument("PotentialWaiter: board too large for enumeration");
        std::vector<int> idx(sz);
        Offer best;
        double best_phi = std::numeric_limits<double>::infinity();
        std::function<void(int, int)> rec = [&](int start, int depth) {
            if (depth == sz) {
                Offer o;
                for (int i : idx) o.push_back(free[i]);
                double phi = worst_case_phi(state, o);
                if (phi < best_phi) { best_phi = phi; best = o; }
                return;
            }
            for (int i = start; i < static_cast<int>(free.size()); ++i) {
                idx[depth] = i;
                rec(i + 1, depth + 1);
            }
        };
        rec(0, 0);
        return best;
    }

private:
    // Phi = sum over unhit sets of 2^{-|A ∩ Free|/(2q-1)} after the round
    double worst_case_phi(const GameState& state, const Offer& o) const {
        double worst = -std::numeric_limits<double>::infinity();
        for (int pick : o) {
            double phi = 0;
            for (auto& a : family_) {
                bool hit = false;
                int free_left = 0;
                for (int id : a) {
                    Owner w = state.owner(id);
                    bool offered = std::find(o.begin(), o.end(), id) != o.end();
                    if (w == Owner::Client || id == pick) hit = true;
                    if (w == Owner::Free && !offered) ++free_left;
                }
                if (!hit) phi += std::pow(2.0, -static_cast<double>(free_left) / (2.0 * q_ - 1.0));
            }
            worst = std::max(worst, phi);
        }
        return worst;
    }

    EdgeFamily family_;
    int q_;
};

// ---------------------------------------------------------------------------
// Staged Waiter-Client Hamiltonicity strategy (Stages 0-3)
// ---------------------------------------------------------------------------

struct StageConfig {
    double c_bar = 1.0;      // reservoir constant; p_bar = c_bar / log n
    double c1 = 0.01;        // first-stage expander scale (informational)
    int gamma_cap = 2;       // cap on the forced minimum degree
    int expander_k = 2;      // expansion factor target
    double expander_t_frac = 0.2; // t = frac * n (n/5 by default)
    int cert_trials = 300;   // sampled certification budget
    double exact_budget = 2e5;

    nlohmann::json to_json() const {
        return {{"c_bar", c_bar},        {"c1", c1},
                {"gamma_cap", gamma_cap}, {"expander_k", expander_k},
                {"expander_t_frac", expander_t_frac},
                {"cert_trials", cert_trials}};
    }
};

struct StageTrace {
    int stage = 0;
    int gamma = 0;
    bool stalled = false;
    bool dilution = false;
    bool expander_certified = false;
    bool hamiltonian_reached = false;

    nlohmann::json to_json() const {
        return {{"stage", stage},
                {"gamma", gamma},
                {"stalled", stalled},
                {"dilution", dilution},
                {"expander_certified", expander_certified},
                {"hamiltonian_reached", hamiltonian_reached}};
    }
};

// Finds a set violating (t,k)-expansion in g, exactly for small graphs and
// by a components-first greedy heuristic otherwise.
inline std::optional<VertexSet> find_expander_violation(const Graph& g, int t, int k,
                                                        double exact_budget = 2e5) {
    if (g.n() == 0 || t <= 0) return std::nullopt;
    if (subset_enumeration_cost(g.n(), t) <= exact_budget) {
        ExpanderReport rep = is_expander_exact(g, t, k, exact_budget);
        if (!rep.verdict) return rep.witness;
        return std::nullopt;
    }
    // smallest components first
    auto comps = g.connected_components();
    if (comps.size() > 1) {
        auto smallest = *std::min_element(
            comps.begin(), comps.end(),
            [](const VertexSet& a, const VertexSet& b) { return a.size() < b.size(); });
        if (static_cast<int>(smallest.size()) <= t) return smallest;
        smallest.resize(t); // a t-subset of an oversized component still has
                            // neighbourhood inside the component
    }
    // low-|N(A)| seeds grown greedily
    std::vector<int> order(g.n());
    for (int i = 0; i < g.n(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return g.degree(a) < g.degree(b); });
    const int seeds = std::min(g.n(), 12);
    for (int s = 0; s < seeds; ++s) {
        VertexSet a{order[s]};
        std::vector<char> in(g.n(), 0);
        in[order[s]] = 1;
        while (static_cast<int>(a.size()) <= t) {
            VertexSet nb = g.neighborhood(a);
            if (static_cast<long long>(nb.size()) <
                static_cast<long long>(k) * static_cast<long long>(a.size()))
                return a;
            if (nb.empty() || static_cast<int>(a.size()) == t) break;
            // absorb the neighbour with fewest outside connections
            int pick = nb.front(), best_out = std::numeric_limits<int>::max();
            for (int w : nb) {
                int outside = 0;
                for (int x : g.neighbors(w)) outside += !in[x];
                if (outside < best_out) { best_out = outside; pick = w; }
            }
            in[pick] = 1;
            a.insert(std::lower_bound(a.begin(), a.end(), pick), pick);
        }
    }
    return std::nullopt;
}

class StagedWcWaiter : public WaiterStrategy {
public:
    StagedWcWaiter(const Graph& board, int q, StageConfig cfg, std::uint64_t seed)
        : board_(board), q_(q), cfg_(cfg), seed_(seed) {
        const int n = board.n();
        const double logn = std::log(std::max(3, n));
        // Stage 0: reservoir split by board edge id
        const double p_bar = std::min(1.0, cfg_.c_bar / logn);
        Rng rng(derive_seed(seed, 0));
        in_reservoir_.assign(board.m(), 0);
        Graph main(n);
        std::vector<int> main_to_board;
        for (int id = 0; id < board.m(); ++id) {
            if (rng.bernoulli(p_bar)) {
                in_reservoir_[id] = 1;
            } else {
                auto& [u, v] = board.edge(id);
                main.add_edge(u, v);
                main_to_board.push_back(id);
            }
        }
        // Stage 1 schedule from the Eulerian orientation of the main graph
        const int delta_m = main.min_degree();
        trace_.gamma = std::min(cfg_.gamma_cap, delta_m / (2 * (q + 1)));
        if (trace_.gamma > 0) {
            Orientation ori = euler_orientation(main);
            for (auto& s : ori.out_edges) {
                std::vector<int> ids;
                for (int e : s) ids.push_back(main_to_board[e]);
                std::sort(ids.begin(), ids.end());
                out_sets_.push_back(std::move(ids));
            }
        }
        expander_t_ = std::max(1, static_cast<int>(cfg_.expander_t_frac * n));
    }

    Offer offer(const GameState& state) override {
        switch (trace_.stage) {
            case 1: {
                Offer o = stage1_offer(state);
                if (!o.empty()) return o;
                trace_.stage = 2;
                [[fallthrough]];
            }
            case 2: {
                Offer o = stage2_offer(state);
                if (!o.empty()) return o;
                trace_.stage = 3;
                [[fallthrough]];
            }
            case 3: {
                Offer o = stage3_offer(state);
                if (!o.empty()) return o;
                trace_.stage = 4;
                [[fallthrough]];
            }
            default:
                return fallback_.offer(state);
        }
    }

    const StageTrace& trace() const { return trace_; }
    const StageConfig& config() const { return cfg_; }

private:
    Offer stage1_offer(const GameState& state) {
        const int q1 = q_ + 1;
        while (s1_vertex_ < static_cast<int>(out_sets_.size())) {
            if (s1_rounds_ >= trace_.gamma) {
                ++s1_vertex_;
                s1_rounds_ = 0;
                continue;
            }
            Offer o;
            for (int id : out_sets_[s1_vertex_]) {
                if (static_cast<int>(o.size()) == q1) break;
                if (state.owner(id) == Owner::Free) o.push_back(id);
            }
            if (static_cast<int>(o.size()) < q1) {
                ++s1_vertex_;
                s1_rounds_ = 0;
                continue;
            }
            ++s1_rounds_;
            return o;
        }
        return {};
    }

    Offer stage2_offer(const GameState& state) {
        Graph gc = state.client_graph();
        auto violation =
            find_expander_violation(gc, expander_t_, cfg_.expander_k, cfg_.exact_budget);
        if (!violation) {
            // certify before exiting the stage
            if (subset_enumeration_cost(gc.n(), expander_t_) <= cfg_.exact_budget) {
                trace_.expander_certified =
                    is_expander_exact(gc, expander_t_, cfg_.expander_k, cfg_.exact_budget)
                        .verdict;
            } else {
                trace_.expander_certified =
                    is_expander_sampled(gc, expander_t_, cfg_.expander_k,
                                        cfg_.cert_trials, derive_seed(seed_, 2))
                        .verdict;
            }
            return {};
        }
        // offer q+1 free reservoir edges leaving the violating set
        const VertexSet& a = *violation;
        VertexSet closed = a;
        for (int v : gc.neighborhood(a))
            closed.insert(std::lower_bound(closed.begin(), closed.end(), v), v);
        std::vector<char> in_a(board_.n(), 0), in_closed(board_.n(), 0);
        for (int v : a) in_a[v] = 1;
        for (int v : closed) in_closed[v] = 1;

        Offer o;
        auto scan = [&](bool reservoir_only) {
            for (int id = 0; id < board_.m() && static_cast<int>(o.size()) < q_ + 1; ++id) {
                if (state.owner(id) != Owner::Free) continue;
                if (reservoir_only && !in_reservoir_[id]) continue;
                auto& [u, v] = board_.edge(id);
                bool cross = (in_a[u] && !in_closed[v]) || (in_a[v] && !in_closed[u]);
                if (cross && std::find(o.begin(), o.end(), id) == o.end()) o.push_back(id);
            }
        };
        scan(true);
        if (static_cast<int>(o.size()) < q_ + 1) {
            trace_.stalled = true; // reservoir exhausted for this set
            scan(false);
        }
        if (o.empty()) {
            // nothing usable crosses out of A; repair cannot proceed
            if (++s2_dead_rounds_ > 2) return {};
            o = fallback_.offer(state);
            return o;
        }
        pad_offer(state, o);
        return o;
    }

    Offer stage3_offer(const GameState& state) {
        if (trace_.hamiltonian_reached) return {};
        Graph gc = state.client_graph();
        if (!gc.connected()) return {}; // expander exit failed; give up the stage
        PosaResult pr = posa_extend(gc, derive_seed(seed_, 3, s3_round_));
        ++s3_round_;
        if (pr.cycle) {
            trace_.hamiltonian_reached = true;
            return {};
        }
        BoosterSet bs = boosters_posa_from_path(gc, pr.state.path);
        Offer o;
        for (auto& [u, v] : bs.pairs) {
            if (static_cast<int>(o.size()) == q_ + 1) break;
            int id = board_.edge_id(u, v);
            if (id >= 0 && state.owner(id) == Owner::Free) o.push_back(id);
        }
        std::sort(o.begin(), o.end());
        if (static_cast<int>(o.size()) < q_ + 1) {
            trace_.dilution = true;
            pad_offer(state, o);
        }
        if (o.empty()) return {};
        return o;
    }

    void pad_offer(const GameState& state, Offer& o) const {
        for (int id = 0; id < board_.m() && static_cast<int>(o.size()) < q_ + 1; ++id)
            if (state.owner(id) == Owner::Free &&
                std::find(o.begin(), o.end(), id) == o.end())
                o.push_back(id);
    }

    Graph board_;
    int q_;
    StageConfig cfg_;
    std::uint64_t seed_;
    std::vector<char> in_reservoir_;
    std::vector<std::vector<int>> out_sets_;
    int expander_t_ = 1;
    int s1_vertex_ = 0, s1_rounds_ = 0;
    int s2_dead_rounds_ = 0;
    std::uint64_t s3_round_ = 0;
    LowestIdWaiter fallback_;
    StageTrace trace_{.stage = 1};
};

// ---------------------------------------------------------------------------
// Client-Waiter box-game vertex isolator
// ---------------------------------------------------------------------------

struct IsolatorPlan {
    int k = 0;
    VertexSet independent_set;
    std::vector<std::vector<int>> edge_boxes; // E(u) as board edge ids
};

// Greedy independent subset of the degree-k vertices; guarantees
// |I_k| >= |S_k|/(k+1) because each chosen vertex excludes at most k others.
inline VertexSet greedy_independent_degree_k(const Graph& g, int k) {
    VertexSet chosen;
    std::vector<char> blocked(g.n(), 0);
    for (int v = 0; v < g.n(); ++v) {
        if (g.degree(v) != k || blocked[v]) continue;
        chosen.push_back(v);
        for (int w : g.neighbors(v)) blocked[w] = 1;
    }
    return chosen;
}

// Scans k ascending for an applicable isolator plan: an independent set of
// degree-k vertices of size >= 2 (q+1)^{k+1} / q^k (exact arithmetic).
inline std::optional<IsolatorPlan> find_isolator_plan(const Graph& g, int q,
                                                      int max_k = 30) {
    for (int k = 1; k <= std::min(max_k, g.max_degree()); ++k) {
        VertexSet ik = greedy_independent_degree_k(g, k);
        if (ik.empty()) continue;
        Rational threshold = box_game_threshold(q, k);
        if (threshold <= Rational(static_cast<long long>(ik.size()))) {
            IsolatorPlan plan;
            plan.k = k;
            plan.independent_set = ik;
            for (int u : ik) {
                std::vector<int> box;
                for (int w : g.neighbors(u)) box.push_back(g.edge_id(u, w));
                std::sort(box.begin(), box.end());
                plan.edge_boxes.push_back(std::move(box));
            }
            return plan;
        }
    }
    return std::nullopt;
}

// Greedy starving fallback for Client-Waiter play: full-size offers at the
// vertex Client has fewest edges on.
class GreedyStarveWaiter : public WaiterStrategy {
public:
    Offer offer(const GameState& state) override {
        const Graph& b = state.board();
        std::vector<int> cdeg(b.n(), 0), fdeg(b.n(), 0);
        for (int id = 0; id < b.m(); ++id) {
            auto& [u, v] = b.edge(id);
            if (state.owner(id) == Owner::Client) { ++cdeg[u]; ++cdeg[v]; }
            if (state.owner(id) == Owner::Free) { ++fdeg[u]; ++fdeg[v]; }
        }
        int target = -1;
        for (int v = 0; v < b.n(); ++v) {
            if (fdeg[v] == 0) continue;
            if (target == -1 || cdeg[v] < cdeg[target] ||
                (cdeg[v] == cdeg[target] && fdeg[v] < fdeg[target]))
                target = v;
        }
        Offer o;
        if (target >= 0) {
            for (int w : b.neighbors(target)) {
                if (static_cast<int>(o.size()) == state.q() + 1) break;
                int id = b.edge_id(target, w);
                if (state.owner(id) == Owner::Free) o.push_back(id);
            }
            std::sort(o.begin(), o.end());
        }
        for (int id = 0; id < b.m() && static_cast<int>(o.size()) < state.q() + 1; ++id)
            if (state.owner(id) == Owner::Free &&
                std::find(o.begin(), o.end(), id) == o.end())
                o.push_back(id);
        return o;
    }
};

// Plays the canonical box-game strategy on {E(u) : u in I_k}; the family is
// reconstructed from edge ownership every round, which reproduces the
// family-update semantics exactly.
class BoxIsolatorWaiter : public WaiterStrategy {
public:
    BoxIsolatorWaiter(const Graph& board, int q, IsolatorPlan plan)
        : q_(q), plan_(std::move(plan)) { (void)board; }

    Offer offer(const GameState& state) override {
        Family family;
        for (auto& box : plan_.edge_boxes) {
            bool dead = false;
            std::vector<int> remaining;
            for (int id : box) {
                Owner o = state.owner(id);
                if (o == Owner::Client) { dead = true; break; }
                if (o == Owner::Free) remaining.push_back(id);
            }
            if (dead) continue;
            if (remaining.empty()) { isolated_ = true; continue; }
            family.push_back(std::move(remaining));
        }
        if (isolated_ || family.empty()) {
            // box game decided; play out the rest
            return isolated_ ? singleton_offer(state) : fallback_.offer(state);
        }
        BoxGameState bgs{std::move(family), q_, 0};
        return waiter_box_offer(bgs);
    }

    bool vertex_isolated() const { return isolated_; }

private:
    Offer singleton_offer(const GameState& state) {
        for (int id = 0; id < state.board().m(); ++id)
            if (state.owner(id) == Owner::Free) return {id};
        return {};
    }

    int q_;
    IsolatorPlan plan_;
    bool isolated_ = false;
    GreedyStarveWaiter fallback_;
};

// Factory covering both cases: the isolator when applicable, else the
// greedy-starve baseline. Returns whether the plan applied.
inline std::pair<std::unique_ptr<WaiterStrategy>, bool>
make_cw_waiter(const Graph& board, int q) {
    if (auto plan = find_isolator_plan(board, q))
        return {std::make_unique<BoxIsolatorWaiter>(board, q, std::move(*plan)), true};
    return {std::make_unique<GreedyStarveWaiter>(), false};
}

} // namespace wcg
