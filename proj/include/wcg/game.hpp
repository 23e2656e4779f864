#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wcg/graph.hpp"

namespace wcg {

enum class GameKind { WaiterClient, ClientWaiter };

inline std::string to_string(GameKind k) {
    return k == GameKind::WaiterClient ? "WC" : "CW";
}

enum class Owner : char { Free, Waiter, Client };

enum class Winner : char { Waiter, Client };

using Offer = std::vector<int>; // free edge ids

struct OfferViolation {
    std::string reason;
};

class GameState {
public:
    GameState(Graph board, int q, GameKind kind)
        : board_(std::move(board)), q_(q), kind_(kind),
          ownership_(board_.m(), Owner::Free), free_count_(board_.m()) {
        if (q < 1) throw std::invalid_argument("GameState: q >= 1 required");
    }

    const Graph& board() const { return board_; }
    int q() const { return q_; }
    GameKind kind() const { return kind_; }
    int round() const { return round_; }
    int free_count() const { return free_count_; }
    bool over() const { return free_count_ == 0; }
    Owner owner(int edge_id) const { return ownership_.at(edge_id); }

    std::vector<int> free_edges() const { return edges_owned_by(Owner::Free); }
    std::vector<int> waiter_edges() const { return edges_owned_by(Owner::Waiter); }
    std::vector<int> client_edges() const { return edges_owned_by(Owner::Client); }

    int count(Owner o) const {
        int c = 0;
        for (auto x : ownership_) c += (x == o);
        return c;
    }

    Graph client_graph() const { return graph_of(Owner::Client); }
    Graph waiter_graph() const { return graph_of(Owner::Waiter); }

    // Terminal leftover rule applies in Waiter-Client games only: once fewer
    // than q+1 free edges remain at round start, they all go to Waiter.
    bool leftover_phase() const {
        return kind_ == GameKind::WaiterClient && free_count_ > 0 &&
               free_count_ < q_ + 1;
    }

    std::optional<OfferViolation> validate_offer(const Offer& offer) const {
        if (over()) return OfferViolation{"game is over"};
        if (leftover_phase()) return OfferViolation{"terminal leftover phase; no offer allowed"};
        for (int id : offer) {
            if (id < 0 || id >= board_.m()) return OfferViolation{"edge id out of range"};
            if (ownership_[id] != Owner::Free) return OfferViolation{"offered edge is not free"};
        }
        for (size_t i = 0; i < offer.size(); ++i)
            for (size_t j = i + 1; j < offer.size(); ++j)
                if (offer[i] == offer[j]) return OfferViolation{"duplicate edge in offer"};
        const int sz = static_cast<int>(offer.size());
        if (kind_ == GameKind::WaiterClient) {
            if (sz != q_ + 1) return OfferViolation{"Waiter-Client offer must have size q+1"};
        } else {
            if (sz < 1 || sz > q_ + 1)
                return OfferViolation{"Client-Waiter offer size must be in [1, q+1]"};
        }
        return std::nullopt;
    }

    // Validates before mutating; state unchanged on throw.
    void apply_round(const Offer& offer, int choice) {
        if (auto v = validate_offer(offer)) throw std::invalid_argument("apply_round: " + v->reason);
        bool in_offer = false;
        for (int id : offer) in_offer |= (id == choice);
        if (!in_offer) throw std::invalid_argument("apply_round: choice outside offer");
        for (int id : offer)
            set_owner(id, id == choice ? Owner::Client : Owner::Waiter);
        ++round_;
    }

    // Waiter-Client terminal step: all remaining free edges to Waiter.
    void apply_leftover() {
        if (!leftover_phase()) throw std::logic_error("apply_leftover: not in leftover phase");
        for (int id = 0; id < board_.m(); ++id)
            if (ownership_[id] == Owner::Free) set_owner(id, Owner::Waiter);
        ++round_;
    }

private:
    std::vector<int> edges_owned_by(Owner o) const {
        std::vector<int> out;
        for (int id = 0; id < board_.m(); ++id)
            if (ownership_[id] == o) out.push_back(id);
        return out;
    }

    Graph graph_of(Owner o) const {
        Graph g(board_.n());
        for (int id = 0; id < board_.m(); ++id)
            if (ownership_[id] == o) {
                auto& [u, v] = board_.edge(id);
                g.add_edge(u, v);
            }
        return g;
    }

    void set_owner(int id, Owner o) {
        ownership_[id] = o;
        --free_count_;
    }

    Graph board_;
    int q_;
    GameKind kind_;
    std::vector<Owner> ownership_;
    int free_count_;
    int round_ = 0;
};

inline GameState new_game(Graph board, int q, GameKind kind) {
    return GameState(std::move(board), q, kind);
}

enum class Fault { None, Waiter, Client };

struct TranscriptRound {
    Offer offer;
    int pick = -1;
};

struct Transcript {
    GameKind kind = GameKind::WaiterClient;
    int q = 1;
    int n = 0;
    std::uint64_t seed = 0;
    std::vector<TranscriptRound> rounds;
    std::vector<int> leftover; // edge ids claimed by Waiter in the terminal step
    Winner winner = Winner::Client;
    Fault fault = Fault::None;
    bool target_holds = false; // target property of Client's final graph

    nlohmann::json to_json() const {
        nlohmann::json rs = nlohmann::json::array();
        for (auto& r : rounds) rs.push_back({{"offer", r.offer}, {"pick", r.pick}});
        nlohmann::json j{{"kind", to_string(kind)},
                         {"q", q},
                         {"n", n},
                         {"seed", seed},
                         {"rounds", rs},
                         {"leftover", leftover},
                         {"winner", winner == Winner::Waiter ? "Waiter" : "Client"}};
        if (fault != Fault::None) j["fault"] = fault == Fault::Waiter ? "Waiter" : "Client";
        return j;
    }
};

using TargetPredicate = std::function<bool(const Graph&)>;

// Waiter strategy: state -> offer. Client strategy: (state, offer) -> edge id.
class WaiterStrategy {
public:
    virtual ~WaiterStrategy() = default;
    virtual Offer offer(const GameState& state) = 0;
};

class ClientStrategy {
public:
    virtual ~ClientStrategy() = default;
    virtual int choose(const GameState& state, const Offer& offer) = 0;
};

// Plays a game to completion. Winner adjudication: in Waiter-Client games
// Waiter wins iff the target holds for Client's final graph; in
// Client-Waiter games Client wins iff it does. Illegal strategy moves abort
// the game with the fault attributed; harnesses count these as losses for
// the faulting side.
inline Transcript play_out(Graph board, int q, GameKind kind,
                           WaiterStrategy& waiter, ClientStrategy& client,
                           const TargetPredicate& target, std::uint64_t seed = 0) {
    GameState state = new_game(std::move(board), q, kind);
    Transcript t;
    t.kind = kind;
    t.q = q;
    t.n = state.board().n();
    t.seed = seed;

    auto adjudicate = [&]() {
        t.target_holds = target(state.client_graph());
        bool waiter_wins = (kind == GameKind::WaiterClient) ? t.target_holds : !t.target_holds;
        t.winner = waiter_wins ? Winner::Waiter : Winner::Client;
    };

    while (!state.over()) {
        if (state.leftover_phase()) {
            t.leftover = state.free_edges();
            state.apply_leftover();
            break;
        }
        Offer offer = waiter.offer(state);
        if (state.validate_offer(offer)) {
            t.fault = Fault::Waiter;
            adjudicate();
            t.winner = Winner::Client;
            return t;
        }
        int pick = client.choose(state, offer);
        bool legal = false;
        for (int id : offer) legal |= (id == pick);
        if (!legal) {
            t.fault = Fault::Client;
            adjudicate();
            t.winner = Winner::Waiter;
            return t;
        }
        state.apply_round(offer, pick);
        t.rounds.push_back({offer, pick});
    }
    adjudicate();
    return t;
}

// Replays a transcript against a fresh state; returns the terminal state.
inline GameState replay(Graph board, const Transcript& t) {
    GameState state = new_game(std::move(board), t.q, t.kind);
    for (auto& r : t.rounds) state.apply_round(r.offer, r.pick);
    if (state.leftover_phase()) state.apply_leftover();
    return state;
}

} // namespace wcg
