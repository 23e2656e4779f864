#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

#include "wcg/box_game.hpp"

namespace wcg {

// ---------------------------------------------------------------------------
// Box-game solver. Outcomes depend only on the multiset of set sizes, so
// states are canonicalized to sorted size vectors and memoized.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<int> box_sizes(const Family& f) {
    std::vector<int> s;
    for (auto& a : f) s.push_back(static_cast<int>(a.size()));
    std::sort(s.begin(), s.end());
    return s;
}

// Enumerates hit vectors h over the boxes with 1 <= sum h <= q+1 and
// h[i] <= sizes[i], deduplicated up to permutations of equal-sized boxes.
inline void enumerate_offers(const std::vector<int>& sizes, int q,
                             const std::function<void(const std::vector<int>&)>& fn) {
    const int n = static_cast<int>(sizes.size());
    std::vector<int> h(n, 0);
    std::function<void(int, int)> rec = [&](int i, int remaining) {
        if (i == n) {
            int total = 0;
            for (int x : h) total += x;
            if (total >= 1) fn(h);
            return;
        }
        int cap = std::min(remaining, sizes[i]);
        for (int v = 0; v <= cap; ++v) {
            // identical boxes: force non-increasing hits to skip permutations
            if (i > 0 && sizes[i] == sizes[i - 1] && v > h[i - 1]) break;
            h[i] = v;
            rec(i + 1, remaining - v);
            h[i] = 0;
        }
    };
    rec(0, q + 1);
}

} // namespace detail

class BoxGameSolver {
public:
    explicit BoxGameSolver(int q) : q_(q) {}

    // True iff Waiter wins the box game under optimal play by both sides.
    bool waiter_wins(const Family& family) {
        return waiter_wins_sizes(detail::box_sizes(family));
    }

    bool waiter_wins_sizes(std::vector<int> sizes) {
        std::sort(sizes.begin(), sizes.end());
        if (sizes.empty()) return false;
        if (sizes.front() == 0) return true;
        auto it = memo_.find(sizes);
        if (it != memo_.end()) return it->second;
        bool win = false;
        detail::enumerate_offers(sizes, q_, [&](const std::vector<int>& h) {
            if (win) return;
            // Client responds by taking an element from some hit box.
            bool all_picks_lose_for_client = true;
            for (size_t j = 0; j < sizes.size() && all_picks_lose_for_client; ++j) {
                if (h[j] == 0) continue;
                if (j > 0 && sizes[j] == sizes[j - 1] && h[j] == h[j - 1]) continue;
                std::vector<int> next;
                bool instant = false;
                for (size_t i = 0; i < sizes.size(); ++i) {
                    if (i == j) continue;
                    int s = sizes[i] - h[i];
                    if (s == 0) instant = true;
                    next.push_back(s);
                }
                if (!instant && !waiter_wins_sizes(std::move(next)))
                    all_picks_lose_for_client = false;
            }
            if (all_picks_lose_for_client) win = true;
        });
        memo_[sizes] = win;
        return win;
    }

    // Waiter plays the canonical strategy (hit the min(q+1, ell) largest
    // boxes once each); Client best-responds. True iff Waiter still wins.
    bool canonical_strategy_beats_best_client(const Family& family) {
        return canonical_vs_best(detail::box_sizes(family));
    }

private:
    bool canonical_vs_best(std::vector<int> sizes) {
        std::sort(sizes.begin(), sizes.end());
        if (sizes.empty()) return false;
        if (sizes.front() == 0) return true;
        auto it = memo_canonical_.find(sizes);
        if (it != memo_canonical_.end()) return it->second;
        int t = sizes.back();
        int ell = 0;
        for (int s : sizes) ell += (s == t);
        int take = std::min(q_ + 1, ell);
        // hits: one element from each of `take` largest boxes
        bool client_escapes = false;
        for (int pick = 0; pick < take && !client_escapes; ++pick) {
            std::vector<int> next;
            bool instant = false;
            int hit_seen = 0;
            for (int i = static_cast<int>(sizes.size()) - 1; i >= 0; --i) {
                bool hit = (sizes[i] == t) && hit_seen < take;
                if (hit) {
                    if (hit_seen == pick) { ++hit_seen; continue; } // picked box removed
                    int s = sizes[i] - 1;
                    if (s == 0) instant = true;
                    next.push_back(s);
                    ++hit_seen;
                } else {
                    next.push_back(sizes[i]);
                }
            }
            if (!instant && !canonical_vs_best(std::move(next))) client_escapes = true;
        }
        bool win = !client_escapes;
        memo_canonical_[sizes] = win;
        return win;
    }

    int q_;
    std::map<std::vector<int>, bool> memo_;
    std::map<std::vector<int>, bool> memo_canonical_;
};

// ---------------------------------------------------------------------------
// Transversal-game solver on small boards (<= ~16 elements). The game
// (X, F*) is decided by Client's final claimed set: it completes a member of
// F* exactly when it intersects every member of F.
// ---------------------------------------------------------------------------

class TransversalGameSolver {
public:
    // family sets are bitmasks over the board 0..board_size-1
    TransversalGameSolver(int board_size, std::vector<std::uint32_t> family, int q)
        : nbits_(board_size), family_(std::move(family)), q_(q) {
        full_ = (board_size >= 32) ? 0xffffffffu : ((1u << board_size) - 1);
    }

    // Waiter-Client game (X, F*): Waiter wins iff he can force Client's set
    // to intersect every member of F.
    bool waiter_wins_wc() { return solve(full_, 0, /*wc=*/true); }

    // Client-Waiter game (X, F*): Client wins iff he can ensure his set
    // intersects every member of F.
    bool client_wins_cw() { return !solve(full_, 0, /*wc=*/false); }

private:
    bool client_hits_all(std::uint32_t client) const {
        for (auto a : family_)
            if ((a & client) == 0) return false;
        return true;
    }

    bool some_set_dead(std::uint32_t free_mask, std::uint32_t client) const {
        // a set fully outside free|client can no longer be hit by Client
        for (auto a : family_)
            if ((a & (free_mask | client)) == 0) return true;
        return false;
    }

    // Returns true iff Waiter wins (forces intersection in WC / prevents it
    // in CW is handled by the terminal predicate being shared: "Waiter wins"
    // means target-hits-all in WC and target-misses-some in CW).
    bool solve(std::uint32_t free_mask, std::uint32_t client, bool wc) {
        if (client_hits_all(client)) return wc;
        if (some_set_dead(free_mask, client)) return !wc;
        if (free_mask == 0) {
            bool hits = client_hits_all(client);
            return wc ? hits : !hits;
        }
        std::uint64_t key = (static_cast<std::uint64_t>(free_mask) << 32) | client;
        auto& memo = wc ? memo_wc_ : memo_cw_;
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;

        std::vector<int> free_ids;
        for (int i = 0; i < nbits_; ++i)
            if (free_mask & (1u << i)) free_ids.push_back(i);
        int nf = static_cast<int>(free_ids.size());

        bool waiter_can_win = false;
        if (wc && nf < q_ + 1) {
            // terminal leftover: all to Waiter
            waiter_can_win = solve(0, client, wc);
        } else {
            int lo = wc ? q_ + 1 : 1;
            int hi = wc ? q_ + 1 : std::min(q_ + 1, nf);
            for (int sz = lo; sz <= hi && !waiter_can_win; ++sz) {
                std::vector<int> idx(sz);
                std::function<void(int, int)> offers = [&](int start, int depth) {
                    if (waiter_can_win) return;
                    if (depth == sz) {
                        bool all_picks_win = true;
                        for (int d = 0; d < sz && all_picks_win; ++d) {
                            std::uint32_t offer_mask = 0;
                            for (int e = 0; e < sz; ++e) offer_mask |= 1u << free_ids[idx[e]];
                            std::uint32_t pick_bit = 1u << free_ids[idx[d]];
                            if (!solve(free_mask & ~offer_mask, client | pick_bit, wc))
                                all_picks_win = false;
                        }
                        if (all_picks_win) waiter_can_win = true;
                        return;
                    }
                    for (int i = start; i < nf; ++i) {
                        idx[depth] = i;
                        offers(i + 1, depth + 1);
                    }
                };
                offers(0, 0);
            }
        }
        memo[key] = waiter_can_win;
        return waiter_can_win;
    }

    int nbits_;
    std::vector<std::uint32_t> family_;
    int q_;
    std::uint32_t full_;
    std::unordered_map<std::uint64_t, bool> memo_wc_;
    std::unordered_map<std::uint64_t, bool> memo_cw_;
};

} // namespace wcg
