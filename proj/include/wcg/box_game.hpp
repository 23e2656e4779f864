#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wcg/rng.hpp"

namespace wcg {

// Exact rational arithmetic for the trajectory bound; numerators stay within
// 128 bits for every (q, t, |F|) this module accepts.
struct Rational {
    __int128 num = 0;
    __int128 den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(__int128 n, __int128 d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) { num = -num; den = -den; }
        __int128 g = gcd128(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }

    Rational operator+(const Rational& o) const { return {num * o.den + o.num * den, den * o.den}; }
    Rational operator-(const Rational& o) const { return {num * o.den - o.num * den, den * o.den}; }
    Rational operator*(const Rational& o) const { return {num * o.num, den * o.den}; }
    bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
    bool operator<=(const Rational& o) const { return num * o.den <= o.num * den; }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline Rational rational_pow(const Rational& b, int e) {
    Rational r(1);
    for (int i = 0; i < e; ++i) r = r * b;
    return r;
}

// A family is a multifamily of element sets (elements are small ints).
using Family = std::vector<std::vector<int>>;

// Canonical of type t: pairwise disjoint, all sizes in {t-1, t}.
inline bool is_canonical(const Family& family, int t) {
    if (t < 1) return false;
    std::vector<int> seen;
    for (auto& a : family) {
        int sz = static_cast<int>(a.size());
        if (sz != t && sz != t - 1) return false;
        for (int x : a) seen.push_back(x);
    }
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

inline int family_type(const Family& family) {
    int t = 0;
    for (auto& a : family) t = std::max<int>(t, static_cast<int>(a.size()));
    return t;
}

inline bool family_has_empty_set(const Family& family) {
    return std::any_of(family.begin(), family.end(),
                       [](const std::vector<int>& a) { return a.empty(); });
}

// Trajectory bound: (q/(q+1))^{t-j} |F| - (q+1) (1 - (q/(q+1))^{t-j}).
inline Rational eq4_lower_bound(long long family_size, int q, int t, int j) {
    if (j < 0 || j > t) throw std::invalid_argument("eq4_lower_bound: 0 <= j <= t required");
    Rational ratio(q, q + 1);
    Rational pw = rational_pow(ratio, t - j);
    return pw * Rational(family_size) - Rational(q + 1) * (Rational(1) - pw);
}

// Sufficiency threshold |F| >= 2 (q+1)^{t+1} / q^t, evaluated exactly.
inline Rational box_game_threshold(int q, int t) {
    return Rational(2) * rational_pow(Rational(q + 1, 1), t + 1) * rational_pow(Rational(1, q), t);
}

struct BoxGameState {
    Family family;
    int q = 1;
    int round = 0; // 1-based round index i of the next round

    bool waiter_won() const { return family_has_empty_set(family); }
    bool client_safe() const { return family.empty(); }
};

// Derived per-round quantities: the current type, the largest sets and their
// count.
struct BoxRoundView {
    int type = 0;                   // t_i
    std::vector<size_t> largest;    // indices into family of the largest sets
    int largest_count = 0;          // ell_i
};

inline BoxRoundView box_round_view(const Family& family) {
    BoxRoundView v;
    v.type = family_type(family);
    for (size_t i = 0; i < family.size(); ++i)
        if (static_cast<int>(family[i].size()) == v.type) v.largest.push_back(i);
    v.largest_count = static_cast<int>(v.largest.size());
    return v;
}

// Waiter's offer: min(q+1, ell_i) elements, one from each of the
// lexicographically-first largest sets.
inline std::vector<int> waiter_box_offer(const BoxGameState& state) {
    if (state.family.empty() || state.waiter_won())
        throw std::logic_error("waiter_box_offer: called on a decided position");
    BoxRoundView v = box_round_view(state.family);
    std::vector<size_t> order = v.largest;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return state.family[a] < state.family[b];
    });
    int take = std::min(state.q + 1, v.largest_count);
    std::vector<int> offer;
    for (int i = 0; i < take; ++i)
        offer.push_back(*std::min_element(state.family[order[i]].begin(),
                                          state.family[order[i]].end()));
    return offer;
}

// F_{i+1} = { A \ W_i : A in F_i, A != A_j } where the pick c_i lies in A_j.
inline Family update_family(const Family& family, const std::vector<int>& offer, int pick) {
    if (std::find(offer.begin(), offer.end(), pick) == offer.end())
        throw std::invalid_argument("update_family: pick not in offer");
    std::optional<size_t> picked_set;
    for (size_t i = 0; i < family.size(); ++i)
        if (std::find(family[i].begin(), family[i].end(), pick) != family[i].end()) {
            picked_set = i;
            break;
        }
    if (!picked_set) throw std::invalid_argument("update_family: pick not in any set");
    Family next;
    for (size_t i = 0; i < family.size(); ++i) {
        if (i == *picked_set) continue;
        std::vector<int> a;
        for (int x : family[i])
            if (std::find(offer.begin(), offer.end(), x) == offer.end()) a.push_back(x);
        next.push_back(std::move(a));
    }
    return next;
}

// Client side of a box game: given the current family and Waiter's offer,
// return the element to claim.
using BoxClient = std::function<int(const Family&, const std::vector<int>&)>;

inline BoxClient random_box_client(std::uint64_t seed) {
    auto rng = std::make_shared<Rng>(seed);
    return [rng](const Family&, const std::vector<int>& offer) {
        return offer[rng->next_below(offer.size())];
    };
}

struct BoxTrajectoryRow {
    int round = 0;
    int type = 0;
    int family_size = 0;
    int largest_count = 0;
    double eq4_bound = 0.0; // bound at the type in effect when it dropped
    bool type_drop = false;
};

struct BoxGameResult {
    bool waiter_wins = false;
    std::vector<BoxTrajectoryRow> trajectory;
    bool canonical_throughout = true;
    bool eq4_throughout = true; // bound held at every type-drop round
};

// Plays Waiter's canonical strategy against the given Client and audits the
// canonicality and trajectory-bound invariants along the way.
inline BoxGameResult simulate_box_game(Family family, int q, const BoxClient& client) {
    const int t0 = family_type(family);
    const long long f0 = static_cast<long long>(family.size());
    if (!is_canonical(family, std::max(t0, 1)))
        throw std::invalid_argument("simulate_box_game: family not canonical");

    BoxGameState state{std::move(family), q, 1};
    BoxGameResult res;
    int last_type = t0;

    auto audit = [&](bool drop) {
        int type = family_type(state.family);
        BoxRoundView v = box_round_view(state.family);
        BoxTrajectoryRow row;
        row.round = state.round;
        row.type = type;
        row.family_size = static_cast<int>(state.family.size());
        row.largest_count = v.largest_count;
        row.type_drop = drop;
        if (drop) {
            Rational bound = eq4_lower_bound(f0, q, t0, type);
            row.eq4_bound = bound.to_double();
            if (Rational(row.family_size) < bound) res.eq4_throughout = false;
        }
        res.trajectory.push_back(row);
        if (!state.family.empty() && !family_has_empty_set(state.family) &&
            !is_canonical(state.family, std::max(type, 1)))
            res.canonical_throughout = false;
    };

    audit(true); // j = t base row
    while (!state.waiter_won() && !state.client_safe()) {
        std::vector<int> offer = waiter_box_offer(state);
        int pick = client(state.family, offer);
        state.family = update_family(state.family, offer, pick);
        ++state.round;
        int type = family_type(state.family);
        bool drop = type < last_type && !state.family.empty() && !state.waiter_won();
        audit(drop);
        last_type = std::min(last_type, type);
    }
    res.waiter_wins = state.waiter_won();
    return res;
}

} // namespace wcg
