#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wcg/graph.hpp"
#include "wcg/rng.hpp"

namespace wcg {

// log C(n, k) via lgamma; exact enough for every identity check here
inline double log_binomial(double n, double k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Kahan-compensated accumulator
class CompensatedSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0, c_ = 0;
};

// mu_i = E[#vertices of degree i] = n C(n-1, i) p^i (1-p)^{n-1-i}
inline double mu_closed_form(int n, double p, int i) {
    if (i < 0 || i > n - 1) throw std::invalid_argument("mu_closed_form: 0 <= i <= n-1");
    if (p == 0.0) return i == 0 ? static_cast<double>(n) : 0.0;
    if (p == 1.0) return i == n - 1 ? static_cast<double>(n) : 0.0;
    double lg = log_binomial(n - 1, i) + i * std::log(p) + (n - 1 - i) * std::log1p(-p);
    return n * std::exp(lg);
}

struct IdentityCheck {
    double lhs = 0, rhs = 0;
    double abs_diff = 0, rel_diff = 0;
};

// Sum_i (q/(q+1))^i mu_i  ==  n (1 - p/(q+1))^{n-1}; both sides evaluated
// independently, in log space on the left.
inline IdentityCheck degree_identity_check(int n, double p, int q) {
    if (q < 1) throw std::invalid_argument("degree_identity_check: q >= 1");
    if (p < 0 || p > 1) throw std::invalid_argument("degree_identity_check: p in [0,1]");
    IdentityCheck r;
    const double log_ratio = std::log(static_cast<double>(q) / (q + 1));
    CompensatedSum acc;
    for (int i = 0; i <= n - 1; ++i) {
        double mu = mu_closed_form(n, p, i);
        if (mu > 0) acc.add(std::exp(std::log(mu) + i * log_ratio));
    }
    r.lhs = acc.value();
    r.rhs = n * std::pow(1.0 - p / (q + 1), n - 1);
    r.abs_diff = std::fabs(r.lhs - r.rhs);
    r.rel_diff = r.rhs != 0 ? r.abs_diff / std::fabs(r.rhs) : r.abs_diff;
    return r;
}

// Sum_v (q/(q+1))^{d(v)}, exact over the realized degree sequence.
inline double weighted_degree_sum(const Graph& g, int q) {
    const double ratio = static_cast<double>(q) / (q + 1);
    CompensatedSum acc;
    for (int u = 0; u < g.n(); ++u) acc.add(std::pow(ratio, g.degree(u)));
    return acc.value();
}

struct MeanVariance {
    double mean = 0;
    double variance = 0;
};

// Closed forms for X_k = #degree-k vertices:
//   E[X_k]  = n pi,  pi = C(n-1,k) p^k (1-p)^{n-1-k}
//   Var[X_k] = n pi (1 - pi)
//            + n(n-1) pi^2 [ (k/(n-1))^2/p + (1-k/(n-1))^2/(1-p) - 1 ]
inline MeanVariance variance_xk_closed_form(int n, double p, int k) {
    if (k < 0 || k > n - 1) throw std::invalid_argument("variance_xk_closed_form: bad k");
    MeanVariance out;
    if (p == 0.0 || p == 1.0) {
        int forced = (p == 0.0) ? 0 : n - 1;
        out.mean = (k == forced) ? n : 0;
        out.variance = 0;
        return out;
    }
    double lpi = log_binomial(n - 1, k) + k * std::log(p) + (n - 1 - k) * std::log1p(-p);
    double pi = std::exp(lpi);
    out.mean = n * pi;
    double f = k / static_cast<double>(n - 1);
    double cov_factor = f * f / p + (1 - f) * (1 - f) / (1 - p) - 1.0;
    out.variance = n * pi * (1 - pi) +
                   static_cast<double>(n) * (n - 1) * pi * pi * cov_factor;
    return out;
}

struct TailSum {
    double sum = 0;
    int start_index = 0;
    double threshold_c = 2.0 / (9.0 * std::log(3.0)); // lemma applicability bound
    bool lemma_applicable = false;
};

// Sum of mu_i from i = 9 c log n up, for p = c log n / n.
inline TailSum tail_sum(int n, double c) {
    if (c <= 0) throw std::invalid_argument("tail_sum: c > 0 required");
    TailSum out;
    out.lemma_applicable = c > out.threshold_c;
    const double p = std::min(1.0, c * std::log(n) / n);
    out.start_index = static_cast<int>(std::ceil(9.0 * c * std::log(n)));
    CompensatedSum acc;
    for (int i = out.start_index; i <= n - 1; ++i) acc.add(mu_closed_form(n, p, i));
    out.sum = acc.value();
    return out;
}

// Abstract set family over any universe; only sizes matter here.
using SetFamily = std::vector<std::vector<int>>;

struct CriterionSums {
    double bednarska = 0; // Sum 2^{-|A|/(2q-1)}; Waiter-side criterion (< 1/2)
    double client = 0;    // Sum (q/(q+1))^{|A|}; Client-side criterion (< 1)
};

inline CriterionSums criterion_sums(const SetFamily& family, int q) {
    if (q < 1) throw std::invalid_argument("criterion_sums: q >= 1");
    CriterionSums out;
    CompensatedSum b, c;
    const double lg2 = std::log(2.0);
    const double lr = std::log(static_cast<double>(q) / (q + 1));
    for (auto& a : family) {
        double sz = static_cast<double>(a.size());
        b.add(std::exp(-sz / (2.0 * q - 1.0) * lg2));
        c.add(std::exp(sz * lr));
    }
    out.bednarska = b.value();
    out.client = c.value();
    return out;
}

struct CriterionConfig {
    double r = 0.01;     // F1 exponent constant
    double lambda = 100; // F2 set-size constant
    double eps = 1.0;
};

struct F1F2Sums {
    double f1_sum = 0;
    double f2_bound = 0;     // may underflow to zero
    double f2_log_bound = 0; // log of the bound, always finite
};

// F1: Sum_v C(d(v), r log n) (q/(q+1))^{d(v) - r log n}, from the realized
// degree sequence. F2 is never enumerated; only the closed-form bound chain
//   [ (e log n / (lambda log log n))^2 (q/(q+1))^{lambda log log n} ]^{lambda n log log n / log n}
// is evaluated.
inline F1F2Sums f1_f2_sums(const Graph& g, int q, const CriterionConfig& cfg) {
    const int n = g.n();
    if (n < 16) throw std::invalid_argument("f1_f2_sums: n >= 16 required");
    const double L = std::log(n), LL = std::log(L);
    const double rlogn = cfg.r * L;
    if (rlogn < 1.0) throw std::invalid_argument("f1_f2_sums: r log n >= 1 required");
    const int subset_size = static_cast<int>(std::floor(rlogn));
    const double lr = std::log(static_cast<double>(q) / (q + 1));
    F1F2Sums out;
    CompensatedSum acc;
    for (int v = 0; v < n; ++v) {
        int d = g.degree(v);
        if (subset_size > d) continue; // no subsets of that size
        double term = log_binomial(d, subset_size) + (d - rlogn) * lr;
        acc.add(std::exp(term));
    }
    out.f1_sum = acc.value();
    const double inner = 2.0 * (1.0 + std::log(L) - std::log(cfg.lambda * LL)) +
                         cfg.lambda * LL * lr;
    out.f2_log_bound = cfg.lambda * n * LL / L * inner;
    out.f2_bound = std::exp(out.f2_log_bound);
    return out;
}

// ---------------------------------------------------------------------------
// Per-lemma random-graph property checks
// ---------------------------------------------------------------------------

struct LemmaCheck {
    std::string name;
    bool hypothesis_ok = false;
    bool pass = false;
    std::optional<VertexSet> witness;
    int sample_size = 0;
    std::uint64_t seed = 0;

    nlohmann::json to_json() const {
        nlohmann::json j{{"name", name},
                         {"hypothesis_ok", hypothesis_ok},
                         {"pass", pass},
                         {"sample_size", sample_size},
                         {"seed", seed}};
        if (witness) j["witness"] = *witness;
        return j;
    }
};

struct RandomGraphCheckParams {
    double c = 1.0;    // p = c log n / n (or p = c/n for the reservoir check)
    double t = 0.25;   // small-set density parameter
    int k = 0;         // big-set size (0 = skip)
    double gamma = 0;  // min-degree constant (0 = skip)
    int samples = 2000;
    std::uint64_t seed = 0;
};

inline std::vector<LemmaCheck> random_graph_checks(const Graph& g,
                                                   const RandomGraphCheckParams& prm) {
    const int n = g.n();
    const double L = std::log(std::max(2, n));
    std::vector<LemmaCheck> out;
    Rng rng(prm.seed);

    { // e_G(A) <= 2 c t |A| log n for |A| <= t n
        LemmaCheck chk;
        chk.name = "small_set_edges";
        chk.hypothesis_ok = prm.c > 0 && prm.t > 0;
        chk.seed = prm.seed;
        chk.pass = true;
        const int max_size = std::max(1, static_cast<int>(std::floor(prm.t * n)));
        auto violates = [&](const VertexSet& a) {
            double bound = 2.0 * prm.c * prm.t * static_cast<double>(a.size()) * L;
            return static_cast<double>(g.edges_within(a).size()) > bound;
        };
        if (n <= 20) {
            // exact over all subsets
            for (std::uint32_t mask = 1; mask < (1u << n) && chk.pass; ++mask) {
                if (__builtin_popcount(mask) > max_size) continue;
                VertexSet a;
                for (int v = 0; v < n; ++v)
                    if (mask & (1u << v)) a.push_back(v);
                if (violates(a)) { chk.pass = false; chk.witness = a; }
            }
        } else {
            chk.sample_size = prm.samples;
            for (int it = 0; it < prm.samples && chk.pass; ++it) {
                int sz = 1 + static_cast<int>(rng.next_below(max_size));
                VertexSet a;
                std::vector<char> in(n, 0);
                // dense seeds: grow around a random vertex half the time
                if (rng.bernoulli(0.5)) {
                    int v = static_cast<int>(rng.next_below(n));
                    a.push_back(v);
                    in[v] = 1;
                    while (static_cast<int>(a.size()) < sz) {
                        int x = a[rng.next_below(a.size())];
                        auto& nb = g.neighbors(x);
                        if (nb.empty()) break;
                        int w = nb[rng.next_below(nb.size())];
                        if (in[w]) break;
                        in[w] = 1;
                        a.push_back(w);
                    }
                } else {
                    while (static_cast<int>(a.size()) < sz) {
                        int v = static_cast<int>(rng.next_below(n));
                        if (!in[v]) { in[v] = 1; a.push_back(v); }
                    }
                }
                std::sort(a.begin(), a.end());
                if (violates(a)) { chk.pass = false; chk.witness = a; }
            }
        }
        out.push_back(std::move(chk));
    }

    if (prm.k > 0) { // e_G(X,Y) >= k^2 p / 2 under k p >= 100 log(n/k)
        LemmaCheck chk;
        chk.name = "edges_between_big_sets";
        chk.seed = prm.seed;
        const double p = prm.c * L / n;
        chk.hypothesis_ok = prm.k * p >= 100.0 * std::log(static_cast<double>(n) / prm.k);
        chk.pass = true;
        if (2 * prm.k <= n) {
            chk.sample_size = prm.samples;
            for (int it = 0; it < prm.samples && chk.pass; ++it) {
                std::vector<int> perm(n);
                for (int i = 0; i < n; ++i) perm[i] = i;
                for (int i = n - 1; i > 0; --i)
                    std::swap(perm[i], perm[rng.next_below(i + 1)]);
                VertexSet x(perm.begin(), perm.begin() + prm.k);
                VertexSet y(perm.begin() + prm.k, perm.begin() + 2 * prm.k);
                std::sort(x.begin(), x.end());
                std::sort(y.begin(), y.end());
                if (static_cast<double>(g.edges_between(x, y).size()) <
                    prm.k * static_cast<double>(prm.k) * p / 2.0) {
                    chk.pass = false;
                    chk.witness = x;
                }
            }
        } else {
            chk.pass = false;
        }
        out.push_back(std::move(chk));
    }

    { // e(G) <= c n (reservoir scale, p = c/n)
        LemmaCheck chk;
        chk.name = "reservoir_edge_count";
        chk.hypothesis_ok = prm.c > 0;
        chk.pass = g.m() <= prm.c * n;
        out.push_back(std::move(chk));
    }

    { // Delta(G) <= 9 c log n, hypothesis c > 2/(9 log 3)
        LemmaCheck chk;
        chk.name = "max_degree";
        chk.hypothesis_ok = prm.c > 2.0 / (9.0 * std::log(3.0));
        chk.pass = g.max_degree() <= 9.0 * prm.c * L;
        if (!chk.pass) {
            for (int v = 0; v < n; ++v)
                if (g.degree(v) > 9.0 * prm.c * L) { chk.witness = VertexSet{v}; break; }
        }
        out.push_back(std::move(chk));
    }

    if (prm.gamma > 0) { // delta(G) >= gamma log n
        LemmaCheck chk;
        chk.name = "min_degree";
        chk.hypothesis_ok = true;
        chk.pass = g.min_degree() >= prm.gamma * L;
        if (!chk.pass) {
            for (int v = 0; v < n; ++v)
                if (g.degree(v) < prm.gamma * L) { chk.witness = VertexSet{v}; break; }
        }
        out.push_back(std::move(chk));
    }

    return out;
}

} // namespace wcg
