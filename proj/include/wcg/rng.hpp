#pragma once

#include <cstdint>
#include <random>

namespace wcg {

// splitmix64 finalizer, used both as a mixer and as a stream deriver.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Substream derivation: fold each index into the master seed through
// splitmix64. Per-trial seed = derive_seed(master, n, c_index, trial_index);
// results are therefore independent of worker scheduling.
inline std::uint64_t derive_seed(std::uint64_t master) { return splitmix64(master); }

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t idx, Rest... rest) {
    return derive_seed(splitmix64(master ^ splitmix64(idx + 0x632be59bd9b4e019ULL)), rest...);
}

// Seedable 64-bit generator with a documented substream rule.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0, bound)
    std::uint64_t next_below(std::uint64_t bound) {
        std::uniform_int_distribution<std::uint64_t> d(0, bound - 1);
        return d(eng_);
    }

    double next_double() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
    }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return next_double() < p;
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

} // namespace wcg
