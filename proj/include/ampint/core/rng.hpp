#pragma once

// Splittable seeding: every Monte-Carlo trial gets its own engine whose seed is a
// hash of the master seed and the trial's coordinates, so results never depend on
// which worker ran which trial.

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace ampint {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(master);
    for (auto p : path) s = splitmix64(s ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
    return s;
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return Engine(seq);
}

/// Circular complex Gaussian with E|z|^2 = variance.
class ComplexNormal {
public:
    explicit ComplexNormal(double variance = 1.0) : dist_(0.0, std::sqrt(variance / 2.0)) {}

    template <class Gen> std::complex<double> operator()(Gen &g) {
        const double re = dist_(g);
        return {re, dist_(g)};
    }

private:
    std::normal_distribution<double> dist_;
};

} // namespace ampint
