#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ampint/core/rng.hpp"
#include "ampint/homodyne/trace.hpp"

namespace ampint {

struct PowerEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::vector<std::string> warnings;
};

struct PowerOptions {
    double T_av = 0.0;         ///< averaging window [s]; 0 uses the whole valid region
    double block_length = 0.0; ///< bootstrap block [s]; 0 uses 10x the provenance correlation time
    std::size_t replicates = 200;
    std::uint64_t seed = 0xB007ULL;
};

namespace detail {

// Time average of g(i) over the valid window with a moving-block bootstrap error.
template <class G> PowerEstimate block_average(const PhotocurrentTrace &tr, const PowerOptions &opt, G g) {
    std::size_t count = tr.valid_count();
    if (opt.T_av > 0.0) {
        const auto want = static_cast<std::size_t>(std::llround(opt.T_av / tr.grid.dt));
        require(want <= count, "T_av", "averaging window exceeds the valid region");
        count = want;
    }
    require(count > 0, "trace", "valid region is empty");
    PowerEstimate est;
    est.samples = count;
    const double corr = tr.provenance.correlation_time;
    if (static_cast<double>(count) * tr.grid.dt < 100.0 * corr)
        est.warnings.push_back("averaging window is shorter than 100 correlation times");

    const double blk_T = opt.block_length > 0.0 ? opt.block_length : 10.0 * corr;
    const std::size_t blk = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(blk_T / tr.grid.dt)), 1, count);
    const std::size_t B = count / blk;
    std::vector<double> block_sum(B, 0.0);
    double total = 0.0;
    for (std::size_t b = 0; b < B; ++b) {
        double s = 0.0;
        const std::size_t start = tr.valid_from + b * blk;
        for (std::size_t k = 0; k < blk; ++k) s += g(tr.samples[start + k]);
        block_sum[b] = s;
        total += s;
    }
    for (std::size_t k = tr.valid_from + B * blk; k < tr.valid_from + count; ++k) total += g(tr.samples[k]);
    est.value = total / static_cast<double>(count);

    if (B < 2) {
        est.warnings.push_back("fewer than two bootstrap blocks; standard error unavailable");
        est.std_error = std::abs(est.value);
        return est;
    }
    auto engine = make_engine(opt.seed);
    std::uniform_int_distribution<std::size_t> pick(0, B - 1);
    const std::size_t R = std::max<std::size_t>(opt.replicates, 2);
    double m1 = 0.0, m2 = 0.0;
    const double norm = 1.0 / static_cast<double>(B * blk);
    for (std::size_t r = 0; r < R; ++r) {
        double s = 0.0;
        for (std::size_t b = 0; b < B; ++b) s += block_sum[pick(engine)];
        s *= norm;
        m1 += s;
        m2 += s * s;
    }
    const double n = static_cast<double>(R);
    const double mean = m1 / n;
    est.std_error = std::sqrt(std::max(m2 / n - mean * mean, 0.0) * n / (n - 1.0));
    return est;
}

} // namespace detail

/// <i^2> over the valid region (or its first T_av seconds).
inline PowerEstimate mean_square_power(const PhotocurrentTrace &tr, const PowerOptions &opt = {}) {
    return detail::block_average(tr, opt, [](double x) { return x * x; });
}

/// <i> over the valid region; the observable for direct intensity fringes.
inline PowerEstimate mean_level(const PhotocurrentTrace &tr, const PowerOptions &opt = {}) {
    return detail::block_average(tr, opt, [](double x) { return x; });
}

} // namespace ampint
