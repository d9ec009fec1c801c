#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ampint/core/fft.hpp"
#include "ampint/core/rng.hpp"
#include "ampint/fields/types.hpp"

namespace ampint {

struct CorrelationOptions {
    double block_length = 0.0; ///< bootstrap block [s]; 0 picks 10x the envelope's correlation time
    std::size_t replicates = 200;
    std::uint64_t seed = 0x5EEDC0DEULL;
};

namespace detail {

struct BlockSums {
    std::size_t blocks = 0;
    std::vector<cplx> sums;           // blocks x (K+1), row-major
    std::vector<double> counts;       // blocks x (K+1)
    std::vector<double> power_a, power_b;
};

// Per-block lagged sums  S_b[k] = sum_{t in block b, t-k >= from} a[t] conj(b[t-k]).
inline BlockSums lagged_block_sums(const std::vector<cplx> &a, const std::vector<cplx> &b, std::size_t from,
                                   std::size_t to, std::size_t K, std::size_t block) {
    BlockSums out;
    out.blocks = std::max<std::size_t>(1, (to - from) / block);
    const std::size_t B = out.blocks;
    out.sums.assign(B * (K + 1), cplx{});
    out.counts.assign(B * (K + 1), 0.0);
    out.power_a.assign(B, 0.0);
    out.power_b.assign(B, 0.0);
    for (std::size_t bi = 0; bi < B; ++bi) {
        const std::size_t s = from + bi * block;
        const std::size_t e = bi + 1 == B ? to : s + block;
        for (std::size_t t = s; t < e; ++t) {
            out.power_a[bi] += std::norm(a[t]);
            out.power_b[bi] += std::norm(b[t]);
        }
        for (std::size_t k = 0; k <= K; ++k) {
            const std::size_t first = std::max(s, from + k);
            out.counts[bi * (K + 1) + k] = e > first ? static_cast<double>(e - first) : 0.0;
        }
        cplx *row = &out.sums[bi * (K + 1)];
        if (K <= 64) {
            for (std::size_t k = 0; k <= K; ++k) {
                cplx acc{};
                for (std::size_t t = std::max(s, from + k); t < e; ++t) acc += a[t] * std::conj(b[t - k]);
                row[k] = acc;
            }
            continue;
        }
        const std::size_t lo = s >= from + K ? s - K : from;
        const std::size_t Ly = e - s, Lx = e - lo, off = s - lo;
        const std::size_t P = fft::next_fast_size(Lx + Ly);
        fft::cvec U(P), V(P);
        std::copy(a.begin() + static_cast<std::ptrdiff_t>(s), a.begin() + static_cast<std::ptrdiff_t>(e), U.begin());
        std::copy(b.begin() + static_cast<std::ptrdiff_t>(lo), b.begin() + static_cast<std::ptrdiff_t>(e), V.begin());
        fft::forward(U);
        fft::forward(V);
        for (std::size_t i = 0; i < P; ++i) U[i] = std::conj(U[i]) * V[i];
        fft::backward(U);
        const double inv = 1.0 / static_cast<double>(P);
        for (std::size_t k = 0; k <= K; ++k) {
            const std::size_t m = k <= off ? off - k : P - (k - off);
            row[k] = std::conj(U[m]) * inv;
        }
    }
    return out;
}

inline std::size_t resolve_block(const SampledEnvelope &env, std::size_t K, const CorrelationOptions &opt) {
    double T = opt.block_length;
    if (T <= 0.0) T = env.correlation_time > 0.0 ? 10.0 * env.correlation_time : 0.0;
    auto blk = static_cast<std::size_t>(std::ceil(T / env.grid.dt));
    return std::max<std::size_t>({blk, 2 * K, 16});
}

// Normalized lag estimate plus block-bootstrap standard errors.
inline GammaCurve finish(const BlockSums &bs, std::size_t K, double dt, bool cross, const CorrelationOptions &opt) {
    const std::size_t B = bs.blocks;
    auto estimate = [&](const std::vector<std::size_t> &pick, std::vector<cplx> &g) {
        std::vector<cplx> S(K + 1);
        std::vector<double> C(K + 1, 0.0);
        double pa = 0.0, pb = 0.0, cnt = 0.0;
        for (auto bi : pick) {
            for (std::size_t k = 0; k <= K; ++k) {
                S[k] += bs.sums[bi * (K + 1) + k];
                C[k] += bs.counts[bi * (K + 1) + k];
            }
            pa += bs.power_a[bi];
            pb += bs.power_b[bi];
            cnt += bs.counts[bi * (K + 1)];
        }
        const double norm = cross ? std::sqrt((pa / cnt) * (pb / cnt)) : (S[0] / C[0]).real();
        g.resize(K + 1);
        for (std::size_t k = 0; k <= K; ++k) g[k] = C[k] > 0 ? (S[k] / C[k]) / norm : cplx{};
        if (!cross) g[0] = 1.0;
    };

    std::vector<std::size_t> all(B);
    for (std::size_t i = 0; i < B; ++i) all[i] = i;
    GammaCurve out;
    estimate(all, out.gamma);
    out.lags.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k) out.lags[k] = static_cast<double>(k) * dt;

    std::vector<double> m1r(K + 1, 0.0), m1i(K + 1, 0.0), m2(K + 1, 0.0);
    auto engine = make_engine(opt.seed);
    std::uniform_int_distribution<std::size_t> draw(0, B - 1);
    std::vector<std::size_t> pick(B);
    std::vector<cplx> g;
    const std::size_t R = std::max<std::size_t>(opt.replicates, 2);
    for (std::size_t r = 0; r < R; ++r) {
        for (auto &p : pick) p = draw(engine);
        estimate(pick, g);
        for (std::size_t k = 0; k <= K; ++k) {
            m1r[k] += g[k].real();
            m1i[k] += g[k].imag();
            m2[k] += std::norm(g[k]);
        }
    }
    out.std_error.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
        const double n = static_cast<double>(R);
        const double mean2 = (m1r[k] * m1r[k] + m1i[k] * m1i[k]) / (n * n);
        const double var = std::max(m2[k] / n - mean2, 0.0) * n / (n - 1.0);
        out.std_error[k] = std::sqrt(var);
    }
    if (!cross) out.std_error[0] = 0.0;
    return out;
}

} // namespace detail

/// gamma(tau) = <E(t) E*(t - tau)> / <|E|^2> over the valid region, tau in [0, max_lag].
inline GammaCurve estimate_autocorrelation(const SampledEnvelope &env, double max_lag,
                                           const CorrelationOptions &opt = {}) {
    const double valid = static_cast<double>(env.valid_count()) * env.grid.dt;
    require(max_lag >= 0.0 && max_lag < valid / 4.0, "max_lag", "must be below a quarter of the valid duration");
    const auto K = static_cast<std::size_t>(std::floor(max_lag / env.grid.dt + 1e-9));
    const std::size_t blk = detail::resolve_block(env, K, opt);
    auto bs = detail::lagged_block_sums(env.samples, env.samples, env.valid_from, env.valid_to, K, blk);
    return detail::finish(bs, K, env.grid.dt, false, opt);
}

/// gamma_12(tau) = <E1(t) E2*(t - tau)> / sqrt(<|E1|^2><|E2|^2>) on the common valid region.
inline GammaCurve estimate_cross_correlation(const SampledEnvelope &e1, const SampledEnvelope &e2, double max_lag,
                                             const CorrelationOptions &opt = {}) {
    require(e1.grid.compatible(e2.grid), "e2", "grids differ");
    SampledEnvelope common = e1;
    common.valid_from = std::max(e1.valid_from, e2.valid_from);
    common.valid_to = std::min(e1.valid_to, e2.valid_to);
    common.correlation_time = std::max(e1.correlation_time, e2.correlation_time);
    const double valid = static_cast<double>(common.valid_count()) * e1.grid.dt;
    require(max_lag >= 0.0 && max_lag < valid / 4.0, "max_lag", "must be below a quarter of the valid duration");
    const auto K = static_cast<std::size_t>(std::floor(max_lag / e1.grid.dt + 1e-9));
    const std::size_t blk = detail::resolve_block(common, K, opt);
    auto bs = detail::lagged_block_sums(e1.samples, e2.samples, common.valid_from, common.valid_to, K, blk);
    return detail::finish(bs, K, e1.grid.dt, true, opt);
}

} // namespace ampint
