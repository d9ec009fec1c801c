#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ampint/core/rng.hpp"
#include "ampint/fields/types.hpp"

namespace ampint {

/// Pulse positions of a train on a grid.
struct PulseLayout {
    std::size_t first = 0;  ///< sample index of the centre of pulse 0
    std::size_t period = 0; ///< Tp in samples
    std::size_t count = 0;
};

inline PulseLayout layout_pulses(const PulseTrainSpec &spec, const SampleGrid &grid, const PulseTemplate &tpl) {
    grid.validate();
    require(spec.Tp > 0.0, "pulses.Tp", "must be positive");
    const double ratio = spec.Tp / grid.dt;
    require(std::abs(ratio - std::round(ratio)) <= 1e-6 * ratio, "pulses.Tp", "must be a whole number of samples");
    require(spec.shape.width < spec.Tp / 2.0, "pulses.width", "pulse overlap: width must be below Tp/2");
    require(spec.shape.support() < spec.Tp, "pulses.width", "pulse overlap: profile support exceeds Tp");

    PulseLayout lay;
    lay.period = static_cast<std::size_t>(std::llround(ratio));
    const double f0 = std::round(spec.first_pulse / grid.dt);
    require(f0 >= static_cast<double>(tpl.center), "pulses.first", "first pulse starts before the grid");
    lay.first = static_cast<std::size_t>(f0);
    const std::size_t tail = tpl.f.size() - tpl.center;
    require(lay.first + tail <= grid.n, "pulses.first", "first pulse does not fit on the grid");
    const std::size_t fit = (grid.n - tail - lay.first) / lay.period + 1;
    lay.count = spec.n_pulses == 0 ? fit : spec.n_pulses;
    require(lay.count <= fit, "pulses.count", "n_pulses * Tp exceeds the grid duration");
    return lay;
}

/// Adds amplitude[j] * f(t - t_j) for every pulse of the layout.
inline void place_pulses(std::vector<cplx> &out, const PulseTemplate &tpl, const PulseLayout &lay,
                         const std::vector<cplx> &amplitude) {
    for (std::size_t j = 0; j < lay.count; ++j) {
        const std::size_t start = lay.first + j * lay.period - tpl.center;
        const cplx a = amplitude[j];
        for (std::size_t i = 0; i < tpl.f.size(); ++i) out[start + i] += a * tpl.f[i];
    }
}

/**
 * @brief Complex Gaussian amplitudes with <A_j A*_{j+q}> = I_q.
 *
 * Banded Cholesky factor of the n x n Hermitian Toeplitz matrix, O(n M^2).
 * Zero pivots (rank-deficient but admissible correlations) are allowed.
 */
inline std::vector<cplx> correlated_amplitudes(const PulseCorrelation &corr, std::size_t n, Engine &engine) {
    ComplexNormal normal(1.0);
    std::vector<cplx> z(n);
    for (auto &v : z) v = normal(engine);
    if (corr.is_independent()) {
        const double s = std::sqrt(corr.I0());
        for (auto &v : z) v *= s;
        return z;
    }

    const std::size_t M = corr.M(), W = M + 1;
    const double I0 = corr.I0();
    // L(j, l) lives at band[j * W + (j - l)] for j - M <= l <= j.
    std::vector<cplx> band(n * W);
    auto L = [&](std::size_t j, std::size_t l) -> cplx & { return band[j * W + (j - l)]; };

    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t lo = j >= M ? j - M : 0;
        double diag = I0;
        for (std::size_t l = lo; l < j; ++l) {
            cplx s = corr.at(static_cast<long>(l) - static_cast<long>(j));
            const std::size_t plo = std::max(lo, l >= M ? l - M : 0);
            for (std::size_t p = plo; p < l; ++p) s -= L(j, p) * std::conj(L(l, p));
            const double pivot = L(l, l).real();
            L(j, l) = pivot > 1e-13 * std::sqrt(I0) ? s / pivot : cplx{};
            diag -= std::norm(L(j, l));
        }
        if (diag < -1e-9 * I0) throw ValidationError("pulses.correlation", "correlation matrix is not positive semidefinite");
        L(j, j) = std::sqrt(std::max(diag, 0.0));
    }

    std::vector<cplx> a(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t lo = j >= M ? j - M : 0;
        cplx acc{};
        for (std::size_t p = lo; p <= j; ++p) acc += L(j, p) * z[p];
        a[j] = acc;
    }
    return a;
}

/// E(t) = sum_j A_j f(t - t_j).
inline SampledEnvelope make_pulse_train(const PulseTrainSpec &spec, const SampleGrid &grid, std::uint64_t seed,
                                        std::vector<cplx> *amplitudes_out = nullptr) {
    const auto tpl = make_pulse_template(spec.shape, grid.dt);
    const auto lay = layout_pulses(spec, grid, tpl);
    auto engine = make_engine(seed);
    auto amps = correlated_amplitudes(spec.correlation, lay.count, engine);
    auto env = SampledEnvelope::zeros(grid);
    place_pulses(env.samples, tpl, lay, amps);
    env.correlation_time = static_cast<double>(spec.correlation.M() + 1) * spec.Tp;
    if (amplitudes_out) *amplitudes_out = std::move(amps);
    return env;
}

} // namespace ampint
