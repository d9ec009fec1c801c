#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <vector>

#include "ampint/core/fft.hpp"
#include "ampint/core/rng.hpp"
#include "ampint/fields/types.hpp"

namespace ampint {

namespace detail {

struct FilterKey {
    CoherenceKind kind;
    double Tc, I0, dt;
    std::size_t N;
    bool operator==(const FilterKey &) const = default;
};

// sqrt(S_k / N) for the circulant embedding of I0 gamma(m dt). Recomputing this costs
// one FFT per trial, so the most recent filter is kept per thread.
inline const std::vector<double> &thermal_filter(const CoherenceModel &model, double dt, std::size_t N) {
    thread_local FilterKey key{};
    thread_local std::vector<double> filter;
    const FilterKey want{model.kind, model.Tc, model.I0, dt, N};
    if (!filter.empty() && key == want) return filter;
    fft::cvec c(N);
    for (std::size_t m = 0; m < N; ++m) {
        const double lag = dt * static_cast<double>(std::min(m, N - m));
        c[m] = model.I0 * model.gamma(lag);
    }
    fft::forward(c);
    filter.resize(N);
    const double invN = 1.0 / static_cast<double>(N);
    for (std::size_t k = 0; k < N; ++k) filter[k] = std::sqrt(std::max(c[k].real(), 0.0) * invN);
    key = want;
    return filter;
}

} // namespace detail

/**
 * @brief Circular complex Gaussian envelope with <E(t)E*(t-tau)> = I0 gamma(tau).
 *
 * White noise is shaped in the frequency domain by the square root of the
 * circulant spectrum of I0 gamma; a 10 Tc margin at each end of the circular
 * buffer is thrown away so the wrap-around correlation never reaches the output.
 */
inline SampledEnvelope make_thermal_envelope(const CoherenceModel &model, const SampleGrid &grid, std::uint64_t seed) {
    grid.validate();
    model.validate();
    require(model.kind != CoherenceKind::phase_diffusion, "field.kind",
            "phase_diffusion fields are made by make_phase_diffusion_envelope");
    require(grid.dt <= model.Tc / 20.0 * (1.0 + 1e-12), "grid.dt", "grid too coarse: dt must not exceed Tc/20");

    const auto margin = static_cast<std::size_t>(std::ceil(10.0 * model.Tc / grid.dt));
    const std::size_t N = fft::next_fast_size(grid.n + 2 * margin);
    const auto &filter = detail::thermal_filter(model, grid.dt, N);

    auto engine = make_engine(seed);
    ComplexNormal normal(1.0);
    fft::cvec x(N);
    for (std::size_t k = 0; k < N; ++k) x[k] = filter[k] * normal(engine);
    fft::backward(x);

    auto env = SampledEnvelope::zeros(grid);
    std::copy_n(x.begin() + static_cast<std::ptrdiff_t>(margin), grid.n, env.samples.begin());
    env.correlation_time = model.Tc;
    return env;
}

} // namespace ampint
