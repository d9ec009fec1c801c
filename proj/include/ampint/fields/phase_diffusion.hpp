#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "ampint/core/rng.hpp"
#include "ampint/fields/types.hpp"

namespace ampint {

/// Constant-modulus envelope sqrt(I0) exp(i phi(t)) with Wiener phase; per-step
/// increments have variance 2 dt/Tc so that gamma(tau) = exp(-|tau|/Tc).
inline SampledEnvelope make_phase_diffusion_envelope(const CoherenceModel &model, const SampleGrid &grid,
                                                     std::uint64_t seed) {
    grid.validate();
    model.validate();
    require(model.kind == CoherenceKind::phase_diffusion, "field.kind", "expected phase_diffusion");
    require(grid.dt <= model.Tc / 20.0 * (1.0 + 1e-12), "grid.dt", "grid too coarse: dt must not exceed Tc/20");

    auto engine = make_engine(seed);
    std::uniform_real_distribution<double> start(0.0, 2.0 * std::numbers::pi);
    std::normal_distribution<double> step(0.0, std::sqrt(2.0 * grid.dt / model.Tc));

    auto env = SampledEnvelope::zeros(grid);
    const double amp = std::sqrt(model.I0);
    double phi = start(engine);
    for (std::size_t i = 0; i < grid.n; ++i) {
        env.samples[i] = std::polar(amp, phi);
        phi += step(engine);
    }
    env.correlation_time = model.Tc;
    return env;
}

} // namespace ampint
