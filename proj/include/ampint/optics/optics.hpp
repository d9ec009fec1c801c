#pragma once

// Linear-optics transforms on sampled envelopes. Delays are whole samples; every
// transform narrows the valid region instead of inventing data at the edges.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ampint/fields/types.hpp"

namespace ampint {

struct PolarizedPair {
    SampledEnvelope ex;
    SampledEnvelope ey;

    std::size_t valid_from() const { return std::max(ex.valid_from, ey.valid_from); }
    std::size_t valid_to() const { return std::min(ex.valid_to, ey.valid_to); }
};

/// Unbalanced Mach-Zehnder settings. `theta` is the total scanned phase of the delayed arm.
struct MzConfig {
    double delta_T = 0.0;
    double theta = 0.0;
};

namespace detail {

inline DelaySnap checked_delay(const SampledEnvelope &env, double delta_T, const char *field) {
    auto snap = snap_delay(delta_T, env.grid.dt, field);
    require(static_cast<double>(snap.samples) < static_cast<double>(env.grid.n) / 2.0, field,
            "delay exceeds trace: must be below half the grid duration");
    return snap;
}

inline void add_carrier(SampledEnvelope &env, double delay) {
    env.carrier_phase = std::fmod(env.carrier_phase + env.omega0 * delay, 2.0 * std::numbers::pi);
}

} // namespace detail

/// ex = E/sqrt2, ey = exp(i theta) E/sqrt2. Vacuum noise enters only at detection.
inline PolarizedPair polarization_split(const SampledEnvelope &env, double theta) {
    require(env.pol == Polarization::scalar, "env.pol", "polarization_split needs a scalar envelope");
    PolarizedPair pair{env, env};
    pair.ex.pol = Polarization::x;
    pair.ey.pol = Polarization::y;
    const double s = 1.0 / std::numbers::sqrt2;
    const cplx rot = std::polar(s, theta);
    for (std::size_t i = 0; i < env.samples.size(); ++i) {
        pair.ex.samples[i] = env.samples[i] * s;
        pair.ey.samples[i] = env.samples[i] * rot;
    }
    return pair;
}

/// E(t - delta_T). Samples shifted in from before the grid are zero and invalid.
inline SampledEnvelope delay_envelope(const SampledEnvelope &env, double delta_T, DelaySnap *snap_out = nullptr) {
    const auto snap = detail::checked_delay(env, delta_T, "delta_T");
    const std::size_t D = snap.samples;
    SampledEnvelope out = env;
    std::fill(out.samples.begin(), out.samples.end(), cplx{});
    std::copy(env.samples.begin(), env.samples.end() - static_cast<std::ptrdiff_t>(D),
              out.samples.begin() + static_cast<std::ptrdiff_t>(D));
    out.valid_from = std::min(env.valid_from + D, env.grid.n);
    out.valid_to = std::min(env.valid_to + D, env.grid.n);
    detail::add_carrier(out, snap.snapped);
    if (snap_out) *snap_out = snap;
    return out;
}

/// E_out(t) = [E(t) + exp(i theta) E(t - delta_T)] / 2; the leading delta_T is invalid.
inline SampledEnvelope unbalanced_mz(const SampledEnvelope &env, const MzConfig &cfg, DelaySnap *snap_out = nullptr) {
    const auto snap = detail::checked_delay(env, cfg.delta_T, "interferometer.delta_T");
    const std::size_t D = snap.samples;
    const cplx rot = std::polar(1.0, cfg.theta);
    SampledEnvelope out = env;
    for (std::size_t i = 0; i < env.samples.size(); ++i) {
        const cplx delayed = i >= D ? env.samples[i - D] : cplx{};
        out.samples[i] = 0.5 * (env.samples[i] + rot * delayed);
    }
    out.valid_from = std::min(env.valid_from + D, env.grid.n);
    out.valid_to = env.valid_to;
    detail::add_carrier(out, snap.snapped);
    if (snap_out) *snap_out = snap;
    return out;
}

/// ex = E(t)/sqrt2 (x), ey = E(t - delta_T)/sqrt2 (y): the two arms kept apart in time and polarization.
inline PolarizedPair delay_and_rotate(const SampledEnvelope &env, double delta_T, DelaySnap *snap_out = nullptr) {
    require(env.pol == Polarization::scalar, "env.pol", "delay_and_rotate needs a scalar envelope");
    const double s = 1.0 / std::numbers::sqrt2;
    PolarizedPair pair{env, delay_envelope(env, delta_T, snap_out)};
    for (auto &v : pair.ex.samples) v *= s;
    for (auto &v : pair.ey.samples) v *= s;
    pair.ex.pol = Polarization::x;
    pair.ey.pol = Polarization::y;
    return pair;
}

/// Multiplies the envelope by exp(i alpha).
inline SampledEnvelope apply_phase(const SampledEnvelope &env, double alpha) {
    SampledEnvelope out = env;
    const cplx rot = std::polar(1.0, alpha);
    for (auto &v : out.samples) v *= rot;
    return out;
}

} // namespace ampint
