#pragma once

// Homodyne and direct detection. Every channel contributes a real drive
// d[n] = |E_LO| p[n] (X_phi[n] + X_v[n]) and the current is i = dt * (k * sum d).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ampint/core/fft.hpp"
#include "ampint/core/rng.hpp"
#include "ampint/homodyne/kernel.hpp"
#include "ampint/homodyne/local_oscillator.hpp"
#include "ampint/homodyne/noise.hpp"
#include "ampint/homodyne/trace.hpp"
#include "ampint/optics/optics.hpp"

namespace ampint {

/// One signal/LO pairing of a multi-LO detector.
struct DetectionChannel {
    const SampledEnvelope *env;
    const LocalOscillator *lo;
};

namespace detail {

inline void add_channel_drive(std::vector<double> &drive, const SampledEnvelope &env, const LocalOscillator &lo,
                              const NoiseModel &noise, Engine *engine) {
    const double c = std::cos(lo.phase), s = std::sin(lo.phase);
    const double a = lo.amplitude;
    std::vector<double> vac;
    if (noise.mode == NoiseModel::Mode::vacuum) vac = vacuum_record(env.grid.n, env.grid.dt, noise.bandwidth, *engine);
    const bool pulsed = lo.profile.kind == LoProfile::Kind::pulsed;
    const std::vector<double> p = pulsed ? lo.profile.sample(env.grid) : std::vector<double>{};
    for (std::size_t n = 0; n < drive.size(); ++n) {
        double x = 2.0 * (env.samples[n].real() * c + env.samples[n].imag() * s);
        if (!vac.empty()) x += vac[n];
        if (pulsed) x *= p[n];
        drive[n] += a * x;
    }
}

inline PhotocurrentTrace finish_current(const std::vector<double> &drive, const ResponseKernel &kernel,
                                        const SampleGrid &grid, std::size_t valid_from, std::size_t valid_to,
                                        Provenance prov) {
    require(std::abs(kernel.dt() - grid.dt) <= 1e-12 * grid.dt, "kernel", "kernel and envelope grids differ");
    const std::size_t avail = valid_to > valid_from ? valid_to - valid_from : 0;
    require(kernel.size() < avail, "kernel", "kernel wider than the valid trace");
    PhotocurrentTrace tr;
    tr.samples = fft::causal_convolve(drive, kernel.samples());
    for (auto &v : tr.samples) v *= grid.dt;
    tr.grid = grid;
    tr.valid_from = valid_from + kernel.size() - 1;
    tr.valid_to = valid_to;
    prov.correlation_time = std::max(prov.correlation_time, kernel.width());
    tr.provenance = std::move(prov);
    return tr;
}

inline void check_profile_match(const SampledEnvelope &env, const LocalOscillator &lo, const char *field) {
    if (lo.profile.kind != LoProfile::Kind::pulsed) return;
    const auto p = lo.profile.sample(env.grid);
    double inside = 0.0, total = 0.0;
    for (std::size_t n = env.valid_from; n < env.valid_to; ++n) {
        const double w = std::norm(env.samples[n]);
        total += w;
        if (p[n] > 0.0) inside += w;
    }
    if (total > 0.0 && inside < 0.99 * total)
        throw ValidationError(field, "profile mismatch: LO pulses miss " +
                                         std::to_string(100.0 * (1.0 - inside / total)) + "% of the signal energy");
}

} // namespace detail

/**
 * @brief Multi-LO balanced homodyne current, i = sum_c |E_c| k * (p_c X_c) plus vacuum noise.
 *
 * Channels are summed before the kernel is applied; the detector is linear so
 * this equals the sum of per-channel currents.
 */
inline PhotocurrentTrace multi_lo_current(std::span<const DetectionChannel> channels, const ResponseKernel &kernel,
                                          const NoiseModel &noise, std::uint64_t seed) {
    require(!channels.empty(), "channels", "need at least one LO");
    const SampleGrid grid = channels[0].env->grid;
    noise.validate(grid);
    std::vector<double> drive(grid.n, 0.0);
    std::size_t from = 0, to = grid.n;
    double corr = 0.0;
    Provenance prov;
    for (std::size_t c = 0; c < channels.size(); ++c) {
        const auto &env = *channels[c].env;
        const auto &lo = *channels[c].lo;
        lo.validate();
        require(env.grid.compatible(grid), "env", "channel grids differ");
        require(lo.pol == env.pol, "lo.pol",
                std::string("polarization mismatch: LO is ") + to_string(lo.pol) + ", signal is " + to_string(env.pol));
        auto engine = make_engine(derive_seed(seed, {0xD7EC7u, c}));
        detail::add_channel_drive(drive, env, lo, noise, &engine);
        from = std::max(from, env.valid_from);
        to = std::min(to, env.valid_to);
        corr = std::max(corr, env.correlation_time);
    }
    prov.chain.push_back("homodyne(" + std::to_string(channels.size()) + " LO, kernel=" + kernel.describe() + ")");
    prov.correlation_time = corr;
    return detail::finish_current(drive, kernel, grid, from, to, std::move(prov));
}

inline PhotocurrentTrace homodyne_current(const SampledEnvelope &env, const LocalOscillator &lo,
                                          const ResponseKernel &kernel, const NoiseModel &noise, std::uint64_t seed) {
    const DetectionChannel ch{&env, &lo};
    return multi_lo_current(std::span<const DetectionChannel>(&ch, 1), kernel, noise, seed);
}

/// i = |E1| k*X1(phi1) + |E2| k*X2(phi2) + noise; x and y never mix.
inline PhotocurrentTrace dual_lo_current(const PolarizedPair &pair, const LocalOscillator &lo_x,
                                         const LocalOscillator &lo_y, const ResponseKernel &kernel,
                                         const NoiseModel &noise, std::uint64_t seed) {
    require(lo_x.pol == Polarization::x, "lo_x.pol", "must be x");
    require(lo_y.pol == Polarization::y, "lo_y.pol", "must be y");
    detail::check_profile_match(pair.ex, lo_x, "lo_x.profile");
    detail::check_profile_match(pair.ey, lo_y, "lo_y.profile");
    const DetectionChannel ch[2] = {{&pair.ex, &lo_x}, {&pair.ey, &lo_y}};
    return multi_lo_current(ch, kernel, noise, seed);
}

/// i = k * |E|^2 summed over the given polarization components.
inline PhotocurrentTrace direct_intensity_current(std::span<const SampledEnvelope *const> parts,
                                                  const ResponseKernel &kernel) {
    require(!parts.empty(), "env", "nothing to detect");
    const SampleGrid grid = parts[0]->grid;
    std::vector<double> drive(grid.n, 0.0);
    std::size_t from = 0, to = grid.n;
    Provenance prov;
    for (const auto *e : parts) {
        require(e->grid.compatible(grid), "env", "grids differ");
        for (std::size_t n = 0; n < grid.n; ++n) drive[n] += std::norm(e->samples[n]);
        from = std::max(from, e->valid_from);
        to = std::min(to, e->valid_to);
        prov.correlation_time = std::max(prov.correlation_time, e->correlation_time);
    }
    prov.chain.push_back("direct_intensity(kernel=" + kernel.describe() + ")");
    return detail::finish_current(drive, kernel, grid, from, to, std::move(prov));
}

inline PhotocurrentTrace direct_intensity_current(const SampledEnvelope &env, const ResponseKernel &kernel) {
    const SampledEnvelope *p[1] = {&env};
    return direct_intensity_current(p, kernel);
}

inline PhotocurrentTrace direct_intensity_current(const PolarizedPair &pair, const ResponseKernel &kernel) {
    const SampledEnvelope *p[2] = {&pair.ex, &pair.ey};
    return direct_intensity_current(p, kernel);
}

} // namespace ampint
