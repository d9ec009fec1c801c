#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "ampint/homodyne/trace.hpp"

namespace ampint {

/**
 * @brief Trailing sliding mean over a window of T (rounded to whole samples).
 *
 * Same as convolving with the box kernel k = 1/T. The running sum is
 * compensated (Neumaier) so long traces do not drift.
 */
inline PhotocurrentTrace box_average(const PhotocurrentTrace &in, double T) {
    require(T >= in.grid.dt * (1.0 - 1e-9), "box_average", "window must be at least one sample");
    const auto L = static_cast<std::size_t>(std::llround(T / in.grid.dt));
    require(L < in.valid_count(), "box_average", "window exceeds the valid trace");
    PhotocurrentTrace out = in;
    out.provenance.chain.push_back("box_average(" + std::to_string(L * in.grid.dt * 1e9) + "ns)");
    out.provenance.correlation_time = std::max(in.provenance.correlation_time, static_cast<double>(L) * in.grid.dt);
    if (L == 1) return out;

    const double inv = 1.0 / static_cast<double>(L);
    double sum = 0.0, comp = 0.0;
    auto add = [&](double x) {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    };
    const auto &x = in.samples;
    for (std::size_t n = 0; n < x.size(); ++n) {
        add(x[n]);
        if (n >= L) add(-x[n - L]);
        out.samples[n] = (sum + comp) * inv;
    }
    out.valid_from = in.valid_from + L - 1;
    return out;
}

/// i_+(t) = i(t) + i(t + delta_T_e); the last delta_T_e of the trace becomes invalid.
inline PhotocurrentTrace delay_add(const PhotocurrentTrace &in, double delta_T_e) {
    const auto snap = snap_delay(delta_T_e, in.grid.dt, "delay_add");
    const std::size_t D = snap.samples;
    require(2 * D < in.valid_count(), "delay_add", "delay must be below half the valid duration");
    PhotocurrentTrace out = in;
    for (std::size_t n = 0; n + D < in.samples.size(); ++n) out.samples[n] = in.samples[n] + in.samples[n + D];
    out.valid_to = in.valid_to - D;
    out.provenance.chain.push_back("delay_add(" + std::to_string(snap.snapped * 1e9) + "ns)");
    out.provenance.correlation_time = in.provenance.correlation_time + snap.snapped;
    return out;
}

} // namespace ampint
