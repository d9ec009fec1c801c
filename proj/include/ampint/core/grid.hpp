#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "ampint/core/error.hpp"

namespace ampint {

/// Uniform time grid. All times are in seconds.
struct SampleGrid {
    double dt = 0.0;
    std::size_t n = 0;
    double t0 = 0.0;

    double duration() const { return dt * static_cast<double>(n); }
    double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }

    void validate() const {
        require(dt > 0.0 && std::isfinite(dt), "grid.dt", "must be positive");
        require(n >= 2, "grid.samples", "need at least 2 samples");
    }

    bool compatible(const SampleGrid &other) const {
        return n == other.n && dt == other.dt && t0 == other.t0;
    }
};

/// Result of snapping a continuous delay onto the grid.
struct DelaySnap {
    double requested = 0.0;
    double snapped = 0.0;
    std::size_t samples = 0;
};

inline DelaySnap snap_delay(double seconds, double dt, const std::string &field = "delay") {
    require(seconds >= 0.0 && std::isfinite(seconds), field, "must be a nonnegative finite time");
    const double k = std::round(seconds / dt);
    return {seconds, k * dt, static_cast<std::size_t>(k)};
}

} // namespace ampint
