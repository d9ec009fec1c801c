#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "ampint/core/grid.hpp"
#include "ampint/core/rng.hpp"

namespace ampint {

/**
 * @brief Vacuum (shot) noise entering through the detection beam splitter.
 *
 * Each vacuum quadrature record is discrete white noise with per-sample
 * variance bandwidth/dt, so after i = dt * (k * x) its variance is Q2 * bandwidth.
 */
struct NoiseModel {
    enum class Mode { off, vacuum };
    Mode mode = Mode::off;
    double bandwidth = 0.0; ///< Delta B [Hz]

    static NoiseModel off() { return {}; }
    static NoiseModel vacuum(double bandwidth) { return {Mode::vacuum, bandwidth}; }

    void validate(const SampleGrid &grid) const {
        if (mode == Mode::off) return;
        require(bandwidth > 0.0, "noise.bandwidth", "must be positive");
        require(bandwidth <= 1.0 / (2.0 * grid.dt) * (1.0 + 1e-12), "noise.bandwidth",
                "exceeds the Nyquist bandwidth 1/(2 dt)");
    }
};

inline std::vector<double> vacuum_record(std::size_t n, double dt, double bandwidth, Engine &engine) {
    std::normal_distribution<double> g(0.0, std::sqrt(bandwidth / dt));
    std::vector<double> v(n);
    for (auto &x : v) x = g(engine);
    return v;
}

} // namespace ampint
