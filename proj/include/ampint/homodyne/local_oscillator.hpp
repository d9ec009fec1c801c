#pragma once

#include <cmath>
#include <vector>

#include "ampint/fields/pulse_train.hpp"
#include "ampint/fields/types.hpp"

namespace ampint {

/// Temporal mode of a local oscillator: constant, or a set of normalized pulses.
struct LoProfile {
    enum class Kind { cw, pulsed };
    Kind kind = Kind::cw;
    PulseTemplate tpl;
    std::vector<std::size_t> centers; ///< sample index of every pulse centre

    static LoProfile cw() { return {}; }

    /// Pulses matching a train, optionally shifted later by `delay` (snapped to the grid).
    static LoProfile pulse_train(const PulseTrainSpec &spec, const SampleGrid &grid, double delay = 0.0) {
        LoProfile p;
        p.kind = Kind::pulsed;
        p.tpl = make_pulse_template(spec.shape, grid.dt);
        const auto lay = layout_pulses(spec, grid, p.tpl);
        const auto shift = snap_delay(delay, grid.dt, "lo.delay").samples;
        for (std::size_t j = 0; j < lay.count; ++j) {
            const std::size_t c = lay.first + j * lay.period + shift;
            if (c + p.tpl.f.size() - p.tpl.center <= grid.n) p.centers.push_back(c);
        }
        require(!p.centers.empty(), "lo.profile", "no LO pulse fits on the grid");
        return p;
    }

    /// Explicit pulses (single or double pulse LOs) centred at the given times.
    static LoProfile pulses(const PulseShape &shape, const std::vector<double> &times, const SampleGrid &grid) {
        LoProfile p;
        p.kind = Kind::pulsed;
        p.tpl = make_pulse_template(shape, grid.dt);
        for (double t : times) {
            const auto c = static_cast<std::size_t>(std::llround((t - grid.t0) / grid.dt));
            require(c >= p.tpl.center && c + p.tpl.f.size() - p.tpl.center <= grid.n, "lo.profile",
                    "LO pulse does not fit on the grid");
            p.centers.push_back(c);
        }
        return p;
    }

    /// p[n] on the grid (all ones for cw).
    std::vector<double> sample(const SampleGrid &grid) const {
        if (kind == Kind::cw) return std::vector<double>(grid.n, 1.0);
        std::vector<double> out(grid.n, 0.0);
        for (auto c : centers) {
            const std::size_t start = c - tpl.center;
            for (std::size_t i = 0; i < tpl.f.size(); ++i) out[start + i] += tpl.f[i];
        }
        return out;
    }
};

struct LocalOscillator {
    double amplitude = 1.0;
    double phase = 0.0;
    Polarization pol = Polarization::scalar;
    LoProfile profile;

    void validate(const char *field = "lo") const {
        require(amplitude >= 0.0 && std::isfinite(amplitude), field, "amplitude must be nonnegative");
        require(std::isfinite(phase), field, "phase must be finite");
    }
};

} // namespace ampint
