#pragma once

// Oracle prediction matching a scenario configuration.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ampint/homodyne/kernel.hpp"
#include "ampint/oracles/qcw.hpp"
#include "ampint/oracles/spectral.hpp"
#include "ampint/oracles/visibility.hpp"
#include "ampint/scenario/config.hpp"

namespace ampint::scenario {

struct OracleValue {
    bool available = false;
    double V = 0.0;
    std::string name;
    std::optional<double> V_exact; ///< exact second-moment fringe of the sampled chain, when computed
    std::vector<std::string> notes;
};

namespace detail {

inline PulseTemplate lo_template(const ScenarioConfig &c) { return make_pulse_template(c.pulses->shape, c.grid.dt); }

/// Detector kernel convolved with the squared LO pulse (pulsed homodyne) and every box_average stage.
inline ResponseKernel effective_kernel(const ScenarioConfig &c) {
    ResponseKernel k = c.kernel.build(c.grid.dt);
    const bool pulsed_lo = (c.kind == Kind::pulsed_dual_lo || c.kind == Kind::quasi_cw) && !c.direct_intensity;
    if (pulsed_lo) k = convolve(k, ResponseKernel::pulse_intensity(lo_template(c)));
    for (const auto &s : c.processing)
        if (s.kind == Stage::Kind::box_average) k = convolve(k, ResponseKernel::box(s.value, c.grid.dt));
    return k;
}

inline std::vector<long> delay_adds(const ScenarioConfig &c) {
    std::vector<long> out;
    for (const auto &s : c.processing)
        if (s.kind == Stage::Kind::delay_add) out.push_back(static_cast<long>(snap_delay(s.value, c.grid.dt).samples));
    return out;
}

// Each delay-add stage duplicates every term at a later time.
inline std::vector<oracles::FringeTerm> with_delay_adds(std::vector<oracles::FringeTerm> t, const std::vector<long> &E) {
    for (long e : E) {
        const auto n = t.size();
        for (std::size_t i = 0; i < n; ++i) t.push_back({t[i].shift + e, t[i].shifted_arm, t[i].weight});
    }
    return t;
}

inline long samples_of(double t, double dt) { return static_cast<long>(snap_delay(t, dt).samples); }

inline OracleValue closed_form(const ScenarioConfig &c) {
    using namespace oracles;
    OracleValue o;
    const double dt = c.grid.dt;
    switch (c.kind) {
    case Kind::orthogonal_pol_cw: {
        o.available = true;
        o.name = "visibility_pol";
        const double I = 0.5 * c.field.I0;
        if (c.single_arm || c.lo_x.amplitude == 0.0 || c.lo_y.amplitude == 0.0) {
            o.V = 0.0;
        } else {
            const double lambda = (c.lo_y.amplitude / c.lo_x.amplitude) * (c.lo_y.amplitude / c.lo_x.amplitude);
            o.V = visibility_pol(lambda, cplx{c.coherence, 0.0}, I, I).V;
        }
        return o;
    }
    case Kind::unbalanced_cw: {
        const auto model = c.field.coherence();
        const long D = detail::samples_of(c.delta_T, dt);
        if (c.direct_intensity) {
            o.available = true;
            o.name = "intensity_fringe";
            o.V = std::abs(model.gamma(static_cast<double>(D) * dt));
            o.V_exact = o.V;
            return o;
        }
        const auto k = detail::effective_kernel(c);
        const auto E = detail::delay_adds(c);
        o.V_exact = exact_fringe(k, source_from_model(model, dt), detail::with_delay_adds(mz_terms(D), E)).V();
        o.available = true;
        if (E.empty()) {
            o.name = "kernel_overlap";
            o.V = visibility_kernel_overlap(k, c.delta_T);
        } else if (E.size() > 1) {
            o.name = "exact_fringe";
            o.V = *o.V_exact;
            o.notes.push_back("several delay_add stages: no closed form, using the exact fringe");
        } else {
            const double delta = static_cast<double>(E[0] - D) * dt;
            if (k.width() <= model.Tc / 10.0) {
                o.name = "delay_add_fast";
                o.V = visibility_delay_add_fast(model, delta);
            } else {
                o.name = "visibility_spectral";
                const auto sv = visibility_spectral(spectral_pair_from_samples(k, model, delta), delta);
                o.V = 0.5 * sv.V_prime;
                o.notes = sv.diagnostics;
            }
        }
        return o;
    }
    case Kind::pulsed_dual_lo: {
        const auto k = detail::effective_kernel(c);
        const long P = detail::samples_of(c.pulses->Tp, dt);
        const long D = detail::samples_of(c.delta_T, dt);
        const auto E = detail::delay_adds(c);
        std::vector<FringeTerm> t{{0, false, c.lo_x.amplitude}, {-D, true, c.lo_y.amplitude}};
        o.V_exact = exact_fringe(k, source_from_pulses(c.pulses->correlation, P), detail::with_delay_adds(t, E)).V();
        o.available = true;
        if (c.pulses->correlation.is_independent() && E.empty() && c.lo_x.amplitude > 0.0) {
            const double lambda = (c.lo_y.amplitude / c.lo_x.amplitude) * (c.lo_y.amplitude / c.lo_x.amplitude);
            o.name = "pulsed_dual_lo";
            o.V = 2.0 * std::sqrt(lambda) / (1.0 + lambda) * visibility_kernel_overlap(k, c.delta_T);
        } else {
            o.name = "exact_fringe";
            o.V = *o.V_exact;
        }
        return o;
    }
    case Kind::quasi_cw: {
        const auto &corr = c.pulses->correlation;
        const long P = detail::samples_of(c.pulses->Tp, dt);
        const long D = detail::samples_of(c.delta_T, dt);
        const long n = D / P;
        if (c.direct_intensity) {
            o.available = true;
            o.name = "intensity_fringe";
            o.V = std::abs(corr.at(n)) / corr.I0();
            o.V_exact = o.V;
            return o;
        }
        const auto k = detail::effective_kernel(c);
        const auto E = detail::delay_adds(c);
        o.V_exact = exact_fringe(k, source_from_pulses(corr, P), detail::with_delay_adds(mz_terms(D), E)).V();
        o.available = true;
        std::string regime = c.pulses->regime;
        if (regime == "auto") regime = corr.is_independent() ? "short" : "long";
        QcwGeometry geo{n, std::nullopt};
        if (E.size() == 1) geo.delta_Te = static_cast<double>(E[0]) * dt;
        if (E.size() > 1 || (regime == "long" && !geo.delta_Te)) {
            o.name = "exact_fringe";
            o.V = *o.V_exact;
            return o;
        }
        o.name = regime == "short" ? "qcw_short" : "qcw_long";
        o.V = visibility_qcw(k, c.pulses->Tp, corr, geo,
                             regime == "short" ? QcwRegime::short_coherence : QcwRegime::long_coherence);
        return o;
    }
    case Kind::single_photon: {
        o.available = true;
        o.name = "visibility_single_photon";
        o.V = visibility_single_photon(c.lo_x.amplitude, c.lo_y.amplitude, c.kernel.build(dt), c.delta_T);
        return o;
    }
    case Kind::quantum_cw: {
        o.available = true;
        o.name = "visibility_quantum";
        o.V = visibility_quantum(c.N, c.coherence, c.loss);
        return o;
    }
    }
    return o;
}

} // namespace detail

/// Closed-form prediction for the configured scenario, plus the exact fringe where one exists.
inline OracleValue oracle_for(const ScenarioConfig &c) {
    auto o = detail::closed_form(c);
    if (o.V_exact && std::abs(*o.V_exact - o.V) > 0.01)
        o.notes.push_back(o.name + " differs from the exact sampled-chain fringe (" + std::to_string(*o.V_exact) +
                          "); the closed form's regime assumptions are not met");
    return o;
}

} // namespace ampint::scenario
