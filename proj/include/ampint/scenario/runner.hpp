#pragma once

// Executes scenarios: synthesis -> optics -> detection -> processing -> fringe fit.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ampint/core/parallel.hpp"
#include "ampint/core/rng.hpp"
#include "ampint/fields/phase_diffusion.hpp"
#include "ampint/fields/pulse_train.hpp"
#include "ampint/fields/thermal.hpp"
#include "ampint/homodyne/detection.hpp"
#include "ampint/homodyne/quantum_cw.hpp"
#include "ampint/homodyne/single_photon.hpp"
#include "ampint/optics/optics.hpp"
#include "ampint/scenario/config.hpp"
#include "ampint/scenario/oracle.hpp"
#include "ampint/signal/power.hpp"
#include "ampint/signal/processing.hpp"
#include "ampint/signal/visibility.hpp"

#ifndef AMPINT_VERSION
#define AMPINT_VERSION "0.0.0"
#endif

namespace ampint::scenario {

struct ResultRow {
    std::string label;  ///< swept value as written
    double value = 0.0; ///< swept value in SI units (NaN when not a quantity)
    bool monte_carlo = true;
    VisibilityEstimate fit;
    FringeScan scan;
    OracleValue oracle;
    bool agree = true;
    double runtime = 0.0; ///< seconds
    std::vector<std::string> warnings;
};

struct ResultTable {
    std::string scenario;
    std::string param; ///< empty for a single run
    std::vector<ResultRow> rows;
    std::string config_echo;
    std::string version = AMPINT_VERSION;

    bool all_agree() const {
        for (const auto &r : rows)
            if (!r.agree) return false;
        return true;
    }
};

struct RunOptions {
    bool monte_carlo = true;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
};

/// |V_mc - V_oracle| <= max(0.05, 3 ci95).
inline bool oracle_agrees(const VisibilityEstimate &fit, const OracleValue &o) {
    if (!o.available) return true;
    return std::abs(fit.V - o.V) <= std::max(0.05, 3.0 * fit.ci95);
}

namespace detail {

struct TrialFields {
    SampledEnvelope env;
    PolarizedPair pair; // dual-LO scenarios
};

struct PointSetup {
    ResponseKernel kernel;
    LoProfile profile_x, profile_y; // pulsed LOs
};

inline SampledEnvelope make_cw_field(const FieldSpec &f, const SampleGrid &grid, std::uint64_t seed) {
    const auto model = f.coherence();
    if (model.kind == CoherenceKind::phase_diffusion) return make_phase_diffusion_envelope(model, grid, seed);
    return make_thermal_envelope(model, grid, seed);
}

inline TrialFields make_fields(const ScenarioConfig &c, std::uint64_t seed) {
    TrialFields t;
    switch (c.kind) {
    case Kind::orthogonal_pol_cw: {
        t.env = make_cw_field(c.field, c.grid, seed);
        t.pair = polarization_split(t.env, c.theta);
        if (c.coherence < 1.0) {
            // ey = exp(i theta)(g E + sqrt(1 - g^2) E')/sqrt2 with E' independent
            const auto other = make_cw_field(c.field, c.grid, derive_seed(seed, {1}));
            const cplx rot = std::polar(1.0 / std::numbers::sqrt2, c.theta);
            const double g = c.coherence, h = std::sqrt(1.0 - g * g);
            for (std::size_t i = 0; i < c.grid.n; ++i) t.pair.ey.samples[i] = rot * (g * t.env.samples[i] + h * other.samples[i]);
        }
        break;
    }
    case Kind::unbalanced_cw:
        t.env = make_cw_field(c.field, c.grid, seed);
        break;
    case Kind::pulsed_dual_lo:
        t.env = make_pulse_train(c.pulse_train(), c.grid, seed);
        t.pair = delay_and_rotate(t.env, c.delta_T);
        break;
    case Kind::quasi_cw:
        t.env = make_pulse_train(c.pulse_train(), c.grid, seed);
        break;
    case Kind::single_photon:
    case Kind::quantum_cw:
        break;
    }
    return t;
}

inline PhotocurrentTrace apply_processing(PhotocurrentTrace tr, const std::vector<Stage> &stages) {
    for (const auto &s : stages)
        tr = s.kind == Stage::Kind::box_average ? box_average(tr, s.value) : delay_add(tr, s.value);
    return tr;
}

/// Current at one scan phase.
inline PhotocurrentTrace current_at(const ScenarioConfig &c, const PointSetup &ps, const TrialFields &f, double phase,
                                    std::uint64_t noise_seed) {
    auto lo = [](const LoSpec &s, double extra, Polarization pol, const LoProfile &prof) {
        return LocalOscillator{s.amplitude, s.phase + extra, pol, prof};
    };
    PhotocurrentTrace tr;
    switch (c.kind) {
    case Kind::orthogonal_pol_cw: {
        auto ly = lo(c.lo_y, phase, Polarization::y, LoProfile::cw());
        if (c.single_arm) ly.amplitude = 0.0;
        tr = dual_lo_current(f.pair, lo(c.lo_x, 0.0, Polarization::x, LoProfile::cw()), ly, ps.kernel, c.noise, noise_seed);
        break;
    }
    case Kind::unbalanced_cw:
    case Kind::quasi_cw: {
        const auto out = unbalanced_mz(f.env, {c.delta_T, c.theta + phase});
        if (c.direct_intensity) {
            tr = direct_intensity_current(out, ps.kernel);
        } else {
            const auto prof = c.kind == Kind::quasi_cw ? ps.profile_x : LoProfile::cw();
            tr = homodyne_current(out, lo(c.lo, 0.0, Polarization::scalar, prof), ps.kernel, c.noise, noise_seed);
        }
        break;
    }
    case Kind::pulsed_dual_lo:
        tr = dual_lo_current(f.pair, lo(c.lo_x, 0.0, Polarization::x, ps.profile_x),
                             lo(c.lo_y, phase, Polarization::y, ps.profile_y), ps.kernel, c.noise, noise_seed);
        break;
    case Kind::quantum_cw: {
        QuantumCwParams q;
        q.rate = c.N * c.noise.bandwidth;
        q.gamma = cplx{c.coherence, 0.0};
        q.loss = c.loss;
        q.lo_amplitude = c.lo.amplitude;
        q.phi_x = c.lo.phase;
        q.phi_y = c.lo.phase + phase;
        tr = quantum_cw_current(q, c.grid, ps.kernel, c.noise, noise_seed);
        break;
    }
    case Kind::single_photon:
        throw Error("single_photon has no photocurrent trace");
    }
    return apply_processing(std::move(tr), c.processing);
}

inline double source_correlation_time(const ScenarioConfig &c) {
    switch (c.kind) {
    case Kind::orthogonal_pol_cw:
    case Kind::unbalanced_cw: return c.field.Tc;
    case Kind::pulsed_dual_lo:
    case Kind::quasi_cw: return static_cast<double>(c.pulses->correlation.M() + 1) * c.pulses->Tp;
    default: return c.grid.dt;
    }
}

inline void add_unique(std::vector<std::string> &dst, const std::vector<std::string> &src) {
    for (const auto &w : src)
        if (std::find(dst.begin(), dst.end(), w) == dst.end()) dst.push_back(w);
}

inline ResultRow run_single_photon(const ScenarioConfig &c, std::uint64_t seed, const RunOptions &opt) {
    ResultRow row;
    const auto kernel = c.kernel.build(c.grid.dt);
    const LocalOscillator l1{c.lo_x.amplitude, c.lo_x.phase, Polarization::x, LoProfile::cw()};
    const LocalOscillator l2{c.lo_y.amplitude, c.lo_y.phase, Polarization::y, LoProfile::cw()};
    const auto phases = phase_grid(c.scan_points, c.scan_periods);
    FringeScan exact;
    row.scan.chain = exact.chain = "single_photon(kernel=" + kernel.describe() + ")";
    for (std::size_t p = 0; p < phases.size(); ++p) {
        const auto m = single_photon_moments(l1, l2, kernel, c.delta_T, c.theta + phases[p]);
        exact.phase.push_back(phases[p]);
        exact.power.push_back(m.integrated_power());
        exact.std_error.push_back(0.0);
        if (opt.monte_carlo) {
            auto eng = make_engine(c.common_random_numbers ? seed : derive_seed(seed, {p}));
            double se = 0.0;
            const double v = m.sampled_power(c.trials, eng, &se);
            row.scan.phase.push_back(phases[p]);
            row.scan.power.push_back(v);
            row.scan.std_error.push_back(se);
        }
    }
    row.oracle = oracle_for(c);
    row.oracle.V_exact = extract_visibility(exact).V;
    if (!opt.monte_carlo) row.scan = exact;
    return row;
}

} // namespace detail

/**
 * @brief One configuration, one result row.
 *
 * Seeds: field and noise records of trial t come from derive_seed(master,
 * {point, t, stream}); with common random numbers every scan phase reuses them,
 * otherwise the phase index joins the path.
 */
inline ResultRow run_point(const ScenarioConfig &c, std::size_t point, const RunOptions &opt = {}) {
    const auto t_start = std::chrono::steady_clock::now();
    const std::uint64_t master = opt.seed.value_or(c.seed);
    const unsigned workers = resolve_workers(opt.workers.value_or(c.workers));
    ResultRow row;
    try {
        if (c.kind == Kind::single_photon) {
            row = detail::run_single_photon(c, derive_seed(master, {point, 0x5B}), opt);
        } else {
            row.oracle = oracle_for(c);
            if (opt.monte_carlo) {
                detail::PointSetup ps;
                ps.kernel = c.kernel.build(c.grid.dt);
                if (c.pulses) {
                    ps.profile_x = LoProfile::pulse_train(c.pulse_train(), c.grid, 0.0);
                    ps.profile_y = c.kind == Kind::pulsed_dual_lo ? LoProfile::pulse_train(c.pulse_train(), c.grid, c.delta_T)
                                                                  : ps.profile_x;
                }
                const auto phases = phase_grid(c.scan_points, c.scan_periods);
                const std::size_t P = phases.size(), T = c.trials;
                std::vector<PowerEstimate> est(P * T);
                std::vector<std::size_t> valid(T, 0);
                std::string chain;
                parallel_for(T, workers, [&](std::size_t t) {
                    std::optional<detail::TrialFields> shared;
                    if (c.common_random_numbers) shared = detail::make_fields(c, derive_seed(master, {point, t, 0xF1E1D}));
                    for (std::size_t p = 0; p < P; ++p) {
                        const std::uint64_t salt = c.common_random_numbers ? 0 : p + 1;
                        std::optional<detail::TrialFields> own;
                        if (!shared) own = detail::make_fields(c, derive_seed(master, {point, t, 0xF1E1D, salt}));
                        const auto &fields = shared ? *shared : *own;
                        const auto tr = detail::current_at(c, ps, fields, phases[p],
                                                           derive_seed(master, {point, t, 0x401CE, salt}));
                        PowerOptions po;
                        po.T_av = c.T_av;
                        po.seed = derive_seed(master, {point, t, 0xB007, p});
                        est[t * P + p] = c.direct_intensity ? mean_level(tr, po) : mean_square_power(tr, po);
                        if (p == 0) valid[t] = est[t * P + p].samples;
                        if (t == 0 && p == 0) chain = tr.provenance.describe();
                    }
                });
                row.scan.chain = chain;
                for (std::size_t p = 0; p < P; ++p) {
                    double m = 0.0, v = 0.0;
                    for (std::size_t t = 0; t < T; ++t) {
                        m += est[t * P + p].value;
                        v += est[t * P + p].std_error * est[t * P + p].std_error;
                        detail::add_unique(row.warnings, est[t * P + p].warnings);
                    }
                    row.scan.phase.push_back(phases[p]);
                    row.scan.power.push_back(m / static_cast<double>(T));
                    row.scan.std_error.push_back(std::sqrt(v) / static_cast<double>(T));
                }
                row.scan.T_av = static_cast<double>(valid[0]) * c.grid.dt;
                double averaged = 0.0;
                for (auto n : valid) averaged += static_cast<double>(n) * c.grid.dt;
                const double tc = detail::source_correlation_time(c);
                if (averaged < 1e4 * tc)
                    row.warnings.push_back("each phase point averages only " + std::to_string(averaged / tc) +
                                           " coherence times (want >= 1e4)");
            }
        }
        if (opt.monte_carlo) {
            row.fit = extract_visibility(row.scan);
            row.agree = oracle_agrees(row.fit, row.oracle);
        }
        row.monte_carlo = opt.monte_carlo;
    } catch (const ValidationError &) {
        throw;
    } catch (const std::exception &e) {
        throw Error(std::string(to_string(c.kind)) + ": " + e.what());
    }
    row.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return row;
}

inline ResultTable run_scenario(const ScenarioConfig &c, const RunOptions &opt = {}) {
    ResultTable t;
    t.scenario = to_string(c.kind);
    t.config_echo = YAML::Dump(c.source);
    t.rows.push_back(run_point(c, 0, opt));
    return t;
}

/// Parses "a,b,c" or "start:stop:count" (units allowed, e.g. "100ns:1us:5").
inline std::vector<std::string> expand_values(const std::string &spec) {
    std::vector<std::string> out;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> f;
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ':');) f.push_back(p);
        if (f.size() != 3) throw ValidationError("--values", "range must be start:stop:count");
        const auto [a, ua] = units::detail::split_number(f[0]);
        const auto [b, ub] = units::detail::split_number(f[1]);
        if (ua != ub) throw ValidationError("--values", "range endpoints need the same unit");
        const double n = units::parse_plain(f[2]);
        if (!(n >= 1.0) || n != std::floor(n)) throw ValidationError("--values", "count must be a positive integer");
        const auto count = static_cast<std::size_t>(n);
        for (std::size_t i = 0; i < count; ++i) {
            const double v = count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
            std::ostringstream os;
            os.precision(17);
            os << v << ua;
            out.push_back(os.str());
        }
        return out;
    }
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) {
        const auto t = std::string(units::detail::trim(p));
        if (t.empty()) throw ValidationError("--values", "empty entry");
        out.push_back(t);
    }
    if (out.empty()) throw ValidationError("--values", "no values given");
    return out;
}

/// SI value of a swept entry; NaN if it is not a recognized quantity.
inline double quantity_value(const std::string &s) {
    for (auto parse : {units::parse_time, units::parse_frequency, units::parse_angle, units::parse_plain}) {
        try {
            return parse(s);
        } catch (const ValidationError &) {
        }
    }
    return std::nan("");
}

/// One run per value, in the given order, each from the same master seed split by point index.
inline ResultTable sweep(const YAML::Node &doc, const std::string &param, const std::vector<std::string> &values,
                         const RunOptions &opt = {}) {
    ResultTable t;
    t.param = param;
    t.config_echo = YAML::Dump(doc);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto cfg = parse_config(with_value(doc, param, values[i]));
        t.scenario = to_string(cfg.kind);
        auto row = run_point(cfg, i, opt);
        row.label = values[i];
        row.value = quantity_value(values[i]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace ampint::scenario
