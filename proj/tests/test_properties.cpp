// Randomized property checks. Parameters are drawn from a fixed seed so failures reproduce.

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ampint/ampint.hpp"

using namespace ampint;

namespace {
constexpr double ns = 1e-9;
constexpr double dt = 0.1 * ns;

Engine &param_engine() {
    static Engine e = make_engine(0x9E0);
    return e;
}

double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(param_engine()); }

LocalOscillator lo(double amp, double phase, Polarization pol) {
    LocalOscillator l;
    l.amplitude = amp;
    l.phase = phase;
    l.pol = pol;
    return l;
}
} // namespace

TEST(Determinism, SameSeedSameSamples) {
    const SampleGrid grid{dt, 8192};
    const CoherenceModel lor{CoherenceKind::lorentzian, 2 * ns, 1.0};
    const CoherenceModel pd{CoherenceKind::phase_diffusion, 2 * ns, 1.0};
    EXPECT_EQ(make_thermal_envelope(lor, grid, 5).samples, make_thermal_envelope(lor, grid, 5).samples);
    EXPECT_NE(make_thermal_envelope(lor, grid, 5).samples, make_thermal_envelope(lor, grid, 6).samples);
    EXPECT_EQ(make_phase_diffusion_envelope(pd, grid, 5).samples, make_phase_diffusion_envelope(pd, grid, 5).samples);

    PulseTrainSpec spec{{PulseShape::Kind::hann, 2 * ns}, 20 * ns, 0, 10 * ns, PulseCorrelation::triangular(3, 1.0)};
    EXPECT_EQ(make_pulse_train(spec, grid, 8).samples, make_pulse_train(spec, grid, 8).samples);

    const auto env = make_thermal_envelope(lor, grid, 5);
    const auto noise = NoiseModel::vacuum(1.0 / (2 * dt));
    const auto k = ResponseKernel::box(3 * ns, dt);
    const auto l = lo(1.0, 0.3, Polarization::scalar);
    EXPECT_EQ(homodyne_current(env, l, k, noise, 9).samples, homodyne_current(env, l, k, noise, 9).samples);
    EXPECT_NE(homodyne_current(env, l, k, noise, 9).samples, homodyne_current(env, l, k, noise, 10).samples);
}

TEST(Determinism, SeedDerivationIsPathSensitive) {
    EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
    EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
    EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(2, {2, 3}));
    EXPECT_NE(derive_seed(1, {2}), derive_seed(1, {2, 0}));
}

TEST(Optics, SplitConservesIntensityForAnyAngle) {
    const auto env = make_thermal_envelope({CoherenceKind::gaussian, 3 * ns, 2.0}, {dt, 2048}, 11);
    for (int r = 0; r < 20; ++r) {
        const auto pair = polarization_split(env, uniform(-10, 10));
        for (std::size_t i = 0; i < env.samples.size(); ++i) {
            const double in = std::norm(env.samples[i]);
            ASSERT_NEAR(std::norm(pair.ex.samples[i]) + std::norm(pair.ey.samples[i]), in, 1e-12 * (in + 1e-300));
        }
    }
}

TEST(Homodyne, ModeSelectivityForRandomOrthogonalComponents) {
    const SampleGrid grid{0.25 * ns, 4000};
    for (int r = 0; r < 10; ++r) {
        const double Tp = 20 * ns, first = std::round(uniform(5, 15)) * ns;
        PulseTrainSpec spec{{PulseShape::Kind::hann, 2 * ns}, Tp, 0, first, PulseCorrelation::independent(1.0)};
        const auto env = make_pulse_train(spec, grid, 100 + r);
        auto l = lo(uniform(0.5, 2.0), uniform(0, 6.3), Polarization::scalar);
        l.profile = LoProfile::pulse_train(spec, grid);
        const auto k = ResponseKernel::exponential(uniform(2, 20) * ns, grid.dt, 8);
        const auto base = homodyne_current(env, l, k, NoiseModel::off(), 1);

        // a train sitting in the gaps between LO pulses has zero overlap with the LO mode
        PulseTrainSpec gap = spec;
        gap.first_pulse = first + std::round(uniform(4, 16)) * ns;
        auto mixed = env;
        const auto extra = make_pulse_train(gap, grid, 200 + r);
        const cplx c = std::polar(uniform(0.1, 10), uniform(0, 6.3));
        for (std::size_t i = 0; i < grid.n; ++i) mixed.samples[i] += c * extra.samples[i];
        const auto p = l.profile.sample(grid);
        double overlap = 0.0;
        for (std::size_t i = 0; i < grid.n; ++i) overlap += p[i] * std::abs(extra.samples[i]);
        ASSERT_EQ(overlap, 0.0);

        const auto out = homodyne_current(mixed, l, k, NoiseModel::off(), 1);
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = base.valid_from; i < base.valid_to; ++i) {
            diff = std::max(diff, std::abs(out.samples[i] - base.samples[i]));
            scale = std::max(scale, std::abs(base.samples[i]));
        }
        EXPECT_LT(diff, 1e-10 * scale) << r;
    }
}

TEST(Homodyne, FringeDependsOnlyOnLoPhaseDifference) {
    // For one realization i_alpha = Re(w e^{-i alpha}) with w linear in the field, so the power summed over
    // the quadrature pair (alpha, alpha + pi/2) is |w|^2 and cannot depend on the global LO phase.
    const auto pair = polarization_split(make_thermal_envelope({CoherenceKind::lorentzian, 2 * ns, 1.0}, {dt, 1 << 16}, 12), 0.4);
    const auto k = ResponseKernel::box(10 * ns, dt);
    auto fit = [&](double alpha) {
        FringeScan scan;
        for (double d : phase_grid(16, 2)) {
            double p = 0.0;
            for (double a : {alpha, alpha + std::numbers::pi / 2})
                p += mean_square_power(dual_lo_current(pair, lo(1, a + d, Polarization::x), lo(0.8, a, Polarization::y), k,
                                                       NoiseModel::off(), 1))
                         .value;
            scan.phase.push_back(d);
            scan.power.push_back(p);
        }
        return extract_visibility(scan);
    };
    const auto ref = fit(0.0);
    EXPECT_GT(ref.V, 0.5);
    for (int r = 0; r < 4; ++r) {
        const auto v = fit(uniform(0, 2 * std::numbers::pi));
        EXPECT_NEAR(v.V, ref.V, 1e-10);
        EXPECT_NEAR(std::remainder(v.phi0 - ref.phi0, 2 * std::numbers::pi), 0.0, 1e-9);
    }
}

TEST(Signal, BoxAverageEqualsBoxKernelForRandomWindows) {
    const auto env = make_thermal_envelope({CoherenceKind::lorentzian, 2 * ns, 1.0}, {dt, 1 << 15}, 13);
    const auto l = lo(1.0, 0.0, Polarization::scalar);
    const auto fast = homodyne_current(env, l, ResponseKernel::delta(dt), NoiseModel::off(), 1);
    for (int r = 0; r < 8; ++r) {
        const double T = std::round(uniform(1, 2000)) * dt;
        const double a = mean_square_power(box_average(fast, T)).value;
        const double b = mean_square_power(homodyne_current(env, l, ResponseKernel::box(T, dt), NoiseModel::off(), 1)).value;
        EXPECT_NEAR(a / b, 1.0, 1e-10) << T;
    }
}

TEST(Signal, DelayAddCommutesWithBoxAverage) {
    std::normal_distribution<double> g;
    PhotocurrentTrace tr;
    tr.grid = {dt, 20000};
    tr.valid_to = tr.grid.n;
    for (std::size_t i = 0; i < tr.grid.n; ++i) tr.samples.push_back(g(param_engine()));
    for (int r = 0; r < 8; ++r) {
        const double T = std::round(uniform(1, 500)) * dt, E = std::round(uniform(0, 3000)) * dt;
        const auto one = box_average(delay_add(tr, E), T), two = delay_add(box_average(tr, T), E);
        ASSERT_EQ(one.valid_from, two.valid_from);
        ASSERT_EQ(one.valid_to, two.valid_to);
        for (std::size_t i = one.valid_from; i < one.valid_to; ++i)
            ASSERT_NEAR(one.samples[i], two.samples[i], 1e-12 * (1 + std::abs(one.samples[i])));
    }
}

TEST(Signal, VisibilityFitIsScaleInvariant) {
    std::normal_distribution<double> g;
    for (int r = 0; r < 10; ++r) {
        FringeScan s;
        const double V = uniform(0, 1), phi = uniform(-3, 3);
        for (double th : phase_grid(12, 2)) {
            s.phase.push_back(th);
            s.power.push_back(1 + V * std::cos(th + phi) + 0.01 * g(param_engine()));
            s.std_error.push_back(0.01);
        }
        auto t = s;
        const double c = uniform(1e-6, 1e6);
        for (auto &p : t.power) p *= c;
        for (auto &e : t.std_error) e *= c;
        const auto a = extract_visibility(s), b = extract_visibility(t);
        EXPECT_NEAR(a.V, b.V, 1e-10);
        EXPECT_NEAR(a.phi0, b.phi0, 1e-10);
        EXPECT_GE(a.V, 0.0);
    }
}

TEST(Oracles, VisibilitiesStayInUnitInterval) {
    for (int r = 0; r < 200; ++r) {
        const double v = oracles::visibility_pol(uniform(1e-3, 1e3), std::polar(uniform(0, 1), uniform(-3, 3)),
                                                 uniform(0, 5), uniform(0, 5))
                             .V;
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0 + 1e-12);
        const double q = oracles::visibility_quantum(uniform(0, 1e3), uniform(0, 1), uniform(0.01, 1));
        ASSERT_GE(q, 0.0);
        ASSERT_LE(q, 1.0);
    }
    for (auto k : {ResponseKernel::exponential(5 * ns, dt), ResponseKernel::box(7 * ns, dt),
                   convolve(ResponseKernel::box(3 * ns, dt), ResponseKernel::exponential(2 * ns, dt))}) {
        const auto curve = oracles::kernel_overlap_curve(k, k.size() + 10);
        EXPECT_DOUBLE_EQ(curve[0], 1.0);
        for (std::size_t j = 1; j < curve.size(); ++j) {
            ASSERT_LT(curve[j], 1.0);
            ASSERT_GE(curve[j], -1e-12);
        }
    }
}
