#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>

#include "ampint/fields/autocorrelation.hpp"
#include "ampint/fields/envelope_io.hpp"
#include "ampint/fields/phase_diffusion.hpp"
#include "ampint/fields/pulse_train.hpp"
#include "ampint/fields/thermal.hpp"

using namespace ampint;

namespace {

constexpr double ns = 1e-9;

CoherenceModel lorentz(double Tc = 2 * ns, double I0 = 1.0) { return {CoherenceKind::lorentzian, Tc, I0}; }

// Straight lag sum over the whole record, normalized by lag 0.
cplx brute_gamma(const SampledEnvelope &e, std::size_t lag) {
    cplx s{}, p{};
    for (std::size_t t = lag; t < e.samples.size(); ++t) s += e.samples[t] * std::conj(e.samples[t - lag]);
    for (std::size_t t = lag; t < e.samples.size(); ++t) p += std::norm(e.samples[t]);
    return s / p;
}

} // namespace

TEST(Thermal, LorentzianCoherenceAtTc) {
    // 1e5 samples at dt = 0.05 ns
    const auto env = make_thermal_envelope(lorentz(), {0.05 * ns, 100000}, 11);
    const auto g = estimate_autocorrelation(env, 4 * ns);
    EXPECT_DOUBLE_EQ(g.gamma[0].real(), 1.0);
    EXPECT_NEAR(std::abs(g.gamma[40]), std::exp(-1.0), 0.05);
    EXPECT_NEAR(std::abs(brute_gamma(env, 40)), std::exp(-1.0), 0.05);
}

TEST(Thermal, GaussianCoherenceCurve) {
    const CoherenceModel m{CoherenceKind::gaussian, 2 * ns, 1.0};
    const auto env = make_thermal_envelope(m, {0.1 * ns, 1 << 20}, 12);
    const auto g = estimate_autocorrelation(env, 6 * ns);
    for (std::size_t k = 0; k < g.lags.size(); k += 5) EXPECT_NEAR(std::abs(g.gamma[k]), m.gamma(g.lags[k]), 0.02) << k;
}

TEST(Thermal, LongLagDecay) {
    const auto env = make_thermal_envelope(lorentz(), {0.1 * ns, 1 << 19}, 13);
    const auto g = estimate_autocorrelation(env, 20 * ns);
    EXPECT_LT(std::abs(g.gamma.back()), 0.05);
    for (std::size_t k = 0; k < g.gamma.size(); ++k) EXPECT_LE(std::abs(g.gamma[k]), 1.0 + 3.0 * g.std_error[k]);
}

TEST(Thermal, IntensityCircularityAndStationarity) {
    const double I0 = 2.5;
    const std::size_t n = 1 << 20;
    const auto env = make_thermal_envelope(lorentz(2 * ns, I0), {0.1 * ns, n}, 14);
    // block means over 100 Tc give honest error bars for correlated samples
    const std::size_t blk = 2000, B = n / blk;
    std::vector<double> p(B);
    std::vector<cplx> q(B);
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t i = b * blk; i < (b + 1) * blk; ++i) {
            p[b] += std::norm(env.samples[i]) / blk;
            q[b] += env.samples[i] * env.samples[i] / double(blk);
        }
    }
    auto mean_se = [](const std::vector<double> &v, std::size_t a, std::size_t e) {
        double m = 0, s = 0;
        for (std::size_t i = a; i < e; ++i) m += v[i];
        m /= double(e - a);
        for (std::size_t i = a; i < e; ++i) s += (v[i] - m) * (v[i] - m);
        return std::pair{m, std::sqrt(s / double(e - a - 1) / double(e - a))};
    };
    const auto [pm, pse] = mean_se(p, 0, B);
    EXPECT_NEAR(pm, I0, 3 * pse);
    cplx qm{};
    for (auto v : q) qm += v / double(B);
    std::vector<double> qa(B);
    for (std::size_t b = 0; b < B; ++b) qa[b] = std::abs(q[b] - qm);
    double qvar = 0;
    for (auto v : qa) qvar += v * v;
    const double qse = std::sqrt(qvar / double(B - 1) / double(B));
    EXPECT_LT(std::abs(qm) / pm, 3 * qse / pm);

    const auto [h1, s1] = mean_se(p, 0, B / 2);
    const auto [h2, s2] = mean_se(p, B / 2, B);
    EXPECT_LT(std::abs(h1 - h2), 3 * std::hypot(s1, s2));
}

TEST(Thermal, ReproducibleAndSeedSensitive) {
    const SampleGrid grid{0.1 * ns, 4096};
    const auto a = make_thermal_envelope(lorentz(), grid, 7), b = make_thermal_envelope(lorentz(), grid, 7);
    const auto c = make_thermal_envelope(lorentz(), grid, 8);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_NE(a.samples, c.samples);
}

TEST(Thermal, RejectsBadInputs) {
    EXPECT_THROW(make_thermal_envelope(lorentz(), {0.2 * ns, 1000}, 1), ValidationError); // dt > Tc/20
    EXPECT_THROW(make_thermal_envelope(lorentz(0.0), {0.1 * ns, 1000}, 1), ValidationError);
    EXPECT_THROW(make_thermal_envelope(lorentz(2 * ns, 0.0), {0.1 * ns, 1000}, 1), ValidationError);
    EXPECT_THROW(make_thermal_envelope({CoherenceKind::phase_diffusion, 2 * ns, 1.0}, {0.1 * ns, 1000}, 1),
                 ValidationError);
}

TEST(PhaseDiffusion, ConstantModulusAndCoherence) {
    const CoherenceModel m{CoherenceKind::phase_diffusion, 2 * ns, 3.0};
    const auto env = make_phase_diffusion_envelope(m, {0.05 * ns, 400000}, 21);
    for (const auto &v : env.samples) ASSERT_NEAR(std::norm(v), 3.0, 1e-12);
    const auto g = estimate_autocorrelation(env, 4 * ns);
    EXPECT_NEAR(std::abs(g.gamma[40]), std::exp(-1.0), 0.05);
}

TEST(PhaseDiffusion, EnsembleMeanVanishes) {
    const CoherenceModel m{CoherenceKind::phase_diffusion, 2 * ns, 1.0};
    const int seeds = 100;
    cplx sum{};
    double sq = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const auto env = make_phase_diffusion_envelope(m, {0.1 * ns, 20000}, 1000 + s);
        cplx mean{};
        for (const auto &v : env.samples) mean += v;
        mean /= double(env.samples.size());
        sum += mean;
        sq += std::norm(mean);
    }
    const cplx mu = sum / double(seeds);
    const double sigma = std::sqrt((sq / seeds - std::norm(mu)) / (seeds - 1));
    EXPECT_LT(std::abs(mu), 3 * sigma);
}

TEST(PulseTrain, TemplatesAreNormalized) {
    for (auto kind : {PulseShape::Kind::hann, PulseShape::Kind::gaussian, PulseShape::Kind::box}) {
        const auto tpl = make_pulse_template({kind, 2 * ns}, 0.25 * ns);
        double e = 0.0;
        for (double v : tpl.f) e += v * v * tpl.dt;
        EXPECT_NEAR(e, 1.0, 1e-6);
        for (double v : tpl.f) EXPECT_GE(v, 0.0);
    }
    EXPECT_THROW(make_pulse_template({PulseShape::Kind::hann, 1 * ns}, 0.25 * ns), ValidationError); // 4 samples
}

TEST(PulseTrain, EnvelopeIsSumOfScaledPulses) {
    PulseTrainSpec spec{{PulseShape::Kind::hann, 2 * ns}, 20 * ns, 0, 10 * ns, PulseCorrelation::independent(1.0)};
    std::vector<cplx> amps;
    const SampleGrid grid{0.25 * ns, 8000};
    const auto env = make_pulse_train(spec, grid, 3, &amps);
    const auto tpl = make_pulse_template(spec.shape, grid.dt);
    ASSERT_EQ(amps.size(), 100u);
    for (std::size_t j = 0; j < amps.size(); ++j) {
        const std::size_t c = 40 + 80 * j;
        EXPECT_NEAR(std::abs(env.samples[c] - amps[j] * tpl.f[tpl.center]), 0.0, 1e-12);
        if (c + 40 < grid.n) {
            EXPECT_EQ(env.samples[c + 40], cplx{}); // half-way between pulses
        }
    }
}

TEST(PulseTrain, IndependentAmplitudesAreUncorrelated) {
    auto eng = make_engine(5);
    const std::size_t n = 20000;
    const auto a = correlated_amplitudes(PulseCorrelation::independent(2.0), n, eng);
    cplx c1{};
    double p = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) c1 += a[j] * std::conj(a[j + 1]);
    for (auto v : a) p += std::norm(v);
    c1 /= double(n - 1);
    p /= double(n);
    EXPECT_NEAR(p, 2.0, 0.06);
    EXPECT_LT(std::abs(c1), 3.0 * 2.0 / std::sqrt(double(n)));
}

TEST(PulseTrain, TriangularCorrelationsReproduced) {
    const auto corr = PulseCorrelation::triangular(5, 1.0);
    const std::size_t n = 10000;
    std::vector<cplx> acc(6);
    const int seeds = 4;
    for (int s = 0; s < seeds; ++s) {
        auto eng = make_engine(100 + s);
        const auto a = correlated_amplitudes(corr, n, eng);
        for (std::size_t q = 0; q <= 5; ++q) {
            cplx c{};
            for (std::size_t j = 0; j + q < n; ++j) c += a[j] * std::conj(a[j + q]);
            acc[q] += c / double(n - q) / double(seeds);
        }
    }
    for (std::size_t q = 0; q <= 5; ++q) {
        const double target = 1.0 - double(q) / 6.0;
        EXPECT_NEAR(acc[q].real(), target, 0.05) << "q=" << q;
        EXPECT_NEAR(acc[q].imag(), 0.0, 0.05) << "q=" << q;
    }
}

TEST(PulseTrain, RejectsInvalidSpecs) {
    EXPECT_THROW(PulseCorrelation::from_one_sided({{1.0, 0}, {0.9, 0}, {0.0, 0}}), ValidationError); // not PSD
    EXPECT_THROW(PulseCorrelation::from_two_sided({{0.5, 0}, {1.0, 0}, {0.4, 0}}), ValidationError);  // not Hermitian
    EXPECT_NO_THROW(PulseCorrelation::from_two_sided({{0.5, 0}, {1.0, 0}, {0.5, 0}}));
    const SampleGrid grid{0.25 * ns, 4000};
    PulseTrainSpec overlap{{PulseShape::Kind::hann, 12 * ns}, 20 * ns, 0, 10 * ns, PulseCorrelation::independent(1.0)};
    EXPECT_THROW(make_pulse_train(overlap, grid, 1), ValidationError);
    PulseTrainSpec off_grid{{PulseShape::Kind::hann, 2 * ns}, 20.1 * ns, 0, 10 * ns, PulseCorrelation::independent(1.0)};
    EXPECT_THROW(make_pulse_train(off_grid, grid, 1), ValidationError);
    PulseTrainSpec too_many{{PulseShape::Kind::hann, 2 * ns}, 20 * ns, 100, 10 * ns, PulseCorrelation::independent(1.0)};
    EXPECT_THROW(make_pulse_train(too_many, grid, 1), ValidationError);
}

TEST(Autocorrelation, ConstantEnvelopeIsFullyCoherent) {
    auto env = SampledEnvelope::zeros({1 * ns, 1000});
    for (auto &v : env.samples) v = {0.3, -0.4};
    const auto g = estimate_autocorrelation(env, 100 * ns);
    for (const auto &v : g.gamma) EXPECT_NEAR(std::abs(v - cplx{1.0, 0.0}), 0.0, 1e-12);
}

TEST(Autocorrelation, IndependentFieldsHaveNoCrossCoherence) {
    const SampleGrid grid{0.1 * ns, 1 << 18};
    const auto a = make_thermal_envelope(lorentz(), grid, 31), b = make_thermal_envelope(lorentz(), grid, 32);
    const auto g = estimate_cross_correlation(a, b, 10 * ns);
    EXPECT_LT(std::abs(g.gamma[0]), 3 * g.std_error[0]);
    int outside = 0;
    for (std::size_t k = 0; k < g.gamma.size(); k += 10) outside += std::abs(g.gamma[k]) >= 3 * g.std_error[k];
    EXPECT_LE(outside, 1);
}

TEST(Autocorrelation, MatchesBruteForceLagSum) {
    const auto env = make_thermal_envelope(lorentz(), {0.1 * ns, 50000}, 41);
    const auto g = estimate_autocorrelation(env, 8 * ns);
    // same estimator as the brute sum up to per-lag normalization by the lag-0 mean
    for (std::size_t k : {0u, 7u, 20u, 80u}) EXPECT_NEAR(std::abs(g.gamma[k] - brute_gamma(env, k)), 0.0, 2e-3) << k;
}

TEST(Autocorrelation, RejectsLongLags) {
    const auto env = make_thermal_envelope(lorentz(), {0.1 * ns, 4000}, 1);
    EXPECT_THROW(estimate_autocorrelation(env, 150 * ns), ValidationError);
}

TEST(EnvelopeIo, BinaryRoundTripAndCsv) {
    auto env = make_thermal_envelope(lorentz(), {0.1 * ns, 256, 5 * ns}, 2);
    env.omega0 = 1.2e15;
    env.pol = Polarization::y;
    env.valid_from = 3;
    const auto dir = std::filesystem::temp_directory_path();
    const auto bin = (dir / "ampint_env.bin").string(), csv = (dir / "ampint_env.csv").string();
    write_envelope_binary(bin, env);
    const auto back = read_envelope_binary(bin);
    EXPECT_EQ(back.samples, env.samples);
    EXPECT_EQ(back.grid.dt, env.grid.dt);
    EXPECT_EQ(back.grid.t0, env.grid.t0);
    EXPECT_EQ(back.omega0, env.omega0);
    EXPECT_EQ(back.pol, env.pol);
    EXPECT_EQ(back.valid_from, 3u);
    write_envelope_csv(csv, env);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "t,re,im");
    std::size_t lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    EXPECT_EQ(lines, 256u);
    std::filesystem::remove(bin);
    std::filesystem::remove(csv);
}
