#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "ampint/fields/thermal.hpp"
#include "ampint/homodyne/detection.hpp"
#include "ampint/optics/optics.hpp"
#include "ampint/signal/power.hpp"
#include "ampint/signal/processing.hpp"
#include "ampint/signal/serialize.hpp"
#include "ampint/signal/visibility.hpp"

using namespace ampint;

namespace {
constexpr double ns = 1e-9;

PhotocurrentTrace make_trace(std::vector<double> x, double dt) {
    PhotocurrentTrace tr;
    tr.grid = {dt, x.size()};
    tr.valid_to = x.size();
    tr.samples = std::move(x);
    return tr;
}

PhotocurrentTrace white(std::size_t n, double sigma, std::uint64_t seed, double dt = 1 * ns) {
    auto eng = make_engine(seed);
    std::normal_distribution<double> g(0.0, sigma);
    std::vector<double> x(n);
    for (auto &v : x) v = g(eng);
    return make_trace(std::move(x), dt);
}

FringeScan synthetic(double V, double phi0, double base) {
    FringeScan s;
    for (double th : phase_grid(16, 2)) {
        s.phase.push_back(th);
        s.power.push_back(base * (1 + V * std::cos(th + phi0)));
    }
    return s;
}

LocalOscillator cw_lo(double phase) {
    LocalOscillator l;
    l.phase = phase;
    return l;
}
} // namespace

TEST(BoxAverage, SingleSampleIsIdentity) {
    const auto tr = white(1000, 1.0, 1);
    const auto out = box_average(tr, 1 * ns);
    EXPECT_EQ(out.samples, tr.samples);
    EXPECT_EQ(out.valid_from, tr.valid_from);
}

TEST(BoxAverage, ConstantUnchanged) {
    const auto out = box_average(make_trace(std::vector<double>(500, 3.7), ns), 17 * ns);
    EXPECT_EQ(out.valid_from, 16u);
    for (std::size_t i = out.valid_from; i < out.valid_to; ++i) ASSERT_NEAR(out.samples[i], 3.7, 1e-14);
}

TEST(BoxAverage, WhiteNoiseVarianceShrinks) {
    const auto tr = white(1 << 20, 2.0, 2);
    const double L = 25;
    const auto out = box_average(tr, L * ns);
    PowerOptions opt;
    opt.block_length = 10 * L * ns;
    EXPECT_NEAR(mean_square_power(out, opt).value / (4.0 / L), 1.0, 0.05);
    EXPECT_THROW(box_average(tr, 2e-3), ValidationError);
}

TEST(DelayAdd, ZeroDelayDoubles) {
    const auto tr = white(256, 1.0, 3);
    const auto out = delay_add(tr, 0.0);
    for (std::size_t i = 0; i < tr.samples.size(); ++i) ASSERT_EQ(out.samples[i], 2.0 * tr.samples[i]);
}

TEST(DelayAdd, PeriodicTraceDoubles) {
    std::vector<double> x(1000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2 * std::numbers::pi * static_cast<double>(i % 40) / 40.0) + 0.3;
    const auto out = delay_add(make_trace(x, ns), 40 * ns);
    EXPECT_EQ(out.valid_to, 960u);
    for (std::size_t i = out.valid_from; i < out.valid_to; ++i) ASSERT_EQ(out.samples[i], 2 * x[i]);
    EXPECT_THROW(delay_add(make_trace(x, ns), 500 * ns), ValidationError);
}

TEST(DelayAdd, LinearAndCommutesWithBoxAverage) {
    const auto a = white(5000, 1.0, 4), b = white(5000, 2.0, 5);
    auto mix = a;
    for (std::size_t i = 0; i < mix.samples.size(); ++i) mix.samples[i] = 0.3 * a.samples[i] - 1.7 * b.samples[i];
    const auto lhs = delay_add(mix, 33 * ns), da = delay_add(a, 33 * ns), db = delay_add(b, 33 * ns);
    for (std::size_t i = lhs.valid_from; i < lhs.valid_to; ++i)
        ASSERT_NEAR(lhs.samples[i], 0.3 * da.samples[i] - 1.7 * db.samples[i], 1e-12);

    const auto one = box_average(delay_add(a, 33 * ns), 50 * ns);
    const auto two = delay_add(box_average(a, 50 * ns), 33 * ns);
    EXPECT_EQ(one.valid_from, two.valid_from);
    EXPECT_EQ(one.valid_to, two.valid_to);
    for (std::size_t i = one.valid_from; i < one.valid_to; ++i)
        ASSERT_NEAR(one.samples[i], two.samples[i], 1e-12 * (1 + std::abs(one.samples[i])));
}

TEST(MeanSquare, KnownMoments) {
    EXPECT_EQ(mean_square_power(make_trace(std::vector<double>(100, 0.0), ns)).value, 0.0);

    const auto g = white(1 << 16, 1.0, 6);
    const auto p = mean_square_power(g);
    EXPECT_LE(std::abs(p.value - 1.0), 3.0 * p.std_error);

    std::vector<double> x(64 * 100);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 2.5 * std::cos(2 * std::numbers::pi * static_cast<double>(i) / 64.0 + 0.3);
    EXPECT_NEAR(mean_square_power(make_trace(x, ns)).value / (2.5 * 2.5 / 2), 1.0, 1e-6);
}

TEST(MeanSquare, WindowAndWarnings) {
    auto tr = white(1000, 1.0, 7);
    PowerOptions opt;
    opt.T_av = 2000 * ns;
    EXPECT_THROW(mean_square_power(tr, opt), ValidationError);
    tr.provenance.correlation_time = 100 * ns;
    EXPECT_FALSE(mean_square_power(tr).warnings.empty());
}

TEST(Visibility, ExactRecovery) {
    const auto v = extract_visibility(synthetic(0.85, 0.4, 2.0));
    EXPECT_NEAR(v.V, 0.85, 1e-6);
    EXPECT_NEAR(v.phi0, 0.4, 1e-6);
    EXPECT_NEAR(v.baseline, 2.0, 1e-9);
    EXPECT_LT(v.residual_rms, 1e-9);
}

TEST(Visibility, ConstantScanIsDegenerate) {
    const auto v = extract_visibility(synthetic(0.0, 0.0, 1.0));
    EXPECT_EQ(v.V, 0.0);
    EXPECT_GE(v.ci95, 1.0);
}

TEST(Visibility, RescaleInvariant) {
    auto s = synthetic(0.6, -1.0, 1.0);
    auto eng = make_engine(8);
    std::normal_distribution<double> g(0.0, 0.02);
    for (auto &p : s.power) p += g(eng);
    s.std_error.assign(s.power.size(), 0.02);
    auto t = s;
    for (auto &p : t.power) p *= 37.5;
    for (auto &e : t.std_error) e *= 37.5;
    const auto a = extract_visibility(s), b = extract_visibility(t);
    EXPECT_NEAR(a.V, b.V, 1e-12);
    EXPECT_NEAR(a.phi0, b.phi0, 1e-12);
    EXPECT_NEAR(a.ci95, b.ci95, 1e-10);
}

TEST(Visibility, ScanPreconditions) {
    FringeScan s;
    for (double th : phase_grid(6, 2)) {
        s.phase.push_back(th);
        s.power.push_back(1.0);
    }
    EXPECT_THROW(extract_visibility(s), ValidationError);
    s = FringeScan{};
    for (double th : phase_grid(16, 1)) {
        s.phase.push_back(th);
        s.power.push_back(1.0 + std::cos(th));
    }
    EXPECT_THROW(extract_visibility(s), ValidationError);
}

TEST(Serialize, ScanCsvAndJson) {
    const auto s = synthetic(0.5, 0.0, 1.0);
    const auto path = std::filesystem::temp_directory_path() / "ampint_scan.csv";
    write_scan_csv(path.string(), s);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "phase,power,stderr");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    EXPECT_EQ(rows, s.phase.size());
    std::filesystem::remove(path);
    const auto j = to_json(extract_visibility(s));
    EXPECT_NEAR(j["V"].get<double>(), 0.5, 1e-6);
    EXPECT_TRUE(j.contains("ci95"));
}

// Time averaging a fast current is the same as detecting with the box kernel.
TEST(Processing, BoxAverageEqualsBoxKernel) {
    const double dt = 0.1 * ns;
    const CoherenceModel m{CoherenceKind::lorentzian, 2 * ns, 1.0};
    const auto env = make_thermal_envelope(m, {dt, 1 << 16}, 9);
    const auto fast = homodyne_current(env, cw_lo(0.3), ResponseKernel::delta(dt), NoiseModel::off(), 1);
    const auto averaged = box_average(fast, 62.5 * ns);
    const auto slow = homodyne_current(env, cw_lo(0.3), ResponseKernel::box(62.5 * ns, dt), NoiseModel::off(), 1);
    ASSERT_EQ(averaged.valid_from, slow.valid_from);
    const double a = mean_square_power(averaged).value, b = mean_square_power(slow).value;
    EXPECT_NEAR(a / b, 1.0, 1e-10);
}

// Mean fringe level of the unbalanced interferometer against the averaging time.
TEST(Processing, FringeLevelDecaysAsInverseAveragingTime) {
    const double dt = 0.1 * ns;
    const CoherenceModel m{CoherenceKind::lorentzian, 2 * ns, 1.0};
    const auto env = make_thermal_envelope(m, {dt, 1 << 22}, 10);
    auto level = [&](double T) {
        double sum = 0.0;
        for (double th : {0.0, std::numbers::pi}) {
            const auto out = unbalanced_mz(env, {63 * ns, th});
            sum += mean_square_power(homodyne_current(out, cw_lo(0.0), ResponseKernel::box(T, dt), NoiseModel::off(), 1)).value;
        }
        return sum / 2.0;
    };
    auto slope = [&](std::initializer_list<double> Ts) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
        for (double T : Ts) {
            const double x = std::log(T), y = std::log(level(T));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            n += 1;
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    EXPECT_NEAR(slope({40 * ns, 80 * ns, 160 * ns, 320 * ns}), -1.0, 0.1);
    EXPECT_NEAR(slope({0.1 * ns, 0.2 * ns, 0.4 * ns}), 0.0, 0.1);
}
