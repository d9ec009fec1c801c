#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "ampint/core/rng.hpp"
#include "ampint/homodyne/kernel.hpp"
#include "ampint/homodyne/local_oscillator.hpp"

namespace ampint {

/**
 * @brief Quadrature second moments of the split single photon plus the two
 *        vacuum modes entering the detection beam splitter.
 *
 * Mode order: X1(phi1), X2(phi2), X1v(phi2), X2v(phi1). The current is
 *   i(t) = k(t) |E1| [X1 + X2v]/2 + k(t + dT) |E2| [X2 + X1v]/2.
 */
struct SecondMomentModel {
    Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();
    LocalOscillator lo1, lo2;
    ResponseKernel kernel;
    double delta_T = 0.0;
    double theta = 0.0;

    double overlap() const { return kernel.overlap(std::lround(delta_T / kernel.dt())); }

    /// Exact integral of <i^2> over time, from the covariance.
    double integrated_power() const {
        const auto &S = covariance;
        const double a = lo1.amplitude / 2.0, b = lo2.amplitude / 2.0;
        const double uu = S(0, 0) + S(3, 3) + 2.0 * S(0, 3);
        const double ww = S(1, 1) + S(2, 2) + 2.0 * S(1, 2);
        const double uw = S(0, 1) + S(0, 2) + S(3, 1) + S(3, 2);
        return a * a * kernel.q2() * uu + b * b * kernel.q2() * ww + 2.0 * a * b * overlap() * uw;
    }

    /// Monte-Carlo estimate of the same integral from Gaussian quadrature draws.
    double sampled_power(std::size_t trials, Engine &engine, double *std_error = nullptr) const {
        Eigen::LLT<Eigen::Matrix4d> llt(covariance);
        const Eigen::Matrix4d L = llt.matrixL();
        std::normal_distribution<double> g;
        const double a = lo1.amplitude / 2.0, b = lo2.amplitude / 2.0, q2 = kernel.q2(), r = overlap();
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            Eigen::Vector4d z(g(engine), g(engine), g(engine), g(engine));
            const Eigen::Vector4d x = L * z;
            const double u = x(0) + x(3), w = x(1) + x(2);
            const double p = a * a * q2 * u * u + b * b * q2 * w * w + 2.0 * a * b * r * u * w;
            m1 += p;
            m2 += p * p;
        }
        const double n = static_cast<double>(trials);
        const double mean = m1 / n;
        if (std_error) *std_error = std::sqrt(std::max(m2 / n - mean * mean, 0.0) / n);
        return mean;
    }
};

inline SecondMomentModel single_photon_moments(const LocalOscillator &lo1, const LocalOscillator &lo2,
                                               const ResponseKernel &kernel, double delta_T, double theta) {
    lo1.validate("lo_x");
    lo2.validate("lo_y");
    require(delta_T >= 0.0, "interferometer.delta_T", "must be nonnegative");
    const double r = delta_T / kernel.dt();
    require(std::abs(r - std::round(r)) <= 1e-6 * std::max(1.0, r), "interferometer.delta_T",
            "must be a whole number of kernel samples");
    SecondMomentModel m;
    m.lo1 = lo1;
    m.lo2 = lo2;
    m.kernel = kernel;
    m.delta_T = delta_T;
    m.theta = theta;
    m.covariance.diagonal() << 2.0, 2.0, 1.0, 1.0;
    const double c = std::cos(theta + lo1.phase - lo2.phase);
    m.covariance(0, 1) = m.covariance(1, 0) = c;
    return m;
}

} // namespace ampint
