#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ampint/core/error.hpp"

namespace ampint {

struct FringeScan {
    std::vector<double> phase;
    std::vector<double> power;
    std::vector<double> std_error;
    double T_av = 0.0;
    std::string chain;
};

/// Fit of power(theta) = baseline (1 + V cos(theta + phi0)).
struct VisibilityEstimate {
    double V = 0.0;
    double phi0 = 0.0;
    double baseline = 0.0;
    double residual_rms = 0.0;
    double ci95 = 0.0;     ///< half-width of the 95% interval on V
    double chi2_red = 0.0;
    double minmax_V = 0.0; ///< (max - min)/(max + min) of the raw scan, for reference
};

/// `points` phases stepping evenly through `periods` fringe periods from `start`.
inline std::vector<double> phase_grid(std::size_t points, double periods, double start = 0.0) {
    std::vector<double> p(points);
    for (std::size_t k = 0; k < points; ++k)
        p[k] = start + 2.0 * std::numbers::pi * periods * static_cast<double>(k) / static_cast<double>(points);
    return p;
}

/**
 * @brief Weighted least squares of a + b cos(theta) + c sin(theta).
 *
 * V = sqrt(b^2 + c^2)/a and phi0 = atan2(-c, b). The parameter covariance is
 * scaled by max(1, chi2_red) and propagated to V by the delta method.
 */
inline VisibilityEstimate extract_visibility(const FringeScan &scan) {
    const std::size_t N = scan.phase.size();
    require(N == scan.power.size(), "scan", "phase and power lengths differ");
    require(scan.std_error.empty() || scan.std_error.size() == N, "scan", "stderr length differs");
    require(N >= 8, "scan.points", "need at least 8 phase points");
    const auto [lo, hi] = std::minmax_element(scan.phase.begin(), scan.phase.end());
    const double span = (*hi - *lo) * static_cast<double>(N) / static_cast<double>(N - 1);
    require(span >= 3.0 * std::numbers::pi * (1.0 - 1e-9), "scan", "phases must span at least 1.5 fringe periods");

    bool weighted = false;
    double max_se = 0.0;
    for (double s : scan.std_error) max_se = std::max(max_se, s);
    weighted = max_se > 0.0;

    Eigen::MatrixXd A(N, 3);
    Eigen::VectorXd y(N), w(N);
    for (std::size_t i = 0; i < N; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        A(r, 0) = 1.0;
        A(r, 1) = std::cos(scan.phase[i]);
        A(r, 2) = std::sin(scan.phase[i]);
        y(r) = scan.power[i];
        const double se = weighted ? std::max(scan.std_error[i], 1e-6 * max_se) : 1.0;
        w(r) = 1.0 / (se * se);
    }
    const Eigen::MatrixXd AtW = A.transpose() * w.asDiagonal();
    const Eigen::Matrix3d normal = AtW * A;
    const Eigen::Vector3d p = normal.ldlt().solve(AtW * y);
    const Eigen::VectorXd res = y - A * p;

    VisibilityEstimate est;
    const double chi2 = (res.array().square() * w.array()).sum();
    est.chi2_red = chi2 / static_cast<double>(N - 3);
    est.residual_rms = std::sqrt(res.squaredNorm() / static_cast<double>(N));
    const double scale = weighted ? std::max(1.0, est.chi2_red) : est.chi2_red;
    const Eigen::Matrix3d cov = normal.inverse() * scale;

    const double a = p(0), b = p(1), c = p(2);
    const double amp = std::hypot(b, c);
    const double pmax = *std::max_element(scan.power.begin(), scan.power.end());
    const double pmin = *std::min_element(scan.power.begin(), scan.power.end());
    est.minmax_V = pmax + pmin > 0.0 ? (pmax - pmin) / (pmax + pmin) : 0.0;
    est.baseline = a;
    if (a <= 0.0 || amp <= 1e-14 * std::abs(a)) {
        est.V = 0.0;
        est.ci95 = 1.0;
        return est;
    }
    est.V = std::max(0.0, amp / a);
    est.phi0 = std::atan2(-c, b);
    const Eigen::Vector3d grad(-est.V / a, b / (a * amp), c / (a * amp));
    est.ci95 = 1.96 * std::sqrt(std::max(grad.dot(cov * grad), 0.0));
    return est;
}

} // namespace ampint
