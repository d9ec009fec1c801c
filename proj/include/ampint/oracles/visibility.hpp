#pragma once

// Closed-form visibility laws used as ground truth for the Monte-Carlo runs.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ampint/fields/types.hpp"
#include "ampint/homodyne/kernel.hpp"

namespace ampint::oracles {

struct PolVisibility {
    double V = 0.0;
    double phase = 0.0; ///< arg(gamma12)
};

/// Dual-LO interference of orthogonal polarizations: V = 2|g12| sqrt(l I1 I2)/(I1 + l I2).
inline PolVisibility visibility_pol(double lambda, cplx gamma12, double I1, double I2) {
    require(lambda > 0.0, "lambda", "must be positive");
    require(I1 >= 0.0 && I2 >= 0.0, "intensity", "must be nonnegative");
    require(std::abs(gamma12) <= 1.0 + 1e-12, "gamma12", "|gamma12| must not exceed 1");
    const double den = I1 + lambda * I2;
    PolVisibility out;
    out.V = den > 0.0 ? 2.0 * std::abs(gamma12) * std::sqrt(lambda * I1 * I2) / den : 0.0;
    out.phase = std::arg(gamma12);
    return out;
}

/// Normalized kernel self-overlap at lag delta_T. Box kernels use the exact law max(0, 1 - dT/T).
inline double visibility_kernel_overlap(const ResponseKernel &kernel, double delta_T) {
    if (kernel.kind() == ResponseKernel::Kind::box) return std::max(0.0, 1.0 - std::abs(delta_T) / kernel.width());
    const long lag = std::lround(delta_T / kernel.dt());
    if (static_cast<std::size_t>(std::labs(lag)) >= kernel.size()) return 0.0;
    return kernel.overlap(lag) / kernel.overlap(0);
}

/// Normalized overlap for lags 0..max_lag samples (FFT for long kernels).
inline std::vector<double> kernel_overlap_curve(const ResponseKernel &kernel, std::size_t max_lag) {
    auto r = kernel.autocorrelation(max_lag);
    const double r0 = r[0];
    for (auto &v : r) v /= r0;
    return r;
}

/// Fast detector delay-add: 1/2 |gamma(delta)|.
inline double visibility_delay_add_fast(const CoherenceModel &model, double delta) {
    return 0.5 * std::abs(model.gamma(delta));
}

/// Same, from an estimated coherence curve (linear interpolation in |gamma|).
inline double visibility_delay_add_fast(const GammaCurve &g, double delta) {
    const double d = std::abs(delta);
    require(!g.lags.empty() && d <= g.lags.back(), "delta", "outside the support of the coherence curve");
    auto it = std::upper_bound(g.lags.begin(), g.lags.end(), d);
    if (it == g.lags.end()) return 0.5 * std::abs(g.gamma.back());
    const auto i = static_cast<std::size_t>(it - g.lags.begin());
    const double t = (d - g.lags[i - 1]) / (g.lags[i] - g.lags[i - 1]);
    return 0.5 * ((1.0 - t) * std::abs(g.gamma[i - 1]) + t * std::abs(g.gamma[i]));
}

/// Slow detector delay-add: 1/2 of the kernel overlap at delta.
inline double visibility_delay_add_slow(const ResponseKernel &kernel, double delta) {
    return 0.5 * visibility_kernel_overlap(kernel, delta);
}

/// Split single photon: 2|E1||E2| R(dT) / (3 (|E1|^2 + |E2|^2) Q2).
inline double visibility_single_photon(double E1, double E2, const ResponseKernel &kernel, double delta_T) {
    require(E1 >= 0.0 && E2 >= 0.0, "lo.amplitude", "must be nonnegative");
    require(E1 + E2 > 0.0, "lo.amplitude", "both LO amplitudes are zero");
    const long lag = std::lround(delta_T / kernel.dt());
    return 2.0 * E1 * E2 * kernel.overlap(lag) / (3.0 * (E1 * E1 + E2 * E2) * kernel.q2());
}

/// Vacuum-limited visibility |gamma| C N / (C N + 2); C = 1 is the lossless law.
inline double visibility_quantum(double N, double gamma_mod, double C = 1.0) {
    require(N >= 0.0, "N", "must be nonnegative");
    require(gamma_mod >= 0.0 && gamma_mod <= 1.0, "gamma", "must lie in [0, 1]");
    require(C > 0.0, "C", "must be positive");
    return gamma_mod * C * N / (C * N + 2.0);
}

} // namespace ampint::oracles
