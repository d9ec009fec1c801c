#pragma once

// Frequency-domain visibility of the delay-add current for a detector of finite
// bandwidth: V' exp(i theta0) = int |k(w)|^2 S(w0 - w) exp(i w delta) dw / K2.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ampint/core/fft.hpp"
#include "ampint/fields/types.hpp"
#include "ampint/homodyne/kernel.hpp"

namespace ampint::oracles {

/**
 * @brief |k(w)|^2 and the field spectrum on a common angular-frequency grid.
 *
 * field_spectrum[j] holds the spectrum at detuning -omega[j] from the carrier.
 * Pairs built from analytic models keep the callables for the quadrature
 * cross-check; pairs built from grid samples are periodic over the Nyquist band.
 */
struct SpectralPair {
    std::vector<double> omega;
    std::vector<double> k_spectrum;
    std::vector<double> field_spectrum;
    std::function<double(double)> k_model;
    std::function<double(double)> s_model;
    bool periodic = false;
    // sampled pairs only: rebuild at a finer frequency spacing
    std::function<SpectralPair(std::size_t)> refine;
};

struct SpectralVisibility {
    double V_prime = 0.0;
    double theta0 = 0.0;
    double K2 = 0.0;
    double cross_check = 0.0; ///< relative disagreement with the independent evaluation
    std::vector<std::string> diagnostics;
};

/// Continuous analytic pair on [-omega_max, omega_max] with spacing h.
inline SpectralPair spectral_pair_from_models(const ResponseKernel &kernel, const CoherenceModel &model,
                                              double omega_max, double h) {
    require(omega_max > 0.0 && h > 0.0 && h < omega_max, "spectral grid", "need 0 < h < omega_max");
    SpectralPair sp;
    const auto half = static_cast<long>(std::llround(omega_max / h));
    for (long j = -half; j <= half; ++j) {
        const double w = static_cast<double>(j) * h;
        sp.omega.push_back(w);
        sp.k_spectrum.push_back(kernel.transfer_power(w));
        sp.field_spectrum.push_back(model.spectrum(-w));
    }
    sp.k_model = [kernel](double w) { return kernel.transfer_power(w); };
    sp.s_model = [model](double w) { return model.spectrum(-w); };
    return sp;
}

/**
 * @brief Pair for the sampled process: DTFT of the sampled kernel and of the
 *        sampled coherence I0 gamma(m dt), on N bins covering one Nyquist period.
 *
 * The trapezoid rule on a periodic integrand is exact here, so V' equals the
 * lag sum of the discrete process once N exceeds twice its support plus delay.
 */
inline SpectralPair spectral_pair_from_samples(const ResponseKernel &kernel, const CoherenceModel &model,
                                               double max_delta, std::size_t oversample = 1) {
    const double dt = kernel.dt();
    const auto G = static_cast<std::size_t>(std::ceil(40.0 * model.Tc / dt));
    const auto Dmax = static_cast<std::size_t>(std::ceil(std::abs(max_delta) / dt));
    const std::size_t N = fft::next_fast_size(oversample * (2 * (kernel.size() + G + Dmax) + 1));
    fft::cvec K(N), C(N);
    const auto ks = kernel.samples();
    for (std::size_t m = 0; m < ks.size(); ++m) K[m] = ks[m] * dt;
    C[0] = model.gamma(0.0) * dt;
    for (std::size_t d = 1; d <= G; ++d) {
        const double v = model.gamma(static_cast<double>(d) * dt) * dt;
        C[d] = v;
        C[N - d] = v;
    }
    fft::forward(K);
    fft::backward(C);
    SpectralPair sp;
    sp.periodic = true;
    const double dw = 2.0 * std::numbers::pi / (static_cast<double>(N) * dt);
    for (std::size_t j = 0; j < N; ++j) {
        const long jj = j < (N + 1) / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(N);
        sp.omega.push_back(static_cast<double>(jj) * dw);
        sp.k_spectrum.push_back(std::norm(K[j]));
        sp.field_spectrum.push_back(std::max(C[j].real(), 0.0));
    }
    if (oversample < 10) {
        sp.refine = [kernel, model, max_delta](std::size_t factor) {
            return spectral_pair_from_samples(kernel, model, max_delta, factor);
        };
    }
    return sp;
}

namespace detail {

inline cplx trapezoid_overlap(const SpectralPair &sp, double delta, double &K2) {
    const std::size_t n = sp.omega.size();
    cplx acc{};
    K2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = sp.periodic || (j != 0 && j + 1 != n) ? 1.0 : 0.5;
        const double p = w * sp.k_spectrum[j] * sp.field_spectrum[j];
        acc += p * std::polar(1.0, sp.omega[j] * delta);
        K2 += p;
    }
    return acc;
}

// Panel edges for the adaptive cross-check: geometric near the spectral peak,
// capped at half an oscillation of exp(i w delta) until panels reach the far tail.
inline std::vector<double> panel_breaks(const SpectralPair &sp, double delta) {
    const double a = sp.omega.front(), b = sp.omega.back();
    std::size_t peak = 0;
    std::vector<double> p(sp.omega.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        p[j] = sp.k_spectrum[j] * sp.field_spectrum[j];
        if (p[j] > p[peak]) peak = j;
    }
    std::size_t hi = peak;
    while (hi + 1 < p.size() && p[hi] > 0.5 * p[peak]) ++hi;
    const double c = sp.omega[peak];
    const double half = std::max(std::abs(sp.omega[hi] - c), (b - a) * 1e-9);
    const double cap = delta != 0.0 ? std::min(std::numbers::pi / std::abs(delta), 4.0 * half) : 4.0 * half;
    std::vector<double> right, left;
    for (double x = 0.0, step = half / 20.0; c + x < b;) {
        x += step;
        right.push_back(std::min(c + x, b));
        step = std::min(step * 1.25, std::max(cap, 4.0 * x));
    }
    for (double x = 0.0, step = half / 20.0; c - x > a;) {
        x += step;
        left.push_back(std::max(c - x, a));
        step = std::min(step * 1.25, std::max(cap, 4.0 * x));
    }
    std::vector<double> pts(left.rbegin(), left.rend());
    pts.push_back(c);
    pts.insert(pts.end(), right.begin(), right.end());
    if (pts.front() > a) pts.insert(pts.begin(), a);
    if (pts.back() < b) pts.push_back(b);
    return pts;
}

template <class F> double gk_panels(F f, const std::vector<double> &pts) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) acc += GK::integrate(f, pts[i], pts[i + 1], 8, 1e-13);
    return acc;
}

} // namespace detail

inline SpectralVisibility visibility_spectral(const SpectralPair &sp, double delta, bool cross_check = true) {
    require(!sp.omega.empty() && sp.omega.size() == sp.k_spectrum.size() && sp.omega.size() == sp.field_spectrum.size(),
            "spectral pair", "spectra must share the frequency grid");
    for (double s : sp.field_spectrum) require(s >= 0.0, "spectral pair", "field spectrum must be nonnegative");
    double K2 = 0.0;
    const cplx z = detail::trapezoid_overlap(sp, delta, K2);
    if (!(K2 > 0.0)) throw Error("visibility_spectral: K2 is not positive");
    SpectralVisibility out;
    out.K2 = K2;
    out.V_prime = std::abs(z) / K2;
    out.theta0 = out.V_prime > 0.0 ? std::arg(z) : 0.0;
    if (!cross_check) return out;

    double other = out.V_prime;
    if (sp.k_model && sp.s_model) {
        auto f = [&](double w) { return sp.k_model(w) * sp.s_model(w); };
        const auto pts = detail::panel_breaks(sp, delta);
        const double k2 = detail::gk_panels(f, pts);
        const double re = detail::gk_panels([&](double w) { return f(w) * std::cos(w * delta); }, pts);
        const double im = detail::gk_panels([&](double w) { return f(w) * std::sin(w * delta); }, pts);
        other = std::hypot(re, im) / k2;
    } else if (sp.refine) {
        other = visibility_spectral(sp.refine(10), delta, false).V_prime;
    } else {
        return out;
    }
    out.cross_check = std::abs(other - out.V_prime) / std::max(std::abs(out.V_prime), 1e-300);
    if (out.cross_check > 1e-4 && std::abs(other - out.V_prime) > 1e-12)
        out.diagnostics.push_back("trapezoid and cross-check disagree by " + std::to_string(out.cross_check) +
                                  " relative");
    return out;
}

} // namespace ampint::oracles
