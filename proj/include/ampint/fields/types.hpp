#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ampint/core/error.hpp"
#include "ampint/core/grid.hpp"

namespace ampint {

using cplx = std::complex<double>;

enum class Polarization { scalar, x, y };

inline const char *to_string(Polarization p) {
    switch (p) {
    case Polarization::x: return "x";
    case Polarization::y: return "y";
    default: return "scalar";
    }
}

// =============================================================================
// Coherence model
// =============================================================================

enum class CoherenceKind { lorentzian, gaussian, phase_diffusion };

/**
 * @brief Stationary field model with normalized coherence gamma(tau).
 *
 * Tc is fixed by |gamma(Tc)| = 1/e for every kind:
 *   lorentzian, phase_diffusion: gamma = exp(-|tau|/Tc)
 *   gaussian:                    gamma = exp(-(tau/Tc)^2)
 */
struct CoherenceModel {
    CoherenceKind kind = CoherenceKind::lorentzian;
    double Tc = 0.0;
    double I0 = 1.0;

    void validate() const {
        require(Tc > 0.0 && std::isfinite(Tc), "field.Tc", "must be positive");
        require(I0 > 0.0 && std::isfinite(I0), "field.I0", "must be positive");
    }

    double gamma(double tau) const {
        const double x = std::abs(tau) / Tc;
        return kind == CoherenceKind::gaussian ? std::exp(-x * x) : std::exp(-x);
    }

    /// S(w) = integral gamma(tau) exp(i w tau) dtau.
    double spectrum(double omega) const {
        const double a = omega * Tc;
        if (kind == CoherenceKind::gaussian) return std::sqrt(std::numbers::pi) * Tc * std::exp(-a * a / 4.0);
        return 2.0 * Tc / (1.0 + a * a);
    }

    /// Integral of gamma over all lags. Reported as a diagnostic only.
    double integrated_coherence_time() const { return spectrum(0.0); }
};

// =============================================================================
// Sampled envelope
// =============================================================================

/**
 * @brief Complex baseband envelope on a uniform grid.
 *
 * Samples outside [valid_from, valid_to) are padding left behind by delays or
 * filters and must not enter any estimate.
 */
struct SampledEnvelope {
    std::vector<cplx> samples;
    SampleGrid grid;
    double omega0 = 0.0;
    Polarization pol = Polarization::scalar;
    std::size_t valid_from = 0;
    std::size_t valid_to = 0;
    double correlation_time = 0.0; ///< longest correlation scale of the generating model
    double carrier_phase = 0.0;    ///< omega0 times accumulated delay, mod 2 pi (bookkeeping only)

    static SampledEnvelope zeros(const SampleGrid &grid, Polarization pol = Polarization::scalar) {
        grid.validate();
        SampledEnvelope e;
        e.samples.assign(grid.n, cplx{});
        e.grid = grid;
        e.pol = pol;
        e.valid_to = grid.n;
        return e;
    }

    std::size_t valid_count() const { return valid_to > valid_from ? valid_to - valid_from : 0; }

    double mean_intensity() const {
        double acc = 0.0;
        for (std::size_t i = valid_from; i < valid_to; ++i) acc += std::norm(samples[i]);
        return valid_count() ? acc / static_cast<double>(valid_count()) : 0.0;
    }
};

// =============================================================================
// Pulse trains
// =============================================================================

struct PulseShape {
    enum class Kind { hann, gaussian, box };
    Kind kind = Kind::hann;
    double width = 0.0; ///< full support (hann, box) or intensity FWHM (gaussian)

    /// Temporal extent outside of which the profile is exactly zero.
    double support() const { return kind == Kind::gaussian ? 4.0 * width : width; }
};

/// Sampled pulse profile f with sum f^2 dt = 1; f[i] sits at time (i - center) dt.
struct PulseTemplate {
    std::vector<double> f;
    std::size_t center = 0;
    double dt = 0.0;
};

inline PulseTemplate make_pulse_template(const PulseShape &shape, double dt) {
    require(shape.width > 0.0, "pulses.width", "must be positive");
    require(shape.width / dt >= 8.0 - 1e-9, "pulses.width", "must span at least 8 samples");
    const double half = shape.support() / 2.0;
    const auto h = static_cast<std::size_t>(std::floor(half / dt + 1e-9));
    PulseTemplate p;
    p.dt = dt;
    p.center = h;
    p.f.resize(2 * h + 1);
    for (std::size_t i = 0; i < p.f.size(); ++i) {
        const double t = (static_cast<double>(i) - static_cast<double>(h)) * dt;
        double v = 0.0;
        switch (shape.kind) {
        case PulseShape::Kind::hann:
            if (std::abs(t) < half) {
                const double c = std::cos(std::numbers::pi * t / shape.width);
                v = c * c;
            }
            break;
        case PulseShape::Kind::gaussian:
            v = std::exp(-2.0 * std::numbers::ln2 * t * t / (shape.width * shape.width));
            break;
        case PulseShape::Kind::box:
            v = std::abs(t) <= half ? 1.0 : 0.0;
            break;
        }
        p.f[i] = v;
    }
    double energy = 0.0;
    for (double v : p.f) energy += v * v * dt;
    const double norm = 1.0 / std::sqrt(energy);
    for (double &v : p.f) v *= norm;
    return p;
}

/// Amplitude correlations I_q = <A_j A*_{j+q}>, stored for q = 0..M; I_{-q} = conj(I_q).
class PulseCorrelation {
public:
    PulseCorrelation() : lags_{cplx{1.0, 0.0}} {}

    static PulseCorrelation independent(double I0) { return from_one_sided({cplx{I0, 0.0}}); }

    /// I_q = I0 (1 - |q|/(M+1)) for |q| <= M.
    static PulseCorrelation triangular(std::size_t M, double I0) {
        std::vector<cplx> v(M + 1);
        for (std::size_t q = 0; q <= M; ++q) v[q] = I0 * (1.0 - static_cast<double>(q) / static_cast<double>(M + 1));
        return from_one_sided(std::move(v));
    }

    static PulseCorrelation from_one_sided(std::vector<cplx> lags) {
        require(!lags.empty(), "pulses.correlation", "needs at least I_0");
        require(std::abs(lags[0].imag()) <= 1e-12 * std::abs(lags[0]), "pulses.correlation", "I_0 must be real");
        require(lags[0].real() > 0.0, "pulses.correlation", "I_0 must be positive");
        PulseCorrelation c;
        c.lags_ = std::move(lags);
        c.lags_[0] = {c.lags_[0].real(), 0.0};
        c.check_psd();
        return c;
    }

    /// Accepts I_q for q = -M..M and checks Hermitian symmetry.
    static PulseCorrelation from_two_sided(const std::vector<cplx> &values) {
        require(values.size() % 2 == 1, "pulses.correlation", "two-sided array needs odd length");
        const std::size_t M = values.size() / 2;
        std::vector<cplx> one(M + 1);
        for (std::size_t q = 0; q <= M; ++q) {
            const cplx pos = values[M + q], neg = values[M - q];
            require(std::abs(neg - std::conj(pos)) <= 1e-12 * std::abs(values[M]), "pulses.correlation",
                    "I_{-q} must equal conj(I_q)");
            one[q] = pos;
        }
        return from_one_sided(std::move(one));
    }

    std::size_t M() const { return lags_.size() - 1; }
    double I0() const { return lags_[0].real(); }
    bool is_independent() const {
        for (std::size_t q = 1; q < lags_.size(); ++q)
            if (lags_[q] != cplx{}) return false;
        return true;
    }

    cplx at(long q) const {
        const auto a = static_cast<std::size_t>(q < 0 ? -q : q);
        if (a >= lags_.size()) return {};
        return q < 0 ? std::conj(lags_[a]) : lags_[a];
    }

    const std::vector<cplx> &one_sided() const { return lags_; }

private:
    void check_psd() const {
        const auto m = static_cast<Eigen::Index>(2 * M() + 1);
        Eigen::MatrixXcd T(m, m);
        for (Eigen::Index r = 0; r < m; ++r)
            for (Eigen::Index c = 0; c < m; ++c) T(r, c) = at(static_cast<long>(c - r));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T, Eigen::EigenvaluesOnly);
        require(es.eigenvalues().minCoeff() >= -1e-10 * I0(), "pulses.correlation",
                "Toeplitz correlation matrix is not positive semidefinite");
    }

    std::vector<cplx> lags_;
};

struct PulseTrainSpec {
    PulseShape shape;
    double Tp = 0.0;
    std::size_t n_pulses = 0;
    double first_pulse = 0.0; ///< centre of pulse 0, measured from grid.t0
    PulseCorrelation correlation;

    double mean_intensity() const { return correlation.I0(); }
};

// =============================================================================
// Coherence estimates
// =============================================================================

struct GammaCurve {
    std::vector<double> lags;
    std::vector<cplx> gamma;
    std::vector<double> std_error;
};

} // namespace ampint
