#pragma once

// Quasi-cw pulse trains and the exact fringe of any linear homodyne chain.

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "ampint/fields/types.hpp"
#include "ampint/homodyne/kernel.hpp"

namespace ampint::oracles {

enum class QcwRegime { short_coherence, long_coherence };

struct QcwGeometry {
    long n = 1;                     ///< arm delay in pulse periods
    std::optional<double> delta_Te; ///< delay-add offset, if any
};

/**
 * @brief Visibility of an unbalanced interferometer fed by a pulse train.
 *
 * The kernel is the effective one (detector response convolved with the
 * squared LO pulse). Short regime: pulses are independent and V follows the
 * kernel overlap at n Tp (halved with delay-add). Long regime: delay-add with
 * V = 1/2 |sum_q R(q Tp - D) I_q| / sum_q R(q Tp) I_q, D = dTe - n Tp.
 */
inline double visibility_qcw(const ResponseKernel &kernel, double Tp, const PulseCorrelation &corr,
                             const QcwGeometry &geo, QcwRegime regime) {
    require(Tp > 0.0, "pulses.Tp", "must be positive");
    const double dt = kernel.dt();
    const long P = std::lround(Tp / dt);
    require(std::abs(static_cast<double>(P) * dt - Tp) <= 1e-9 * Tp, "pulses.Tp", "must be a whole number of samples");
    const long nshift = geo.n * P;
    if (regime == QcwRegime::short_coherence) {
        require(corr.is_independent(), "regime", "short-coherence regime needs independent pulses");
        const double r0 = kernel.overlap(0);
        if (!geo.delta_Te) return kernel.overlap(nshift) / r0;
        const long e = std::lround(*geo.delta_Te / dt);
        return 0.5 * kernel.overlap(nshift - e) / r0;
    }
    require(geo.delta_Te.has_value(), "processing.delay_add", "long-coherence regime needs a delay-add stage");
    require(kernel.width() < static_cast<double>(corr.M() + 1) * Tp || corr.is_independent(), "regime",
            "long-coherence regime needs a detector faster than the pulse coherence time");
    const long D = std::lround(*geo.delta_Te / dt) - nshift;
    const long M = static_cast<long>(corr.M());
    cplx num{};
    double den = 0.0;
    for (long q = -M; q <= M; ++q) {
        num += kernel.overlap(q * P - D) * corr.at(q);
        den += kernel.overlap(q * P) * corr.at(q).real();
    }
    require(den > 0.0, "pulses.correlation", "zero total power");
    return 0.5 * std::abs(num) / den;
}

/// Fast-detector limit of the long regime: 1/2 |I_m / I0| with m = delta / Tp.
inline double visibility_qcw_limit(const PulseCorrelation &corr, double Tp, double delta) {
    const double m = delta / Tp;
    const long q = std::lround(m);
    if (std::abs(m - static_cast<double>(q)) > 1e-9) return 0.0;
    return 0.5 * std::abs(corr.at(q)) / corr.I0();
}

/// Second-order correlation of the sampled source, c[d] = <E[n+d] E*[n]> (times dt for cw).
struct SourceCorrelation {
    std::vector<std::pair<long, cplx>> taps;
};

inline SourceCorrelation source_from_model(const CoherenceModel &model, double dt) {
    const auto G = static_cast<long>(std::ceil(40.0 * model.Tc / dt));
    SourceCorrelation s;
    for (long d = -G; d <= G; ++d) s.taps.emplace_back(d, model.I0 * model.gamma(static_cast<double>(d) * dt) * dt);
    return s;
}

/// Pulse-to-pulse correlation; each pulse contributes through the effective kernel.
inline SourceCorrelation source_from_pulses(const PulseCorrelation &corr, long period) {
    SourceCorrelation s;
    const long M = static_cast<long>(corr.M());
    for (long q = -M; q <= M; ++q) s.taps.emplace_back(-q * period, corr.at(q));
    return s;
}

/// One linear contribution to the current: weight * X(t + shift) in the direct
/// (quadrature phi) or the phase-shifted (quadrature phi - theta) arm.
struct FringeTerm {
    long shift = 0;
    bool shifted_arm = false;
    double weight = 1.0;
};

struct ExactFringe {
    double P0 = 0.0; ///< phase-independent mean power
    cplx P1{};       ///< P(theta) = P0 + Re(P1 exp(-i theta))
    double V() const { return P0 > 0.0 ? std::abs(P1) / P0 : 0.0; }
};

/**
 * @brief Exact mean-square current versus the interferometer phase.
 *
 * Sums the second moments of every pair of terms through the effective-kernel
 * overlap and the source correlation. No noise, no sampling error.
 */
inline ExactFringe exact_fringe(const ResponseKernel &kernel, const SourceCorrelation &src,
                                const std::vector<FringeTerm> &terms) {
    const long L = static_cast<long>(kernel.size());
    const auto R = kernel.autocorrelation(static_cast<std::size_t>(L));
    auto Rat = [&](long y) { const long a = std::labs(y); return a < L ? R[static_cast<std::size_t>(a)] : 0.0; };
    auto H = [&](long x) {
        cplx acc{};
        for (const auto &[d, c] : src.taps) acc += Rat(x + d) * c;
        return acc;
    };
    ExactFringe out;
    for (const auto &a : terms)
        for (const auto &b : terms) {
            const cplx h = H(b.shift - a.shift) * (a.weight * b.weight);
            const int dv = int(b.shifted_arm) - int(a.shifted_arm);
            if (dv == 0) out.P0 += 2.0 * h.real();
            else if (dv == 1) out.P1 += 2.0 * h;
            else out.P1 += 2.0 * std::conj(h);
        }
    return out;
}

/// Terms of an unbalanced interferometer (arm delay D samples), optionally followed by delay-add (E samples).
inline std::vector<FringeTerm> mz_terms(long D, std::optional<long> E = std::nullopt) {
    std::vector<FringeTerm> t{{0, false, 1.0}, {-D, true, 1.0}};
    if (E) {
        t.push_back({*E, false, 1.0});
        t.push_back({*E - D, true, 1.0});
    }
    return t;
}

} // namespace ampint::oracles
