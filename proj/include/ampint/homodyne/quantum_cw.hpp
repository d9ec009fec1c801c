#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "ampint/core/rng.hpp"
#include "ampint/homodyne/detection.hpp"

namespace ampint {

struct QuantumCwParams {
    double rate = 0.0;        ///< photon rate R of the input field [1/s]
    cplx gamma{1.0, 0.0};     ///< x-y coherence <exp(i theta)>
    double loss = 1.0;        ///< transmission C applied to R
    double lo_amplitude = 1.0;
    double phi_x = 0.0, phi_y = 0.0;

    void validate() const {
        require(rate >= 0.0 && std::isfinite(rate), "quantum.rate", "must be nonnegative");
        require(std::abs(gamma) <= 1.0 + 1e-12, "quantum.coherence", "|gamma| must not exceed 1");
        require(loss > 0.0 && loss <= 1.0, "quantum.loss", "must be in (0, 1]");
        require(lo_amplitude >= 0.0, "lo.amplitude", "must be nonnegative");
    }
};

/**
 * @brief Two-LO homodyne current for a broadband cw field, Wigner-type surrogate.
 *
 * Signal S and unused-port vacuum E0 are white complex Gaussian records with
 * <|S|^2> = (C R + dB/2)/dt and <|E0|^2> = (dB/2)/dt per sample;
 * Ex = (S + E0)/sqrt2, Ey = exp(i theta_n)(S - E0)/sqrt2 with theta_n drawn so
 * that <exp(i theta)> = gamma. The LO-port vacuum quadratures carry dB/dt each.
 * Second moments then equal the operator ones: <Xx^2> = C R + dB, <Xxv^2> = dB.
 */
inline PhotocurrentTrace quantum_cw_current(const QuantumCwParams &prm, const SampleGrid &grid,
                                            const ResponseKernel &kernel, const NoiseModel &noise,
                                            std::uint64_t seed) {
    grid.validate();
    prm.validate();
    require(noise.mode == NoiseModel::Mode::vacuum, "noise.mode", "quantum_cw needs vacuum noise");
    noise.validate(grid);

    const double dB = noise.bandwidth, dt = grid.dt;
    auto engine = make_engine(seed);
    ComplexNormal sig((prm.loss * prm.rate + dB / 2.0) / dt);
    ComplexNormal vac(dB / (2.0 * dt));
    std::normal_distribution<double> port(0.0, std::sqrt(dB / dt));
    std::normal_distribution<double> unit;
    std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
    const double g = std::abs(prm.gamma);
    const double sigma = g > 0.0 ? std::sqrt(-2.0 * std::log(g)) : 0.0;
    const double phase0 = std::arg(prm.gamma);
    const double cx = std::cos(prm.phi_x), sx = std::sin(prm.phi_x);
    const double cy = std::cos(prm.phi_y), sy = std::sin(prm.phi_y);
    const double scale = prm.lo_amplitude / std::numbers::sqrt2;
    const double r2 = 1.0 / std::numbers::sqrt2;

    std::vector<double> drive(grid.n);
    for (std::size_t n = 0; n < grid.n; ++n) {
        const cplx S = sig(engine), E0 = vac(engine);
        const double th = g > 0.0 ? phase0 + sigma * unit(engine) : uniform(engine);
        const cplx ex = (S + E0) * r2;
        const cplx ey = std::polar(1.0, th) * (S - E0) * r2;
        const double xx = 2.0 * (ex.real() * cx + ex.imag() * sx);
        const double xy = 2.0 * (ey.real() * cy + ey.imag() * sy);
        drive[n] = scale * (xx + port(engine) + xy + port(engine));
    }
    Provenance prov;
    prov.chain.push_back("quantum_cw(R=" + std::to_string(prm.rate) + ", C=" + std::to_string(prm.loss) + ")");
    prov.correlation_time = dt;
    return detail::finish_current(drive, kernel, grid, 0, grid.n, std::move(prov));
}

} // namespace ampint
