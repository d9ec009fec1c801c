#pragma once

#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include "ampint/core/dump.hpp"
#include "ampint/fields/types.hpp"

namespace ampint {

inline void write_envelope_binary(const std::string &path, const SampledEnvelope &env) {
    dump::Header h;
    h.payload = dump::Payload::complex;
    h.dt = env.grid.dt;
    h.n = env.grid.n;
    h.omega0 = env.omega0;
    h.t0 = env.grid.t0;
    h.valid_from = env.valid_from;
    h.pol = static_cast<std::uint32_t>(env.pol);
    std::vector<double> v(2 * env.samples.size());
    for (std::size_t i = 0; i < env.samples.size(); ++i) {
        v[2 * i] = env.samples[i].real();
        v[2 * i + 1] = env.samples[i].imag();
    }
    dump::write(path, h, v);
}

inline SampledEnvelope read_envelope_binary(const std::string &path) {
    auto [h, v] = dump::read(path);
    if (h.payload != dump::Payload::complex) throw Error("dump: " + path + " does not hold an envelope");
    SampledEnvelope env = SampledEnvelope::zeros(SampleGrid{h.dt, static_cast<std::size_t>(h.n), h.t0},
                                                 static_cast<Polarization>(h.pol));
    env.omega0 = h.omega0;
    env.valid_from = static_cast<std::size_t>(h.valid_from);
    for (std::size_t i = 0; i < env.samples.size(); ++i) env.samples[i] = {v[2 * i], v[2 * i + 1]};
    return env;
}

/// CSV with columns t, re, im.
inline void write_envelope_csv(const std::string &path, const SampledEnvelope &env) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    out << "t,re,im\n" << std::setprecision(17);
    for (std::size_t i = 0; i < env.samples.size(); ++i)
        out << env.grid.time(i) << ',' << env.samples[i].real() << ',' << env.samples[i].imag() << '\n';
}

} // namespace ampint
