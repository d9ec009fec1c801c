#pragma once

#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include "ampint/core/dump.hpp"
#include "ampint/core/grid.hpp"

namespace ampint {

/// Which operations produced a trace, and the longest correlation time they imply.
struct Provenance {
    std::vector<std::string> chain;
    double correlation_time = 0.0;

    std::string describe() const {
        std::string s;
        for (const auto &c : chain) s += (s.empty() ? "" : " > ") + c;
        return s;
    }
};

struct PhotocurrentTrace {
    std::vector<double> samples;
    SampleGrid grid;
    std::size_t valid_from = 0;
    std::size_t valid_to = 0; ///< exclusive
    Provenance provenance;

    std::size_t valid_count() const { return valid_to > valid_from ? valid_to - valid_from : 0; }
};

/// CSV with columns t, i.
inline void write_trace_csv(const std::string &path, const PhotocurrentTrace &tr) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    out << "t,i\n" << std::setprecision(17);
    for (std::size_t k = 0; k < tr.samples.size(); ++k) out << tr.grid.time(k) << ',' << tr.samples[k] << '\n';
}

inline void write_trace_binary(const std::string &path, const PhotocurrentTrace &tr) {
    dump::Header h;
    h.payload = dump::Payload::real;
    h.dt = tr.grid.dt;
    h.n = tr.grid.n;
    h.t0 = tr.grid.t0;
    h.valid_from = tr.valid_from;
    dump::write(path, h, tr.samples);
}

} // namespace ampint
