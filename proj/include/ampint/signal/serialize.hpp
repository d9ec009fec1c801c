#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <string>

#include <json.hpp>

#include "ampint/signal/visibility.hpp"

namespace ampint {

/// CSV with columns phase, power, stderr.
inline void write_scan_csv(const std::string &path, const FringeScan &scan) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    out << "phase,power,stderr\n" << std::setprecision(12);
    for (std::size_t i = 0; i < scan.phase.size(); ++i)
        out << scan.phase[i] << ',' << scan.power[i] << ',' << (scan.std_error.empty() ? 0.0 : scan.std_error[i])
            << '\n';
}

/// Two whitespace-separated columns, ready for gnuplot and friends.
inline void write_columns(const std::string &path, const std::vector<double> &x, const std::vector<double> &y,
                          const std::string &header) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    out << "# " << header << '\n' << std::setprecision(12);
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) out << x[i] << ' ' << y[i] << '\n';
}

inline nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

inline nlohmann::json to_json(const VisibilityEstimate &v) {
    return {{"V", finite_or_null(v.V)},
            {"phi0", finite_or_null(v.phi0)},
            {"baseline", finite_or_null(v.baseline)},
            {"ci95", finite_or_null(v.ci95)},
            {"residual_rms", finite_or_null(v.residual_rms)},
            {"chi2_red", finite_or_null(v.chi2_red)},
            {"minmax_V", finite_or_null(v.minmax_V)}};
}

inline nlohmann::json to_json(const FringeScan &s) {
    return {{"phase", s.phase}, {"power", s.power}, {"stderr", s.std_error}, {"T_av", s.T_av}, {"chain", s.chain}};
}

} // namespace ampint
