#pragma once

// Result tables on disk: results.csv, results.json and plot-ready .dat files.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <string>

#include <json.hpp>

#include "ampint/scenario/runner.hpp"
#include "ampint/signal/serialize.hpp"

namespace ampint::scenario {

inline nlohmann::json to_json(const OracleValue &o) {
    nlohmann::json j{{"available", o.available}, {"name", o.name}, {"notes", o.notes}};
    j["V"] = o.available ? finite_or_null(o.V) : nlohmann::json();
    j["V_exact"] = o.V_exact ? finite_or_null(*o.V_exact) : nlohmann::json();
    return j;
}

/// Everything except runtime is a pure function of config and seed.
inline nlohmann::json to_json(const ResultRow &r, bool with_runtime = true) {
    nlohmann::json j{{"label", r.label},
                     {"value", finite_or_null(r.value)},
                     {"monte_carlo", r.monte_carlo},
                     {"oracle", to_json(r.oracle)},
                     {"agree", r.agree},
                     {"warnings", r.warnings}};
    if (r.monte_carlo) {
        j["fit"] = ampint::to_json(r.fit);
        j["scan"] = ampint::to_json(r.scan);
    }
    if (with_runtime) j["runtime_s"] = r.runtime;
    return j;
}

inline nlohmann::json to_json(const ResultTable &t, bool with_runtime = true) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &r : t.rows) rows.push_back(to_json(r, with_runtime));
    return {{"version", t.version}, {"scenario", t.scenario}, {"param", t.param},
            {"config", t.config_echo}, {"rows", rows}};
}

inline void write_results_csv(const std::string &path, const ResultTable &t) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    auto num = [](double v) {
        std::ostringstream os;
        if (std::isfinite(v)) os << std::setprecision(10) << v;
        return os.str();
    };
    out << "param,value,V_mc,ci95,V_oracle,V_exact,oracle,agree,fringe_phase,baseline,runtime_s\n";
    for (const auto &r : t.rows) {
        out << r.label << ',' << num(r.value) << ',';
        if (r.monte_carlo) out << num(r.fit.V) << ',' << num(r.fit.ci95);
        else out << ',';
        out << ',' << (r.oracle.available ? num(r.oracle.V) : "") << ','
            << (r.oracle.V_exact ? num(*r.oracle.V_exact) : "") << ',' << r.oracle.name << ','
            << (r.agree ? "true" : "false") << ',';
        if (r.monte_carlo) out << num(r.fit.phi0) << ',' << num(r.fit.baseline);
        else out << ',';
        out << ',' << num(r.runtime) << '\n';
    }
}

/**
 * @brief Writes results.csv, results.json, fringe_<i>.csv per row and the
 *        two-column files V_mc.dat and V_oracle.dat against the swept value.
 */
inline void write_outputs(const std::filesystem::path &dir, const ResultTable &t) {
    std::filesystem::create_directories(dir);
    write_results_csv((dir / "results.csv").string(), t);
    {
        std::ofstream js(dir / "results.json");
        if (!js) throw Error("cannot open " + (dir / "results.json").string());
        js << to_json(t).dump(2) << '\n';
    }
    std::vector<double> x, vmc, vor;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto &r = t.rows[i];
        x.push_back(std::isfinite(r.value) ? r.value : static_cast<double>(i));
        vmc.push_back(r.fit.V);
        vor.push_back(r.oracle.V);
        if (r.monte_carlo) write_scan_csv((dir / ("fringe_" + std::to_string(i) + ".csv")).string(), r.scan);
    }
    const std::string xname = t.param.empty() ? "index" : t.param;
    if (!t.rows.empty() && t.rows.front().monte_carlo) write_columns((dir / "V_mc.dat").string(), x, vmc, xname + " V_mc");
    if (!t.rows.empty() && t.rows.front().oracle.available)
        write_columns((dir / "V_oracle.dat").string(), x, vor, xname + " V_oracle");
}

} // namespace ampint::scenario
