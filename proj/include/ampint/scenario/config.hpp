#pragma once

// Scenario configuration: YAML with unit-suffixed quantities and strict keys.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "ampint/core/error.hpp"
#include "ampint/core/grid.hpp"
#include "ampint/core/units.hpp"
#include "ampint/fields/types.hpp"
#include "ampint/homodyne/kernel.hpp"
#include "ampint/homodyne/noise.hpp"

namespace ampint::scenario {

enum class Kind { orthogonal_pol_cw, unbalanced_cw, pulsed_dual_lo, quasi_cw, single_photon, quantum_cw };

inline const char *to_string(Kind k) {
    switch (k) {
    case Kind::orthogonal_pol_cw: return "orthogonal_pol_cw";
    case Kind::unbalanced_cw: return "unbalanced_cw";
    case Kind::pulsed_dual_lo: return "pulsed_dual_lo";
    case Kind::quasi_cw: return "quasi_cw";
    case Kind::single_photon: return "single_photon";
    case Kind::quantum_cw: return "quantum_cw";
    }
    return "?";
}

struct KernelSpec {
    std::string type = "delta"; ///< delta | box | exponential
    double width = 0.0;

    ResponseKernel build(double dt) const {
        if (type == "delta") return ResponseKernel::delta(dt);
        if (type == "box") return ResponseKernel::box(width, dt);
        return ResponseKernel::exponential(width, dt);
    }
};

struct Stage {
    enum class Kind { box_average, delay_add };
    Kind kind;
    double value = 0.0;
};

struct LoSpec {
    double amplitude = 1.0;
    double phase = 0.0;
};

struct FieldSpec {
    CoherenceKind model = CoherenceKind::lorentzian;
    double Tc = 0.0;
    double I0 = 1.0;

    CoherenceModel coherence() const { return {model, Tc, I0}; }
};

struct PulseSpec {
    PulseShape shape;
    double Tp = 0.0;
    double first = 0.0; ///< centre of the first pulse; 0 places it half a period in
    double I0 = 1.0;
    PulseCorrelation correlation = PulseCorrelation::independent(1.0);
    std::string regime = "auto"; ///< auto | short | long (quasi_cw oracle)
};

struct ScenarioConfig {
    Kind kind = Kind::unbalanced_cw;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    SampleGrid grid;
    FieldSpec field;
    std::optional<PulseSpec> pulses;
    double delta_T = 0.0;
    double theta = 0.0;
    LoSpec lo, lo_x, lo_y;
    KernelSpec kernel;
    NoiseModel noise;
    std::vector<Stage> processing;
    bool direct_intensity = false;
    std::size_t scan_points = 16;
    double scan_periods = 2.0;
    double T_av = 0.0;
    std::size_t trials = 1;
    bool common_random_numbers = false; ///< reuse one field record for every scan phase
    double coherence = 1.0;   ///< |gamma12| for orthogonal_pol_cw
    bool single_arm = false;  ///< orthogonal_pol_cw control: y LO off
    double N = 1.0, loss = 1.0; ///< quantum_cw
    YAML::Node source;

    PulseTrainSpec pulse_train() const {
        PulseTrainSpec s;
        s.shape = pulses->shape;
        s.Tp = pulses->Tp;
        s.first_pulse = pulses->first > 0.0 ? pulses->first : 0.5 * pulses->Tp;
        s.n_pulses = 0; // as many as fit
        s.correlation = pulses->correlation;
        return s;
    }
};

namespace detail {

/// A YAML mapping whose keys must all be consumed.
class Table {
public:
    Table(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
        present_ = node_.IsDefined() && !node_.IsNull();
        if (present_ && !node_.IsMap()) throw ValidationError(path_, "must be a table");
    }

    bool has(const std::string &key) {
        if (!present_) return false;
        const bool h = static_cast<bool>(get(key));
        if (h) used_.insert(key);
        return h;
    }

    std::string field(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

    std::string text(const std::string &key) {
        if (!has(key)) throw ValidationError(field(key), "required field missing");
        const auto n = get(key);
        if (!n.IsScalar()) throw ValidationError(field(key), "must be a scalar");
        return n.Scalar();
    }

    std::string text_or(const std::string &key, const std::string &def) { return has(key) ? text(key) : def; }

    template <class F> double quantity(const std::string &key, F parse) {
        const auto s = text(key);
        try {
            return parse(s);
        } catch (const ValidationError &e) {
            throw ValidationError(field(key), e.message());
        }
    }
    double time(const std::string &key) { return quantity(key, units::parse_time); }
    double time_or(const std::string &key, double def) { return has(key) ? time(key) : def; }
    double number(const std::string &key) { return quantity(key, units::parse_plain); }
    double number_or(const std::string &key, double def) { return has(key) ? number(key) : def; }
    double angle_or(const std::string &key, double def) { return has(key) ? quantity(key, units::parse_angle) : def; }

    std::size_t count(const std::string &key) {
        const double v = number(key);
        if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) throw ValidationError(field(key), "must be a nonnegative integer");
        return static_cast<std::size_t>(v);
    }
    std::size_t count_or(const std::string &key, std::size_t def) { return has(key) ? count(key) : def; }

    bool flag_or(const std::string &key, bool def) {
        if (!has(key)) return def;
        const auto s = text(key);
        if (s == "true" || s == "yes" || s == "on") return true;
        if (s == "false" || s == "no" || s == "off") return false;
        throw ValidationError(field(key), "must be true or false");
    }

    YAML::Node raw(const std::string &key) {
        has(key);
        return present_ ? get(key) : YAML::Node();
    }

    Table sub(const std::string &key) { return Table(has(key) ? get(key) : YAML::Node(), field(key)); }

    /// Throws on keys that were never looked at.
    void finish() const {
        if (!present_) return;
        for (const auto &kv : node_) {
            const auto k = kv.first.as<std::string>();
            if (!used_.count(k)) throw ValidationError(field(k), "unknown key");
        }
    }


private:
    YAML::Node get(const std::string &key) const {
        const YAML::Node &n = node_;
        return n[key];
    }

    YAML::Node node_;
    bool present_ = false;
    std::string path_;
    std::set<std::string> used_;
};

inline Kind parse_kind(const std::string &s) {
    for (Kind k : {Kind::orthogonal_pol_cw, Kind::unbalanced_cw, Kind::pulsed_dual_lo, Kind::quasi_cw,
                   Kind::single_photon, Kind::quantum_cw})
        if (s == to_string(k)) return k;
    throw ValidationError("scenario", "unknown scenario '" + s + "'");
}

inline LoSpec parse_lo(Table t) {
    LoSpec lo;
    lo.amplitude = t.number_or("amplitude", 1.0);
    lo.phase = t.angle_or("phase", 0.0);
    require(lo.amplitude >= 0.0, t.field("amplitude"), "must be nonnegative");
    t.finish();
    return lo;
}

inline PulseCorrelation parse_correlation(Table &t, double I0) {
    if (!t.has("correlation")) return PulseCorrelation::independent(I0);
    const auto node = t.raw("correlation");
    if (node.IsSequence()) {
        std::vector<cplx> lags;
        for (const auto &v : node) lags.emplace_back(units::parse_plain(v.Scalar()) * I0, 0.0);
        require(!lags.empty() && std::abs(lags[0].real() - I0) <= 1e-12 * I0, t.field("correlation"),
                "first entry is the relative I_0 and must be 1");
        return PulseCorrelation::from_one_sided(std::move(lags));
    }
    const auto kind = t.text("correlation");
    if (kind == "independent") return PulseCorrelation::independent(I0);
    if (kind == "triangular") return PulseCorrelation::triangular(t.count("M"), I0);
    throw ValidationError(t.field("correlation"), "expected independent, triangular, or a list of relative I_q");
}

inline PulseSpec parse_pulses(Table t) {
    PulseSpec p;
    const auto shape = t.text_or("shape", "hann");
    if (shape == "hann") p.shape.kind = PulseShape::Kind::hann;
    else if (shape == "gaussian") p.shape.kind = PulseShape::Kind::gaussian;
    else if (shape == "box") p.shape.kind = PulseShape::Kind::box;
    else throw ValidationError(t.field("shape"), "expected hann, gaussian or box");
    p.shape.width = t.time("width");
    p.Tp = t.time("Tp");
    p.first = t.time_or("first", 0.0);
    p.I0 = t.number_or("I0", 1.0);
    require(p.I0 > 0.0, t.field("I0"), "must be positive");
    try {
        p.correlation = parse_correlation(t, p.I0);
    } catch (const ValidationError &e) {
        if (e.field().rfind("pulses", 0) == 0) throw;
        throw ValidationError(t.field("correlation"), e.message());
    }
    p.regime = t.text_or("regime", "auto");
    require(p.regime == "auto" || p.regime == "short" || p.regime == "long", t.field("regime"),
            "expected auto, short or long");
    t.finish();
    return p;
}

inline std::vector<Stage> parse_processing(const YAML::Node &node) {
    std::vector<Stage> out;
    if (!node.IsDefined() || node.IsNull()) return out;
    if (!node.IsSequence()) throw ValidationError("processing", "must be a list of stages");
    for (std::size_t i = 0; i < node.size(); ++i) {
        const std::string path = "processing." + std::to_string(i);
        const auto &st = node[i];
        if (!st.IsMap() || st.size() != 1) throw ValidationError(path, "each stage is a single key: box_average or delay_add");
        const auto key = st.begin()->first.as<std::string>();
        const auto val = st.begin()->second;
        if (!val.IsScalar()) throw ValidationError(path + "." + key, "must be a time");
        Stage s;
        if (key == "box_average") s.kind = Stage::Kind::box_average;
        else if (key == "delay_add") s.kind = Stage::Kind::delay_add;
        else throw ValidationError(path + "." + key, "unknown stage");
        try {
            s.value = units::parse_time(val.Scalar());
        } catch (const ValidationError &e) {
            throw ValidationError(path + "." + key, e.message());
        }
        require(s.value > 0.0, path + "." + key, "must be positive");
        out.push_back(s);
    }
    return out;
}

// Top-level sections each scenario accepts besides the common ones.
inline const std::set<std::string> &scenario_sections(Kind k) {
    static const std::map<Kind, std::set<std::string>> m{
        {Kind::orthogonal_pol_cw, {"field", "lo_x", "lo_y", "polarization"}},
        {Kind::unbalanced_cw, {"field", "interferometer", "lo", "detection"}},
        {Kind::pulsed_dual_lo, {"pulses", "interferometer", "lo_x", "lo_y"}},
        {Kind::quasi_cw, {"pulses", "interferometer", "lo", "detection"}},
        {Kind::single_photon, {"interferometer", "lo_x", "lo_y"}},
        {Kind::quantum_cw, {"quantum", "lo"}},
    };
    return m.at(k);
}

} // namespace detail

/**
 * @brief Validates a parsed YAML document into a ScenarioConfig.
 *
 * Every error names the offending key, e.g. "kernel.width: required field missing".
 */
inline ScenarioConfig parse_config(const YAML::Node &doc) {
    using detail::Table;
    if (!doc || !doc.IsMap()) throw ValidationError("config", "top level must be a table");
    ScenarioConfig c;
    c.source = YAML::Clone(doc);
    Table top(doc, "");
    c.kind = detail::parse_kind(top.text("scenario"));
    const auto &extra = detail::scenario_sections(c.kind);
    static const std::set<std::string> common{"scenario", "seed", "workers", "grid",     "kernel",
                                              "noise",    "scan", "ensemble", "processing"};
    for (const auto &kv : doc) {
        const auto k = kv.first.as<std::string>();
        if (!common.count(k) && !extra.count(k))
            throw ValidationError(k, std::string("unknown key for scenario ") + to_string(c.kind));
    }

    {
        const double s = top.number_or("seed", 1.0);
        require(s >= 0.0 && s == std::floor(s) && s < 1.8e19, "seed", "must be a nonnegative integer");
        c.seed = top.has("seed") ? std::stoull(top.text("seed")) : 1;
        c.workers = static_cast<unsigned>(top.count_or("workers", 0));
    }

    {
        auto g = top.sub("grid");
        c.grid.dt = g.time("dt");
        require(c.grid.dt > 0.0, "grid.dt", "must be positive");
        if (c.kind == Kind::single_photon) {
            c.grid.n = 0;
        } else if (g.has("n")) {
            c.grid.n = g.count("n");
            require(!g.has("duration"), "grid.duration", "give either n or duration");
        } else {
            c.grid.n = static_cast<std::size_t>(std::llround(g.time("duration") / c.grid.dt));
        }
        g.finish();
        if (c.kind != Kind::single_photon) c.grid.validate();
    }

    {
        auto k = top.sub("kernel");
        c.kernel.type = k.text_or("type", "delta");
        require(c.kernel.type == "delta" || c.kernel.type == "box" || c.kernel.type == "exponential", "kernel.type",
                "expected delta, box or exponential");
        if (c.kernel.type != "delta") c.kernel.width = k.time("width");
        k.finish();
        try {
            (void)c.kernel.build(c.grid.dt);
        } catch (const ValidationError &e) {
            throw ValidationError(c.kernel.type == "delta" ? "grid.dt" : "kernel.width", e.message());
        }
    }

    {
        auto n = top.sub("noise");
        const auto mode = n.text_or("mode", c.kind == Kind::quantum_cw ? "vacuum" : "off");
        if (mode == "off") {
            c.noise = NoiseModel::off();
        } else if (mode == "vacuum") {
            c.noise = NoiseModel::vacuum(n.has("bandwidth") ? n.quantity("bandwidth", units::parse_frequency)
                                                            : 0.5 / c.grid.dt);
        } else {
            throw ValidationError("noise.mode", "expected off or vacuum");
        }
        n.finish();
        if (c.kind != Kind::single_photon) {
            try {
                c.noise.validate(c.grid);
            } catch (const ValidationError &e) {
                throw ValidationError("noise.bandwidth", e.message());
            }
        }
    }

    {
        auto s = top.sub("scan");
        c.scan_points = s.count_or("points", 16);
        c.scan_periods = s.number_or("periods", 2.0);
        c.T_av = s.time_or("T_av", 0.0);
        s.finish();
        require(c.scan_points >= 8, "scan.points", "need at least 8 phase points");
        require(c.scan_periods >= 1.5, "scan.periods", "scan must cover at least 1.5 fringe periods");
    }

    {
        auto e = top.sub("ensemble");
        c.trials = e.count_or("trials", c.kind == Kind::single_photon ? 100000 : 1);
        c.common_random_numbers = e.flag_or("common_random_numbers", false);
        e.finish();
        require(c.trials >= 1, "ensemble.trials", "must be at least 1");
    }

    c.processing = detail::parse_processing(top.raw("processing"));
    if (c.kind == Kind::single_photon || c.kind == Kind::quantum_cw)
        require(c.processing.empty(), "processing", std::string("not supported for ") + to_string(c.kind));

    if (extra.count("field")) {
        auto f = top.sub("field");
        const auto model = f.text_or("model", "lorentzian");
        if (model == "lorentzian") c.field.model = CoherenceKind::lorentzian;
        else if (model == "gaussian") c.field.model = CoherenceKind::gaussian;
        else if (model == "phase_diffusion") c.field.model = CoherenceKind::phase_diffusion;
        else throw ValidationError("field.model", "expected lorentzian, gaussian or phase_diffusion");
        c.field.Tc = f.time("Tc");
        c.field.I0 = f.number_or("I0", 1.0);
        f.finish();
        try {
            c.field.coherence().validate();
        } catch (const ValidationError &e) {
            throw ValidationError(e.field(), e.message());
        }
        require(c.grid.dt <= c.field.Tc / 20.0 * (1.0 + 1e-9), "grid.dt", "must resolve the coherence time (dt <= Tc/20)");
    }

    if (extra.count("pulses")) {
        c.pulses = detail::parse_pulses(top.sub("pulses"));
        const double r = c.pulses->Tp / c.grid.dt;
        require(std::abs(r - std::round(r)) <= 1e-6 * r, "pulses.Tp", "must be a whole number of samples");
    }

    if (extra.count("interferometer")) {
        auto i = top.sub("interferometer");
        if (c.kind == Kind::quasi_cw && i.has("n")) {
            require(!i.has("delta_T"), "interferometer.delta_T", "give either n or delta_T");
            c.delta_T = static_cast<double>(i.count("n")) * c.pulses->Tp;
        } else {
            c.delta_T = i.time("delta_T");
        }
        c.theta = i.angle_or("theta", 0.0);
        i.finish();
        require(c.delta_T >= 0.0, "interferometer.delta_T", "must be nonnegative");
        (void)snap_delay(c.delta_T, c.grid.dt, "interferometer.delta_T");
        if (c.kind == Kind::quasi_cw) {
            const double n = c.delta_T / c.pulses->Tp;
            require(std::abs(n - std::round(n)) <= 1e-9 * std::max(1.0, n), "interferometer.delta_T",
                    "must be a whole number of pulse periods");
        }
    }

    if (extra.count("lo")) c.lo = detail::parse_lo(top.sub("lo"));
    if (extra.count("lo_x")) c.lo_x = detail::parse_lo(top.sub("lo_x"));
    if (extra.count("lo_y")) c.lo_y = detail::parse_lo(top.sub("lo_y"));

    if (extra.count("detection")) {
        const auto d = top.text_or("detection", "homodyne");
        require(d == "homodyne" || d == "direct_intensity", "detection", "expected homodyne or direct_intensity");
        c.direct_intensity = d == "direct_intensity";
    }

    if (extra.count("polarization")) {
        auto p = top.sub("polarization");
        c.coherence = p.number_or("coherence", 1.0);
        c.theta = p.angle_or("theta", 0.0);
        const auto arms = p.text_or("arms", "both");
        require(arms == "both" || arms == "x_only", "polarization.arms", "expected both or x_only");
        c.single_arm = arms == "x_only";
        p.finish();
        require(c.coherence >= 0.0 && c.coherence <= 1.0, "polarization.coherence", "must lie in [0, 1]");
    }

    if (extra.count("quantum")) {
        auto q = top.sub("quantum");
        c.N = q.number("N");
        c.coherence = q.number_or("coherence", 1.0);
        c.loss = q.number_or("loss", 1.0);
        q.finish();
        require(c.N >= 0.0, "quantum.N", "must be nonnegative");
        require(c.coherence >= 0.0 && c.coherence <= 1.0, "quantum.coherence", "must lie in [0, 1]");
        require(c.loss > 0.0 && c.loss <= 1.0, "quantum.loss", "must lie in (0, 1]");
        require(c.noise.mode == NoiseModel::Mode::vacuum, "noise.mode", "quantum_cw needs vacuum noise");
    }

    if (c.kind == Kind::single_photon) {
        const double r = c.delta_T / c.grid.dt;
        require(std::abs(r - std::round(r)) <= 1e-6 * std::max(1.0, r), "interferometer.delta_T",
                "must be a whole number of samples");
    }
    return c;
}

inline YAML::Node load_yaml(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open " + path);
    try {
        return YAML::Load(in);
    } catch (const YAML::Exception &e) {
        throw ValidationError("config", std::string("YAML syntax error: ") + e.what());
    }
}

inline ScenarioConfig load_config(const std::string &path) { return parse_config(load_yaml(path)); }

/**
 * @brief Copy of the document with one numeric field replaced.
 *
 * Path components are map keys or list indices; a stage name such as
 * "processing.delay_add" selects the first list entry holding that key.
 */
inline YAML::Node with_value(const YAML::Node &doc, const std::string &path, const std::string &value) {
    YAML::Node root = YAML::Clone(doc);
    std::vector<std::string> parts;
    std::stringstream ss(path);
    for (std::string p; std::getline(ss, p, '.');) parts.push_back(p);
    auto unknown = [&] { return ValidationError("--param", "unknown parameter path '" + path + "'"); };
    if (parts.empty()) throw unknown();

    // reset() rebinds a handle; plain assignment would overwrite the node it refers to
    YAML::Node cur;
    cur.reset(root);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto &key = parts[i];
        YAML::Node next;
        if (cur.IsSequence()) {
            const bool numeric = !key.empty() && std::all_of(key.begin(), key.end(), [](unsigned char ch) { return std::isdigit(ch); });
            if (numeric) {
                const auto idx = std::stoul(key);
                if (idx >= cur.size()) throw unknown();
                next.reset(cur[idx]);
            } else {
                bool found = false;
                for (std::size_t j = 0; j < cur.size() && !found; ++j) {
                    const YAML::Node item = cur[j];
                    if (item.IsMap() && item[key]) {
                        next.reset(cur[j][key]);
                        found = true;
                    }
                }
                if (!found) throw unknown();
            }
        } else if (cur.IsMap()) {
            const YAML::Node &cc = cur;
            if (!cc[key]) throw unknown();
            next.reset(cur[key]);
        } else {
            throw unknown();
        }
        if (i + 1 == parts.size()) {
            if (!next.IsScalar()) throw unknown();
            next = value;
            return root;
        }
        cur.reset(next);
    }
    throw unknown();
}

} // namespace ampint::scenario
