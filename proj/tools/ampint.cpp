// ampint command-line front end: run, sweep and oracle subcommands.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ampint/scenario/output.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kDisagree = 3;
constexpr int kRuntime = 1;

void print_table(const ampint::scenario::ResultTable &t) {
    std::printf("%s%s%s\n", t.scenario.c_str(), t.param.empty() ? "" : "  sweep ", t.param.c_str());
    std::printf("%-14s %9s %9s %9s %9s  %-20s %s\n", "value", "V_mc", "ci95", "V_oracle", "V_exact", "oracle", "agree");
    for (const auto &r : t.rows) {
        auto f = [](bool ok, double v) {
            char b[32];
            if (ok) std::snprintf(b, sizeof b, "%9.4f", v);
            else std::snprintf(b, sizeof b, "%9s", "-");
            return std::string(b);
        };
        std::printf("%-14s %s %s %s %s  %-20s %s\n", r.label.empty() ? "-" : r.label.c_str(),
                    f(r.monte_carlo, r.fit.V).c_str(), f(r.monte_carlo, r.fit.ci95).c_str(),
                    f(r.oracle.available, r.oracle.V).c_str(), f(r.oracle.V_exact.has_value(), r.oracle.V_exact.value_or(0)).c_str(),
                    r.oracle.name.c_str(), r.monte_carlo ? (r.agree ? "yes" : "NO") : "-");
        for (const auto &w : r.warnings) std::printf("  warning: %s\n", w.c_str());
        for (const auto &n : r.oracle.notes) std::printf("  note: %s\n", n.c_str());
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Monte-Carlo simulator and analytic oracles for amplitude interference"};
    app.set_version_flag("--version", AMPINT_VERSION);
    app.require_subcommand(1);

    std::string config, param, values, out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    bool check = false;

    auto common = [&](CLI::App *sub) {
        sub->add_option("config", config, "scenario YAML file")->required();
        sub->add_option("--seed", seed, "master seed (overrides the config)");
        sub->add_option("--workers", workers, "worker threads (0 = all cores)");
        sub->add_option("--out", out, "output directory for CSV/JSON/.dat files");
        sub->add_flag("--check", check, "exit with code 3 if any point disagrees with its oracle");
    };
    auto *run = app.add_subcommand("run", "run one scenario");
    common(run);
    auto *sw = app.add_subcommand("sweep", "run a scenario for several values of one parameter");
    common(sw);
    sw->add_option("--param", param, "dotted path of a numeric field, e.g. processing.box_average")->required();
    sw->add_option("--values", values, "comma list or start:stop:count, units allowed")->required();
    auto *orc = app.add_subcommand("oracle", "print the oracle prediction only (no Monte Carlo)");
    common(orc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }

    namespace sc = ampint::scenario;
    try {
        sc::RunOptions opt;
        opt.seed = seed;
        opt.workers = workers;
        opt.monte_carlo = !orc->parsed();
        sc::ResultTable table;
        if (sw->parsed()) {
            const auto doc = sc::load_yaml(config);
            table = sc::sweep(doc, param, sc::expand_values(values), opt);
        } else {
            table = sc::run_scenario(sc::load_config(config), opt);
        }
        print_table(table);
        if (!out.empty()) sc::write_outputs(out, table);
        if (check && !table.all_agree()) {
            std::fprintf(stderr, "oracle agreement check failed\n");
            return kDisagree;
        }
        return kOk;
    } catch (const ampint::ValidationError &e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kValidation;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntime;
    }
}
