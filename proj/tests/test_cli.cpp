#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

namespace {
namespace fs = std::filesystem;

int run(const std::string &args) {
    const std::string cmd = std::string(AMPINT_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string &name, const std::string &text) {
    const auto p = fs::temp_directory_path() / name;
    std::ofstream(p) << text;
    return p;
}

const char *kQuantum = R"(scenario: quantum_cw
seed: 3
grid: {dt: 1ns, n: 65536}
quantum: {N: 2.0, coherence: 1.0}
lo: {amplitude: 1.0}
kernel: {type: delta}
scan: {points: 16, periods: 2}
)";
} // namespace

TEST(Cli, RunAndOracleSucceed) {
    const auto cfg = write_config("ampint_cli_ok.yaml", kQuantum);
    EXPECT_EQ(run("run " + cfg.string() + " --check"), 0);
    EXPECT_EQ(run("oracle " + cfg.string()), 0);
    const auto out = fs::temp_directory_path() / "ampint_cli_out";
    fs::remove_all(out);
    EXPECT_EQ(run("sweep " + cfg.string() + " --param quantum.N --values 1,10 --seed 5 --workers 2 --out " + out.string()),
              0);
    EXPECT_TRUE(fs::exists(out / "results.json"));
    fs::remove_all(out);
}

TEST(Cli, ValidationErrorsExitTwo) {
    const auto bad = write_config("ampint_cli_bad.yaml", std::string(kQuantum) + "colour: red\n");
    EXPECT_EQ(run("run " + bad.string()), 2);
    EXPECT_EQ(run("run /nonexistent.yaml"), 2);
    const auto good = write_config("ampint_cli_ok2.yaml", kQuantum);
    EXPECT_EQ(run("sweep " + good.string() + " --param quantum.colour --values 1"), 2);
    EXPECT_EQ(run("frobnicate"), 2);
}

// A long-regime closed form applied with the arm delay inside the pulse coherence:
// the Monte Carlo follows the true fringe, so --check reports the disagreement.
TEST(Cli, CheckFailureExitsThree) {
    const auto cfg = write_config("ampint_cli_check.yaml", R"(scenario: quasi_cw
seed: 1
grid: {dt: 0.25ns, n: 200000}
pulses: {shape: hann, width: 2ns, Tp: 20ns, correlation: triangular, M: 5, regime: long}
interferometer: {n: 2}
lo: {amplitude: 1.0}
kernel: {type: box, width: 4ns}
processing:
  - delay_add: 40ns
scan: {points: 16, periods: 2}
ensemble: {trials: 2}
)");
    EXPECT_EQ(run("run " + cfg.string()), 0);
    EXPECT_EQ(run("run " + cfg.string() + " --check"), 3);
}
