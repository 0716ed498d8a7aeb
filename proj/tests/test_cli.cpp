#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sqg/experiments.hpp"
#include "sqg/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunOutput {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

RunOutput run_cli(const std::string& args) {
    const fs::path dir = fs::temp_directory_path() / "sqg_cli_capture";
    fs::create_directories(dir);
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd =
        std::string(SQG_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, slurp(out), slurp(err)};
}

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path dir = fs::temp_directory_path() / "sqg_cli_cfg";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

const char* kBoundsConfig = R"(
[domain]
N = 64

[params]
nu = 0.5
alpha = 1.5
p = 4.0
l = 4.0

[forcing]
modes = [[1, 0, 0.5, 0.0]]
)";

const char* kQuickTwinConfig = R"(
[domain]
N = 64

[params]
nu = 0.5
alpha = 1.5
p = 4.0
l = 4.0

[forcing]
modes = [[1, 0, 0.6, 0.0], [0, 1, 0.0, -0.6]]

[initial]
band = [1, 3]
decay = 2.0
amplitude = 0.6

[experiment]
seed_theta1 = 101
seed_theta2 = 202
spinup = 0.4
horizon = 1.6
cadence = 5
Q = 1
)";

}  // namespace

TEST_CASE("unknown subcommand prints usage and exits 2") {
    const RunOutput r = run_cli("frobnicate");
    CHECK(r.exit_code == 2);
}

TEST_CASE("bounds subcommand reproduces the worked example") {
    const fs::path cfg = write_config("bounds.toml", kBoundsConfig);
    const RunOutput r = run_cli("bounds --config " + cfg.string() + " --quiet");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(std::abs(j["Rinfty_sharp"].get<double>() - 0.7470) <= 1e-3);
    CHECK(std::abs(j["R2"].get<double>() - 0.3565) <= 1e-3);
    CHECK(j["l_admissible"].get<bool>());
    CHECK(j["Q"].get<int>() >= 0);
}

TEST_CASE("config errors produce machine-readable JSON and exit 1") {
    std::string bad = kBoundsConfig;
    bad.replace(bad.find("alpha = 1.5"), 11, "alpha = 2.5");
    const fs::path cfg = write_config("bad.toml", bad);
    const RunOutput r = run_cli("bounds --config " + cfg.string());
    CHECK(r.exit_code == 1);
    const json j = json::parse(r.err);
    CHECK(j["key"] == "params.alpha");
}

TEST_CASE("unknown config key is rejected with its path") {
    std::string bad = kBoundsConfig;
    bad += "\n[params]\nnuu = 1.0\n";
    const fs::path cfg = write_config("typo.toml", bad);
    const RunOutput r = run_cli("bounds --config " + cfg.string());
    CHECK(r.exit_code == 1);
    const json j = json::parse(r.err);
    CHECK(j["key"] == "params.nuu");
}

TEST_CASE("simulate writes trajectory, checkpoint and reproducible manifest") {
    std::string text = kQuickTwinConfig;
    text.replace(text.find("horizon = 1.6"), 13, "horizon = 0.4");
    const fs::path cfg = write_config("sim.toml", text);
    const fs::path out1 = fs::temp_directory_path() / "sqg_cli_sim1";
    const fs::path out2 = fs::temp_directory_path() / "sqg_cli_sim2";
    fs::remove_all(out1);
    fs::remove_all(out2);

    const RunOutput r1 =
        run_cli("simulate --config " + cfg.string() + " --out " + out1.string() + " --quiet");
    REQUIRE(r1.exit_code == 0);
    CHECK(fs::exists(out1 / "trajectory.csv"));
    CHECK(fs::exists(out1 / "manifest.json"));

    const sqg::Checkpoint cp = sqg::load_checkpoint(out1 / "theta_final.sqgf");
    CHECK(cp.theta.domain().N == 64);
    CHECK(cp.t == doctest::Approx(0.4).epsilon(1e-12));

    const RunOutput r2 =
        run_cli("simulate --config " + cfg.string() + " --out " + out2.string() + " --quiet");
    REQUIRE(r2.exit_code == 0);
    CHECK(sqg::sha256_hex(out1 / "trajectory.csv") == sqg::sha256_hex(out2 / "trajectory.csv"));
    CHECK(sqg::sha256_hex(out1 / "theta_final.sqgf") == sqg::sha256_hex(out2 / "theta_final.sqgf"));

    // the manifest records the digests it wrote
    const json m = json::parse(slurp(out1 / "manifest.json"));
    CHECK(m["files"]["trajectory.csv"] == sqg::sha256_hex(out1 / "trajectory.csv"));
}

TEST_CASE("twin-sync outputs and CSV fit fidelity") {
    const fs::path cfg = write_config("twin.toml", kQuickTwinConfig);
    const fs::path out = fs::temp_directory_path() / "sqg_cli_twin";
    fs::remove_all(out);
    const RunOutput r =
        run_cli("twin-sync --config " + cfg.string() + " --out " + out.string() + " --quiet");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(slurp(out / "summary.json"));
    CHECK(j["verdict"] == "synchronized");

    // re-parsing the decay series from the CSV reproduces the in-memory fit
    const sqg::CsvTable table = sqg::read_csv(out / "sync.csv");
    const auto t = table.column("t");
    const auto besov = table.column("besov_w");
    const double start = j["besov_at_slave_start"].get<double>();
    std::size_t slave_idx = 0;
    while (slave_idx < besov.size() && besov[slave_idx] != start) ++slave_idx;
    REQUIRE(slave_idx < besov.size());  // 17-digit CSV round-trips doubles exactly

    double theta_scale = 0.0;
    for (double v : table.column("linf_theta1")) theta_scale = std::max(theta_scale, v);
    const double floor_fit = std::max(1e-14 * start, 1e-13 * theta_scale);
    const double tmin = t[slave_idx] + 0.2;  // default fit_settle
    std::vector<double> wt, wv;
    for (std::size_t i = slave_idx; i < t.size(); ++i) {
        if (t[i] < tmin) continue;
        if (besov[i] <= floor_fit) break;
        wt.push_back(t[i]);
        wv.push_back(besov[i]);
    }
    const sqg::FitResult refit = sqg::fit_decay_rate(wt, wv);
    CHECK(refit.rate == doctest::Approx(j["fitted_rate"].get<double>()).epsilon(1e-12));
    CHECK(refit.r2 == doctest::Approx(j["fit_r2"].get<double>()).epsilon(1e-12));
}

TEST_CASE("seed override changes the run deterministically") {
    const fs::path cfg = write_config("twin2.toml", kQuickTwinConfig);
    const fs::path outA = fs::temp_directory_path() / "sqg_cli_seedA";
    const fs::path outB = fs::temp_directory_path() / "sqg_cli_seedB";
    const fs::path outC = fs::temp_directory_path() / "sqg_cli_seedC";
    for (const auto& p : {outA, outB, outC}) fs::remove_all(p);
    REQUIRE(run_cli("twin-sync --config " + cfg.string() + " --out " + outA.string() +
                    " --seed 7 --quiet")
                .exit_code == 0);
    REQUIRE(run_cli("twin-sync --config " + cfg.string() + " --out " + outB.string() +
                    " --seed 7 --quiet")
                .exit_code == 0);
    REQUIRE(run_cli("twin-sync --config " + cfg.string() + " --out " + outC.string() +
                    " --seed 8 --quiet")
                .exit_code == 0);
    CHECK(sqg::sha256_hex(outA / "sync.csv") == sqg::sha256_hex(outB / "sync.csv"));
    CHECK(sqg::sha256_hex(outA / "sync.csv") != sqg::sha256_hex(outC / "sync.csv"));
}
