#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sqg/io.hpp"
#include "sqg/run_config.hpp"

using namespace sqg;
namespace fs = std::filesystem;

namespace {

const char* kMinimalConfig = R"(
[domain]
N = 64

[params]
nu = 0.5
alpha = 1.5
p = 4.0
l = 4.0

[forcing]
modes = [[1, 0, 0.6, 0.0], [0, 1, 0.0, -0.6]]
modulation = constant
)";

fs::path temp_dir() {
    const fs::path p = fs::temp_directory_path() / "sqg_test_io";
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
    const RunConfig cfg = parse_config_text(kMinimalConfig);
    CHECK(cfg.domain.N == 64);
    CHECK(cfg.domain.L == 1.0);
    CHECK(cfg.constants.c_infty == 1.0);
    CHECK(cfg.constants.c_thm == 1.0);
    CHECK(cfg.experiment.dt_max == 1e-2);
    CHECK(cfg.experiment.cadence == 10);
    CHECK(cfg.params.forcing.modes.size() == 2);
    CHECK(cfg.params.forcing.modulation == ModulationKind::constant);
    CHECK_FALSE(cfg.echo.empty());
}

TEST_CASE("config validation errors carry the key path") {
    SUBCASE("alpha out of range names params.alpha") {
        std::string text = kMinimalConfig;
        text.replace(text.find("alpha = 1.5"), 11, "alpha = 2.5");
        try {
            parse_config_text(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.key == "params.alpha");
        }
    }
    SUBCASE("inadmissible l cites the rule") {
        std::string text = kMinimalConfig;
        text.replace(text.find("l = 4.0"), 7, "l = 3.0");
        try {
            parse_config_text(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.key == "params.l");
            CHECK(std::string(e.what()).find("alpha/(alpha-1)") != std::string::npos);
        }
    }
    SUBCASE("unknown keys are rejected, not ignored") {
        std::string text = kMinimalConfig;
        text += "\n[experiment]\nspinupp = 1.0\n";
        try {
            parse_config_text(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.key == "experiment.spinupp");
        }
    }
    SUBCASE("unknown sections are rejected") {
        std::string text = kMinimalConfig;
        text += "\n[experimnt]\nspinup = 1.0\n";
        CHECK_THROWS_AS(parse_config_text(text), ConfigError);
    }
    SUBCASE("odd N names domain.N") {
        std::string text = kMinimalConfig;
        text.replace(text.find("N = 64"), 6, "N = 63");
        try {
            parse_config_text(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.key == "domain.N");
        }
    }
    SUBCASE("forcing mode outside the dealias ball is rejected") {
        std::string text = kMinimalConfig;
        text.replace(text.find("[[1, 0,"), 7, "[[40, 0,");
        CHECK_THROWS_AS(parse_config_text(text), ConfigError);
    }
    SUBCASE("p = inf is accepted") {
        std::string text = kMinimalConfig;
        text.replace(text.find("p = 4.0"), 7, "p = inf");
        const RunConfig cfg = parse_config_text(text);
        CHECK(std::isinf(cfg.params.p));
    }
    SUBCASE("duplicate keys rejected") {
        std::string text = kMinimalConfig;
        text += "\n[params]\nnu = 0.7\n";  // params.nu again
        CHECK_THROWS_AS(parse_config_text(text), ConfigError);
    }
}

TEST_CASE("experiment section parsing") {
    std::string text = kMinimalConfig;
    text += R"(
[experiment]
seed_theta1 = 11
seed_theta2 = 12
spinup = 0.5
horizon = 2.0
cadence = 5
Q = auto
projection = sharp_truncation
Q_list = [0, 1, 2]
seeds = [1, 2, 3]
epsilon = 0.1
gamma = 2.0
pert_modes = [[1, 1, 0.5, 0.0]]

[constants]
c_infty = 0.25
)";
    const RunConfig cfg = parse_config_text(text);
    CHECK(cfg.experiment.seed_theta1 == 11);
    CHECK_FALSE(cfg.experiment.Q.has_value());
    CHECK(cfg.experiment.projection == ProjectionKind::sharp_truncation);
    CHECK(cfg.experiment.Q_list == std::vector<int>{0, 1, 2});
    CHECK(cfg.experiment.seeds.size() == 3);
    CHECK(cfg.constants.c_infty == 0.25);
    CHECK(cfg.resolved_Q() >= 0);

    const TwinConfig twin = cfg.twin_config();
    CHECK(twin.seed1 == 11);
    CHECK(twin.projection == ProjectionKind::sharp_truncation);
}

TEST_CASE("checkpoint round trip") {
    const fs::path dir = temp_dir();
    const Domain d = make_domain(1.0, 64);
    const SpectralField f = random_field(d, 5, {1.5, 1.0, 21.0});
    const fs::path path = dir / "field.sqgf";
    write_checkpoint(path, {f, 2.25, 1.5, 0.5});

    const Checkpoint cp = load_checkpoint(path);
    CHECK(cp.t == 2.25);
    CHECK(cp.alpha == 1.5);
    CHECK(cp.nu == 0.5);
    CHECK(cp.theta.domain().N == 64);
    const auto a = f.coeffs();
    const auto b = cp.theta.coeffs();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

    SUBCASE("truncated file is rejected without partial state") {
        const fs::path cut = dir / "cut.sqgf";
        std::ifstream in(path, std::ios::binary);
        std::ofstream out(cut, std::ios::binary);
        std::vector<char> buf(1024);
        in.read(buf.data(), buf.size());
        out.write(buf.data(), in.gcount());
        out.close();
        CHECK_THROWS(load_checkpoint(cut));
    }
    SUBCASE("bad magic is rejected") {
        const fs::path bad = dir / "bad.sqgf";
        std::ofstream out(bad, std::ios::binary);
        out << "NOPE" << std::string(64, '\0');
        out.close();
        CHECK_THROWS(load_checkpoint(bad));
    }
    SUBCASE("trailing bytes are rejected") {
        const fs::path pad = dir / "pad.sqgf";
        fs::copy_file(path, pad, fs::copy_options::overwrite_existing);
        std::ofstream out(pad, std::ios::binary | std::ios::app);
        out << "x";
        out.close();
        CHECK_THROWS(load_checkpoint(pad));
    }
}

TEST_CASE("csv round trip preserves doubles exactly") {
    const fs::path dir = temp_dir();
    const fs::path path = dir / "series.csv";
    std::vector<double> t, v;
    for (int i = 0; i < 40; ++i) {
        t.push_back(0.05 * i);
        v.push_back(3.7 * std::exp(-1.3 * 0.05 * i) * (1 + 1e-15 * i));
    }
    {
        CsvWriter w(path, {"t", "value"});
        for (std::size_t i = 0; i < t.size(); ++i) w.write_row({t[i], v[i]});
        w.close();
    }
    const CsvTable table = read_csv(path);
    CHECK(table.columns == std::vector<std::string>{"t", "value"});
    const auto t2 = table.column("t");
    const auto v2 = table.column("value");
    REQUIRE(t2.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(t2[i] == t[i]);  // exact: 17 significant digits round-trip
        CHECK(v2[i] == v[i]);
    }
    CHECK_THROWS_AS(table.column("missing"), std::invalid_argument);
}

TEST_CASE("digests and manifest") {
    const fs::path dir = temp_dir();
    const fs::path a = dir / "a.txt";
    std::ofstream(a) << "hello\n";
    const std::string d1 = sha256_hex(a);
    CHECK(d1.size() == 64);
    std::ofstream(a, std::ios::app) << "more\n";
    CHECK(sha256_hex(a) != d1);

    RunManifest m;
    m.config_echo = "x";
    m.code_version = "test";
    m.started_at = iso_timestamp_now();
    m.finished_at = iso_timestamp_now();
    m.file_digests["a.txt"] = d1;
    const fs::path mp = dir / "manifest.json";
    write_manifest(mp, m);
    CHECK(fs::exists(mp));
}
