// Command-line harness: simulation, twin experiments, threshold sweeps,
// bound evaluation and the invariant/property validation suite.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>

#include "sqg/io.hpp"
#include "sqg/run_config.hpp"
#include "sqg/validation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kCodeVersion = "sqg-harness 1.0.0";

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

sqg::RunConfig load_config(const CliOptions& cli) {
    if (cli.config_path.empty())
        throw sqg::ConfigError("", "this subcommand requires --config <path>");
    sqg::RunConfig cfg = sqg::parse_config(cli.config_path);
    if (!cli.out_dir.empty()) cfg.output_dir = cli.out_dir;
    if (cli.seed) {
        cfg.experiment.seed_theta1 = *cli.seed;
        cfg.experiment.seed_theta2 = *cli.seed + 1000;
    }
    if (!cli.quiet) {
        json echo;
        echo["domain"] = {{"L", cfg.domain.L}, {"N", cfg.domain.N}};
        echo["params"] = {{"nu", cfg.params.nu},
                          {"alpha", cfg.params.alpha},
                          {"p", cfg.params.p},
                          {"l", cfg.params.l}};
        echo["constants"] = {{"c_infty", cfg.constants.c_infty},
                             {"c_thm", cfg.constants.c_thm},
                             {"c_linfty", cfg.constants.c_linfty}};
        echo["output"] = cfg.output_dir;
        std::cout << "config: " << echo.dump() << "\n";
    }
    return cfg;
}

json radii_json(const sqg::RunConfig& cfg) {
    const sqg::AbsorbingRadii radii = sqg::compute_Rinfty(
        cfg.domain, cfg.params.forcing, cfg.params.nu, cfg.params.alpha, cfg.params.p,
        cfg.constants);
    const sqg::DeterminingScale scale =
        sqg::compute_determining_Q(radii.Rinfty_sharp, cfg.params.nu, cfg.params.alpha,
                                   cfg.params.l, cfg.constants, cfg.domain.lambda0);
    json j;
    j["R2"] = radii.R2;
    j["Rinfty_sharp"] = radii.Rinfty_sharp;
    j["Rinfty_simplified"] = radii.Rinfty_simplified;
    j["F"] = radii.F;
    j["Lambda"] = scale.Lambda;
    j["Q"] = scale.Q;
    j["l_admissible"] = sqg::admissible_l(cfg.params.alpha, cfg.params.l);
    j["constants"] = {{"c_infty", cfg.constants.c_infty},
                      {"c_thm", cfg.constants.c_thm},
                      {"c_linfty", cfg.constants.c_linfty}};
    return j;
}

sqg::RunManifest start_manifest(const sqg::RunConfig& cfg) {
    sqg::RunManifest m;
    m.config_echo = cfg.echo;
    m.code_version = kCodeVersion;
    m.started_at = sqg::iso_timestamp_now();
    return m;
}

void finish_manifest(sqg::RunManifest& m, const fs::path& dir,
                     const std::vector<fs::path>& files) {
    m.finished_at = sqg::iso_timestamp_now();
    for (const auto& f : files) m.file_digests[f.filename().string()] = sqg::sha256_hex(f);
    sqg::write_manifest(dir / "manifest.json", m);
}

json sync_summary(const sqg::RunConfig& cfg, const sqg::TwinConfig& twin,
                  const sqg::SyncResult& r) {
    const sqg::AbsorbingRadii radii = sqg::compute_Rinfty(
        cfg.domain, cfg.params.forcing, cfg.params.nu, cfg.params.alpha, cfg.params.p,
        cfg.constants);
    sqg::CalibrationConstants c1 = cfg.constants;
    c1.c_thm = 1.0;
    const int theoretical_Q = sqg::compute_determining_Q(radii.Rinfty_sharp, cfg.params.nu,
                                                         cfg.params.alpha, cfg.params.l,
                                                         cfg.constants, cfg.domain.lambda0)
                                  .Q;
    const int theoretical_Q_c1 =
        sqg::compute_determining_Q(radii.Rinfty_sharp, cfg.params.nu, cfg.params.alpha,
                                   cfg.params.l, c1, cfg.domain.lambda0)
            .Q;
    const sqg::DecayDiagnostics diag = sqg::make_decay_diagnostics(r, twin);
    const sqg::GronwallReport grep = sqg::gronwall_check(diag, 1e-3);

    json j;
    j["Q"] = twin.Q;
    j["projection"] = sqg::to_string(twin.projection);
    j["theoretical_Q"] = theoretical_Q;
    j["theoretical_Q_c1"] = theoretical_Q_c1;
    j["Rinfty_sharp"] = radii.Rinfty_sharp;
    j["verdict"] = sqg::to_string(r.verdict);
    j["fitted_rate"] = r.fitted_rate;
    j["fit_r2"] = r.fit_r2;
    j["decades"] = r.decades;
    j["entry_time"] = r.entry_time;
    j["dt"] = r.dt;
    j["besov_at_slave_start"] = r.besov_w[r.slave_start];
    j["besov_final"] = r.besov_w.back();
    j["gronwall"] = {{"holds", grep.holds},
                     {"worst_margin", grep.worst_margin},
                     {"phi", diag.phi},
                     {"slack", 1e-3}};
    j["seeds"] = {twin.seed1, twin.seed2};
    return j;
}

int cmd_simulate(const CliOptions& cli) {
    const sqg::RunConfig cfg = load_config(cli);
    fs::create_directories(cfg.output_dir);
    sqg::RunManifest manifest = start_manifest(cfg);

    const sqg::ShellSystem shells(cfg.domain);
    const sqg::SpectralField theta0 = sqg::scaled_to_l2(
        sqg::random_field(cfg.domain, cfg.experiment.seed_theta1, cfg.init.shape),
        cfg.init.amplitude);
    const double theta0_l2 = sqg::lebesgue_norm(theta0, 2.0);

    std::vector<std::string> cols = {"t",           "l2_theta",    "linf_theta", "dissipation",
                                     "force_inner", "l2_envelope", "linfty_bound"};
    for (int q = -1; q <= shells.q_max(); ++q)
        cols.push_back("shell_q" + std::to_string(q) + "_norm");
    const fs::path csv_path = fs::path(cfg.output_dir) / "trajectory.csv";
    sqg::CsvWriter csv(csv_path, cols);

    const sqg::Force force(cfg.domain, cfg.params.forcing);
    const sqg::AbsorbingRadii radii = sqg::compute_Rinfty(
        cfg.domain, cfg.params.forcing, cfg.params.nu, cfg.params.alpha, cfg.params.p,
        cfg.constants);

    auto hook = [&](const sqg::SimState& s) {
        const double l2 = sqg::lebesgue_norm(s.theta, 2.0);
        const double linf = sqg::lebesgue_norm(s.theta, INFINITY);
        const double diss = sqg::lebesgue_norm(sqg::lambda_pow(s.theta, cfg.params.alpha / 2.0), 2.0);
        const double fi = force.empty() ? 0.0
                                        : sqg::inner_product(force.eval(cfg.domain, s.t), s.theta);
        const double env = sqg::l2_envelope(s.t, theta0_l2, cfg.domain, cfg.params.forcing,
                                            cfg.params.nu, cfg.params.alpha);
        const double lb = s.t > 0.0
                              ? sqg::linfty_bound(s.t, theta0_l2, radii.F, cfg.params.nu,
                                                  cfg.params.alpha, cfg.params.p, cfg.constants)
                              : INFINITY;
        std::vector<double> row = {s.t, l2, linf, diss * diss, fi, env, lb};
        for (const auto& [q, norm] : shells.shell_spectrum(s.theta, cfg.params.l))
            row.push_back(norm);
        csv.write_row(row);
    };

    sqg::SimulateOptions opts;
    opts.horizon = cfg.experiment.horizon;
    opts.dt_max = cfg.experiment.dt_max;
    opts.cadence = cfg.experiment.cadence;
    const sqg::TrajectorySummary traj = sqg::simulate(theta0, cfg.params, opts, hook);
    csv.close();

    const fs::path ckpt = fs::path(cfg.output_dir) / "theta_final.sqgf";
    sqg::write_checkpoint(ckpt, {traj.final_state.theta, traj.final_state.t, cfg.params.alpha,
                                 cfg.params.nu});
    const double budget = sqg::energy_budget(traj.energy, cfg.params.nu);

    json j;
    j["dt"] = traj.dt;
    j["steps"] = traj.final_state.step_count;
    j["energy_budget_residual"] = budget;
    j["final_l2"] = std::sqrt(traj.energy.back().l2_sq);
    const fs::path summary = fs::path(cfg.output_dir) / "summary.json";
    std::ofstream(summary) << j.dump(2) << "\n";
    finish_manifest(manifest, cfg.output_dir, {csv_path, ckpt, summary});
    if (!cli.quiet) std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_twin(const CliOptions& cli, bool perturbed) {
    const sqg::RunConfig cfg = load_config(cli);
    fs::create_directories(cfg.output_dir);
    sqg::RunManifest manifest = start_manifest(cfg);

    const sqg::TwinConfig twin = cfg.twin_config();
    sqg::SyncResult r;
    if (perturbed) {
        sqg::ForcePerturbation pert;
        pert.epsilon = cfg.experiment.epsilon;
        pert.gamma = cfg.experiment.gamma;
        pert.modes = cfg.experiment.pert_modes.empty()
                         ? std::vector<sqg::Mode>{{1, 1, {0.5, 0.0}}}
                         : cfg.experiment.pert_modes;
        r = sqg::force_perturbation_run(twin, pert);
    } else {
        r = sqg::twin_sync_run(twin);
    }

    const fs::path csv_path = fs::path(cfg.output_dir) / "sync.csv";
    sqg::write_sync_csv(csv_path, r);
    json j = sync_summary(cfg, twin, r);
    if (perturbed)
        j["perturbation"] = {{"epsilon", cfg.experiment.epsilon}, {"gamma", cfg.experiment.gamma}};
    const fs::path summary = fs::path(cfg.output_dir) / "summary.json";
    std::ofstream(summary) << j.dump(2) << "\n";
    finish_manifest(manifest, cfg.output_dir, {csv_path, summary});
    if (!cli.quiet) std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const CliOptions& cli) {
    const sqg::RunConfig cfg = load_config(cli);
    fs::create_directories(cfg.output_dir);
    sqg::RunManifest manifest = start_manifest(cfg);

    std::vector<int> Q_list = cfg.experiment.Q_list;
    if (Q_list.empty())
        throw sqg::ConfigError("experiment.Q_list", "sweep requires a nonempty ascending Q list");
    std::vector<std::uint64_t> seeds = cfg.experiment.seeds;
    if (seeds.empty()) seeds = {cfg.experiment.seed_theta1};

    const fs::path csv_path = fs::path(cfg.output_dir) / "sweep.csv";
    std::vector<sqg::SweepCsvRow> csv_rows;
    json j;
    j["per_seed"] = json::array();
    double c_lo = INFINITY, c_hi = 0.0;
    for (const std::uint64_t seed : seeds) {
        sqg::TwinConfig twin = cfg.twin_config();
        twin.seed1 = seed;
        twin.seed2 = seed + 1000;
        const sqg::SweepResult sw = sqg::threshold_sweep(twin, Q_list);
        for (const auto& row : sw.rows) csv_rows.push_back({seed, row});
        json js;
        js["seed"] = seed;
        js["Q_crit"] = sw.Q_crit;
        js["implied_c_thm"] = sw.implied_c_thm;
        js["theoretical_Q_c1"] = sw.theoretical_Q_c1;
        js["Rinfty_sharp"] = sw.Rinfty_sharp;
        js["monotonicity_violations"] = sw.monotonicity_violations;
        j["per_seed"].push_back(js);
        if (sw.implied_c_thm > 0.0) {
            c_lo = std::min(c_lo, sw.implied_c_thm);
            c_hi = std::max(c_hi, sw.implied_c_thm);
        }
    }
    sqg::write_sweep_csv(csv_path, csv_rows);
    j["implied_c_thm_spread"] = (c_hi > 0.0 && c_lo < INFINITY) ? c_hi / c_lo : 0.0;
    const fs::path summary = fs::path(cfg.output_dir) / "summary.json";
    std::ofstream(summary) << j.dump(2) << "\n";
    finish_manifest(manifest, cfg.output_dir, {csv_path, summary});
    if (!cli.quiet) std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_bounds(const CliOptions& cli) {
    const sqg::RunConfig cfg = load_config(cli);
    std::cout << radii_json(cfg).dump(2) << "\n";
    return 0;
}

int cmd_validate(const CliOptions& cli) {
    const bool quick = false;
    (void)cli;
    const auto results = sqg::run_validation_suite(quick);
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  (observed "
                  << sqg::format_double(r.observed) << ", threshold "
                  << sqg::format_double(r.threshold) << ")  " << r.details << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "validation suite: all checks passed"
                      : "validation suite: FAILURES present")
              << "\n";
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudospectral solver and determining-wavenumber harness for the "
                 "dissipative surface transport equation on the periodic square"};
    app.require_subcommand(1);
    CliOptions cli;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("--config", cli.config_path, "run configuration file");
        if (config_required) c->required();
        sub->add_option("--out", cli.out_dir, "output directory (overrides config)");
        sub->add_option("--seed", cli.seed, "override seed_theta1 (seed_theta2 = seed + 1000)");
        sub->add_flag("--quiet", cli.quiet, "suppress progress output");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "single trajectory with diagnostics");
    CLI::App* twin = app.add_subcommand("twin-sync", "low-mode slaved twin experiment");
    CLI::App* perturb = app.add_subcommand("perturb", "twin experiment with a decaying force gap");
    CLI::App* sweep = app.add_subcommand("sweep", "synchronization threshold sweep over Q");
    CLI::App* validate = app.add_subcommand("validate", "invariant and property suite");
    CLI::App* bounds = app.add_subcommand("bounds", "closed-form radii and determining scale");
    add_common(simulate, true);
    add_common(twin, true);
    add_common(perturb, true);
    add_common(sweep, true);
    add_common(validate, false);
    add_common(bounds, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message and usage
        return 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(cli);
        if (twin->parsed()) return cmd_twin(cli, false);
        if (perturb->parsed()) return cmd_twin(cli, true);
        if (sweep->parsed()) return cmd_sweep(cli);
        if (validate->parsed()) return cmd_validate(cli);
        if (bounds->parsed()) return cmd_bounds(cli);
    } catch (const sqg::ConfigError& e) {
        json err;
        err["error"] = e.what();
        err["key"] = e.key;
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        json err;
        err["error"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 2;
}
