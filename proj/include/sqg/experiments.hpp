#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqg/bounds.hpp"
#include "sqg/littlewood_paley.hpp"

namespace sqg {

enum class ProjectionKind { smooth_lp, sharp_truncation };
enum class Verdict { synchronized, not_synchronized, inconclusive };

std::string to_string(ProjectionKind k);
std::string to_string(Verdict v);

struct InitSpec {
    SpectrumShape shape{2.0, 1.0, 2.0};
    double amplitude = 1.0;  // target L2 norm
};

struct TwinConfig {
    Domain domain;
    SqgParams params;
    CalibrationConstants constants;
    int Q = 0;  // slaving shell index; -1 disables replacement entirely
    ProjectionKind projection = ProjectionKind::smooth_lp;
    std::uint64_t seed1 = 1;
    std::uint64_t seed2 = 2;
    InitSpec init;
    double spinup = 1.0;
    double horizon = 3.0;
    int cadence = 10;
    double dt_max = 1e-2;
    double sync_tol = 1e-6;    // synchronized when final/start <= this
    double desync_tol = 1e-1;  // not synchronized when final/start >= this
    double fit_settle = 0.2;   // time after slaving start excluded from the fit
};

/// Optional perturbation of the second twin's force: f2 = f1 + eps e^{-gamma t} g'.
struct ForcePerturbation {
    double epsilon = 0.0;
    double gamma = 0.0;
    std::vector<Mode> modes;
};

struct SyncResult {
    std::vector<double> times;
    std::vector<double> besov_w;      // ||theta1 - theta2||_{B^0_{l,l}}
    std::vector<double> l2_w;
    std::vector<double> linf_theta1;
    std::vector<double> linf_theta2;
    std::vector<double> force_gap;    // ||Lambda^{-alpha(1-1/l)}(f1-f2)||_{B^0_{l,l}}
    std::vector<std::vector<double>> shells_w;  // per sample, index 0 <-> q = -1

    int q_max = 0;
    std::size_t slave_start = 0;      // first sample index with slaving active
    double entry_time = -1.0;         // first time ||theta1||_inf <= Rinfty; -1 if never
    double fitted_rate = 0.0;
    double fit_r2 = 0.0;
    double decades = 0.0;             // log10(besov at slave start / final besov)
    Verdict verdict = Verdict::inconclusive;
    double dt = 0.0;
};

SyncResult twin_sync_run(const TwinConfig& cfg);
SyncResult force_perturbation_run(const TwinConfig& cfg, const ForcePerturbation& pert);

struct FitResult {
    double rate = 0.0;
    double r2 = 0.0;
};

/// Least-squares slope of ln(values) against times, negated. Values are
/// truncated at the floor 1e-14 * values.front(); at least 10 positive samples
/// must remain.
FitResult fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values);

struct DecayDiagnostics {
    std::vector<double> times;
    std::vector<double> xi;   // ||w||_{B^0_{l,l}}^l
    std::vector<double> psi;  // source term series
    double phi = 0.0;         // 0.5 (2 pi lambda0)^alpha C nu, C = 1
};

/// Assemble the decay-inequality data for a recorded run, using the measured
/// force gap and low-mode shell content as the source term.
DecayDiagnostics make_decay_diagnostics(const SyncResult& r, const TwinConfig& cfg);

struct GronwallReport {
    bool holds = false;
    double worst_margin = 0.0;  // max over samples of (dxi/dt + phi xi - psi)
    double scale = 0.0;         // max xi, the slack reference
};

/// Checks (xi_{n+1}-xi_n)/dt + phi xi_n <= psi_n + slack * max(xi) on a
/// uniformly sampled series.
GronwallReport gronwall_check(const DecayDiagnostics& diag, double slack);

struct SweepRow {
    int Q = 0;
    Verdict verdict = Verdict::inconclusive;
    double fitted_rate = 0.0;
    double fit_r2 = 0.0;
    double decades = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    int Q_crit = -1;
    int theoretical_Q_c1 = 0;   // from c_thm = 1
    double implied_c_thm = 0.0;
    double Rinfty_sharp = 0.0;
    std::vector<int> monotonicity_violations;  // Q values that desynced above Q_crit
};

/// Runs twin_sync_run for every Q in ascending Q_list (concurrently, capped by
/// SQG_THREADS); Q_crit is the smallest synchronizing Q.
SweepResult threshold_sweep(const TwinConfig& base, const std::vector<int>& Q_list);

int worker_count();  // SQG_THREADS or hardware concurrency

}  // namespace sqg
