#pragma once

#include <optional>
#include <string>

#include "sqg/experiments.hpp"

namespace sqg {

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& key_path, const std::string& message)
        : std::runtime_error(key_path.empty() ? message : key_path + ": " + message),
          key(key_path) {}
    std::string key;
};

struct ExperimentConfig {
    std::uint64_t seed_theta1 = 1;
    std::uint64_t seed_theta2 = 2;
    double spinup = 1.0;
    double horizon = 3.0;
    int cadence = 10;
    double dt_max = 1e-2;
    std::optional<int> Q;  // empty = derive from the determining-scale formula
    ProjectionKind projection = ProjectionKind::smooth_lp;
    double epsilon = 0.0;  // force perturbation amplitude
    double gamma = 1.0;    // force perturbation decay rate
    std::vector<Mode> pert_modes;
    std::vector<int> Q_list;
    std::vector<std::uint64_t> seeds;
    double sync_tol = 1e-6;
    double desync_tol = 1e-1;
    double fit_settle = 0.2;
};

struct RunConfig {
    Domain domain;
    SqgParams params;
    InitSpec init;
    ExperimentConfig experiment;
    CalibrationConstants constants;
    std::string output_dir = "out";
    std::string echo;  // raw config text, recorded in manifests

    /// Twin configuration assembled from this run config; Q resolved either
    /// from the explicit setting or from the determining-scale formula.
    TwinConfig twin_config() const;
    int resolved_Q() const;
};

/// Strict parser: TOML-style sections of key = value lines, numeric lists and
/// nested numeric lists in brackets. Unknown keys or sections are errors, and
/// every module precondition is validated before any compute.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

}  // namespace sqg
