#pragma once

#include <string>
#include <vector>

#include "sqg/experiments.hpp"

namespace sqg {

struct CheckResult {
    std::string name;
    bool pass = false;
    double observed = 0.0;   // the measured quantity the threshold applies to
    double threshold = 0.0;
    std::string details;
};

namespace checks {

CheckResult fourier_round_trip(int n_fields = 100);
CheckResult parseval_consistency(int n_fields = 50);
CheckResult partition_of_unity(int n_radii = 10000);
CheckResult lp_reconstruction(int n_fields = 100);
CheckResult lp_telescoping(int n_fields = 20);
CheckResult bernstein_ratios(int n_fields = 200);
CheckResult shell_coercivity(int n_fields = 200);
CheckResult coercivity_single_mode();
CheckResult advection_oracle_equivalence(int n_fields = 20);
CheckResult advection_closed_forms();
CheckResult energy_flux_neutrality(int n_fields = 20);
CheckResult riesz_properties(int n_fields = 20);
CheckResult lambda_semigroup(int n_fields = 20);
CheckResult analytic_decay();
CheckResult energy_budget_single_mode();
CheckResult energy_budget_forced();
CheckResult determining_scale_doubling();

}  // namespace checks

/// The full invariant/property suite behind the `validate` subcommand.
/// quick = true runs reduced ensemble sizes.
std::vector<CheckResult> run_validation_suite(bool quick = false);

/// Shell field built from 1-3 randomly placed, randomly weighted translates of
/// the shell kernel; saturates the dyadic inequalities uniformly in q.
SpectralField shell_kernel_translates(const ShellSystem& shells, int q, std::uint64_t seed);

/// Random-phase field supported on shell q.
SpectralField shell_random_phase(const ShellSystem& shells, int q, std::uint64_t seed);

/// l * integral(u Lambda^alpha u |u|^{l-2}) / (lambda_q^alpha ||u||_l^l).
double coercivity_ratio(const ShellSystem& shells, const SpectralField& u_q, int q, double alpha,
                        double l);

}  // namespace sqg
