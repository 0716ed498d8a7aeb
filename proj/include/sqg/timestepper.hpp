#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sqg/operators.hpp"

namespace sqg {

/// Physical and analytic parameters of the dissipative transport equation
///   d theta/dt + u . grad theta + nu Lambda^alpha theta = f,  u = riesz_perp(theta).
struct SqgParams {
    double nu = 1.0;       // viscosity, > 0
    double alpha = 1.5;    // dissipation order, in (1,2)
    double p = 4.0;        // force integrability exponent, > 2/alpha (may be inf)
    double l = 4.0;        // Besov exponent used by the experiments
    ForcingSpec forcing;

    void validate() const;
};

struct SimState {
    SpectralField theta;
    double t = 0.0;
    long step_count = 0;
};

struct StepFailure : std::runtime_error {
    explicit StepFailure(double time)
        : std::runtime_error("time step produced a non-finite state at t = " + std::to_string(time)),
          t(time) {}
    double t;
};

/// One integrating-factor RK4 stepper bound to a fixed domain, parameters and dt.
/// The dissipative multiplier is integrated exactly; advection and forcing are
/// treated explicitly at fourth order.
class IntegratingFactorRk4 {
  public:
    IntegratingFactorRk4(const Domain& d, const SqgParams& params, const Force& force, double dt);

    void advance(SimState& state) const;
    double dt() const { return dt_; }
    const Domain& domain() const { return domain_; }

  private:
    SpectralField nonlinear(const SpectralField& theta, double t) const;

    Domain domain_;
    SqgParams params_;
    Force force_;
    double dt_;
    std::vector<double> e_half_;  // exp(-nu m_alpha dt/2) per mode
    std::vector<double> e_full_;
};

/// CFL-limited step size: safety * (L/N) / max |u|, capped at dt_max.
double cfl_dt(const SimState& state, double dt_max, double safety = 0.5);

struct SimulateOptions {
    double horizon = 1.0;
    double dt_max = 1e-2;
    int cadence = 10;           // steps between diagnostic samples
    int cfl_check_every = 100;  // abort if the initial dt becomes CFL-unsafe
};

struct EnergySample {
    double t;
    double l2_sq;        // ||theta||_2^2
    double diss_sq;      // ||Lambda^{alpha/2} theta||_2^2
    double force_inner;  // (f, theta)
};

using DiagnosticHook = std::function<void(const SimState&)>;

struct TrajectorySummary {
    SimState final_state;
    double dt = 0.0;
    std::vector<EnergySample> energy;  // one entry per step boundary
};

/// Advance to t = horizon with a uniform dt chosen from the initial CFL limit
/// (rounded so that horizon is an exact multiple and samples stay uniform).
TrajectorySummary simulate(const SpectralField& initial, const SqgParams& params,
                           const SimulateOptions& opts, const DiagnosticHook& hook = {});

/// Maximum relative defect of the discrete energy balance
///   ||theta(t)||^2 - ||theta(0)||^2 + 2 nu int D - 2 int (f,theta) = 0
/// with trapezoidal quadrature over the per-step series.
double energy_budget(const std::vector<EnergySample>& series, double nu);

}  // namespace sqg
