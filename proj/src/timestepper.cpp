#include "sqg/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sqg {

void SqgParams::validate() const {
    if (!(nu > 0.0)) throw std::invalid_argument("params: viscosity nu must be positive");
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("params: dissipation order alpha must lie in (1,2)");
    if (!(p > 2.0 / alpha))
        throw std::invalid_argument("params: force exponent p must exceed 2/alpha");
    if (!(l >= 1.0)) throw std::invalid_argument("params: Besov exponent l must be >= 1");
}

IntegratingFactorRk4::IntegratingFactorRk4(const Domain& d, const SqgParams& params,
                                           const Force& force, double dt)
    : domain_(d), params_(params), force_(force), dt_(dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("stepper: dt must be positive");
    params_.validate();
    e_half_.resize(d.size());
    e_full_.resize(d.size());
    const double two_pi_over_L = 2.0 * M_PI / d.L;
    for (int i1 = 0; i1 < d.N; ++i1) {
        const int k1 = d.wavenumber(i1);
        for (int i2 = 0; i2 < d.N; ++i2) {
            const int k2 = d.wavenumber(i2);
            const double kk = std::hypot(double(k1), double(k2));
            const double m = std::pow(two_pi_over_L * kk, params_.alpha);
            e_half_[d.flat(i1, i2)] = std::exp(-params_.nu * m * 0.5 * dt);
            e_full_[d.flat(i1, i2)] = std::exp(-params_.nu * m * dt);
        }
    }
}

SpectralField IntegratingFactorRk4::nonlinear(const SpectralField& theta, double t) const {
    SpectralField n = advection(theta);
    auto nc = n.mutable_coeffs();
    for (auto& z : nc) z = -z;
    force_.accumulate(nc, t);
    return n;
}

void IntegratingFactorRk4::advance(SimState& state) const {
    const auto& d = domain_;
    const double t = state.t;
    const double h = dt_;
    const std::size_t n = d.size();

    const SpectralField& th = state.theta;
    SpectralField k1 = nonlinear(th, t);

    SpectralField stage(d);
    {   // stage 2: E (theta + h/2 k1)
        auto sc = stage.mutable_coeffs();
        const auto tc = th.coeffs();
        const auto kc = k1.coeffs();
        for (std::size_t i = 0; i < n; ++i) sc[i] = e_half_[i] * (tc[i] + 0.5 * h * kc[i]);
    }
    SpectralField k2 = nonlinear(stage, t + 0.5 * h);
    {   // stage 3: E theta + h/2 k2
        auto sc = stage.mutable_coeffs();
        const auto tc = th.coeffs();
        const auto kc = k2.coeffs();
        for (std::size_t i = 0; i < n; ++i) sc[i] = e_half_[i] * tc[i] + 0.5 * h * kc[i];
    }
    SpectralField k3 = nonlinear(stage, t + 0.5 * h);
    {   // stage 4: E^2 theta + h E k3
        auto sc = stage.mutable_coeffs();
        const auto tc = th.coeffs();
        const auto kc = k3.coeffs();
        for (std::size_t i = 0; i < n; ++i) sc[i] = e_full_[i] * tc[i] + h * e_half_[i] * kc[i];
    }
    SpectralField k4 = nonlinear(stage, t + h);

    auto tc = state.theta.mutable_coeffs();
    const auto c1 = k1.coeffs();
    const auto c2 = k2.coeffs();
    const auto c3 = k3.coeffs();
    const auto c4 = k4.coeffs();
    for (std::size_t i = 0; i < n; ++i) {
        tc[i] = e_full_[i] * tc[i] +
                (h / 6.0) * (e_full_[i] * c1[i] + 2.0 * e_half_[i] * (c2[i] + c3[i]) + c4[i]);
    }
    tc[0] = 0.0;  // mean mode stays pinned
    state.t = t + h;
    ++state.step_count;
}

double cfl_dt(const SimState& state, double dt_max, double safety) {
    const auto [u1, u2] = riesz_perp(state.theta);
    const PhysicalField p1 = to_physical(u1);
    const PhysicalField p2 = to_physical(u2);
    double umax = 0.0;
    for (std::size_t i = 0; i < p1.samples.size(); ++i)
        umax = std::max(umax, std::hypot(p1.samples[i], p2.samples[i]));
    const Domain& d = state.theta.domain();
    const double dt = safety * d.grid_spacing() / std::max(1e-30, umax);
    return std::min(dt, dt_max);
}

namespace {

EnergySample sample_energy(const SimState& s, const SqgParams& params, const Force& force) {
    const Domain& d = s.theta.domain();
    const double L2 = d.L * d.L;
    const double two_pi_over_L = 2.0 * M_PI / d.L;
    const auto c = s.theta.coeffs();
    double e = 0.0, diss = 0.0;
    for (int i1 = 0; i1 < d.N; ++i1) {
        const int k1 = d.wavenumber(i1);
        for (int i2 = 0; i2 < d.N; ++i2) {
            const int k2 = d.wavenumber(i2);
            const auto z = c[d.flat(i1, i2)];
            const double a2 = std::norm(z);
            if (a2 == 0.0) continue;
            const double kk = std::hypot(double(k1), double(k2));
            e += a2;
            diss += std::pow(two_pi_over_L * kk, params.alpha) * a2;
        }
    }
    double finner = 0.0;
    if (!force.empty()) {
        const SpectralField f = force.eval(d, s.t);
        finner = inner_product(f, s.theta);
    }
    return {s.t, L2 * e, L2 * diss, finner};
}

}  // namespace

TrajectorySummary simulate(const SpectralField& initial, const SqgParams& params,
                           const SimulateOptions& opts, const DiagnosticHook& hook) {
    if (opts.horizon < 0.0) throw std::invalid_argument("simulate: horizon must be nonnegative");
    params.validate();
    const Domain& d = initial.domain();
    const Force force(d, params.forcing);

    TrajectorySummary out{SimState{initial, 0.0, 0}, 0.0, {}};
    if (opts.horizon == 0.0) return out;

    // Uniform dt: CFL-limited, then rounded so horizon = nsteps * dt with
    // nsteps a multiple of the sample cadence (keeps sample spacing exact).
    const double dt_raw = cfl_dt(out.final_state, opts.dt_max);
    long nsteps = static_cast<long>(std::ceil(opts.horizon / dt_raw - 1e-12));
    const long cad = std::max(1, opts.cadence);
    nsteps = ((nsteps + cad - 1) / cad) * cad;
    const double dt = opts.horizon / static_cast<double>(nsteps);
    out.dt = dt;

    IntegratingFactorRk4 stepper(d, params, force, dt);
    SimState& s = out.final_state;
    out.energy.reserve(nsteps + 1);
    out.energy.push_back(sample_energy(s, params, force));
    if (hook) hook(s);

    for (long n = 1; n <= nsteps; ++n) {
        stepper.advance(s);
        const EnergySample es = sample_energy(s, params, force);
        if (!std::isfinite(es.l2_sq)) throw StepFailure(s.t);
        out.energy.push_back(es);
        if (n % cad == 0 && hook) hook(s);
        if (opts.cfl_check_every > 0 && n % opts.cfl_check_every == 0) {
            if (cfl_dt(s, opts.dt_max) < 0.99 * dt) throw StepFailure(s.t);
        }
    }
    return out;
}

double energy_budget(const std::vector<EnergySample>& series, double nu) {
    if (series.empty()) throw std::invalid_argument("energy_budget: empty series");
    const double e0 = series.front().l2_sq;
    const double scale = std::max(e0, 1e-300);
    double int_diss = 0.0, int_force = 0.0, worst = 0.0;
    for (std::size_t n = 1; n < series.size(); ++n) {
        const double dt = series[n].t - series[n - 1].t;
        int_diss += 0.5 * dt * (series[n].diss_sq + series[n - 1].diss_sq);
        int_force += 0.5 * dt * (series[n].force_inner + series[n - 1].force_inner);
        const double defect =
            series[n].l2_sq - e0 + 2.0 * nu * int_diss - 2.0 * int_force;
        worst = std::max(worst, std::abs(defect) / scale);
    }
    return worst;
}

}  // namespace sqg
