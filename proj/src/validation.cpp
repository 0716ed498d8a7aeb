#include "sqg/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace sqg {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

double rel_err(const SpectralField& a, const SpectralField& b) {
    const double nb = lebesgue_norm(b, 2.0);
    return lebesgue_norm(a - b, 2.0) / std::max(nb, 1e-300);
}

}  // namespace

SpectralField shell_kernel_translates(const ShellSystem& shells, int q, std::uint64_t seed) {
    const Domain& d = shells.domain();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> count(1, 3);
    std::uniform_real_distribution<double> amp(0.5, 2.0);
    std::uniform_real_distribution<double> pos(0.0, d.L);
    const int n = count(rng);
    std::vector<double> A(n), x1(n), x2(n);
    for (int j = 0; j < n; ++j) {
        A[j] = amp(rng);
        x1[j] = pos(rng);
        x2[j] = pos(rng);
    }
    SpectralField f(d);
    auto c = f.mutable_coeffs();
    const double two_pi_over_L = 2.0 * M_PI / d.L;
    for (int i1 = 0; i1 < d.N; ++i1) {
        const int k1 = d.wavenumber(i1);
        for (int i2 = 0; i2 < d.N; ++i2) {
            const int k2 = d.wavenumber(i2);
            if ((k1 == 0 && k2 == 0) || !d.inside_dealias(k1, k2)) continue;
            const double w = ShellSystem::phi(q, std::hypot(double(k1), double(k2)));
            if (w == 0.0) continue;
            std::complex<double> z = 0.0;
            for (int j = 0; j < n; ++j)
                z += A[j] * std::polar(1.0, -two_pi_over_L * (k1 * x1[j] + k2 * x2[j]));
            c[d.flat(i1, i2)] = w * z;
        }
    }
    SQG_DEBUG_VALIDATE(f);
    return f;
}

SpectralField shell_random_phase(const ShellSystem& shells, int q, std::uint64_t seed) {
    const Domain& d = shells.domain();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    SpectralField f(d);
    for (int k1 = 0; k1 <= d.dealias_radius; ++k1) {
        for (int k2 = (k1 == 0 ? 1 : -d.dealias_radius); k2 <= d.dealias_radius; ++k2) {
            if (!d.inside_dealias(k1, k2)) continue;
            const double w = ShellSystem::phi(q, std::hypot(double(k1), double(k2)));
            if (w == 0.0) continue;
            f.set_coeff_pair(k1, k2, std::polar(w, phase(rng)));
        }
    }
    SQG_DEBUG_VALIDATE(f);
    return f;
}

double coercivity_ratio(const ShellSystem& shells, const SpectralField& u_q, int q, double alpha,
                        double l) {
    const Domain& d = shells.domain();
    const PhysicalField u = to_physical(u_q);
    const PhysicalField v = to_physical(lambda_pow(u_q, alpha));
    const double cell = d.grid_spacing() * d.grid_spacing();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < u.samples.size(); ++i) {
        const double a = std::abs(u.samples[i]);
        const double w = (l == 2.0) ? 1.0 : std::pow(a, l - 2.0);
        num += u.samples[i] * v.samples[i] * w;
        den += std::pow(a, l);
    }
    num *= l * cell;
    den *= cell * std::pow(shells.lambda_q(q), alpha);
    return num / std::max(den, 1e-300);
}

namespace checks {

CheckResult fourier_round_trip(int n_fields) {
    const Domain d = make_domain(1.0, 64);
    double worst = 0.0;
    for (int s = 0; s < n_fields; ++s) {
        const SpectralField f = random_field(d, 1000 + s, {1.5, 1.0, double(d.dealias_radius)});
        const SpectralField g = to_spectral(to_physical(f));
        worst = std::max(worst, rel_err(g, f));
    }
    return {"fourier_round_trip", worst <= 1e-13, worst, 1e-13,
            fmt(worst) + " max relative error over " + std::to_string(n_fields) + " fields"};
}

CheckResult parseval_consistency(int n_fields) {
    const Domain d = make_domain(2.0, 64);
    double worst = 0.0;
    for (int s = 0; s < n_fields; ++s) {
        const SpectralField f = random_field(d, 2000 + s, {1.0, 1.0, double(d.dealias_radius)});
        const double grid = lebesgue_norm(f, 2.0);
        double sum = 0.0;
        for (const auto& z : f.coeffs()) sum += std::norm(z);
        const double parseval = std::sqrt(d.L * d.L * sum);
        worst = std::max(worst, std::abs(grid * grid - parseval * parseval) /
                                    std::max(parseval * parseval, 1e-300));
    }
    return {"parseval_consistency", worst <= 1e-12, worst, 1e-12,
            "max |grid^2 - parseval^2| / ||u||_2^2"};
}

CheckResult partition_of_unity(int n_radii) {
    const Domain d = make_domain(1.0, 128);
    const ShellSystem shells(d);
    double worst = 0.0;
    for (int i = 0; i <= n_radii; ++i) {
        const double r = d.dealias_radius * double(i) / n_radii;
        double sum = 0.0;
        for (int q = -1; q <= shells.q_max(); ++q) sum += ShellSystem::phi(q, r);
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return {"partition_of_unity", worst <= 1e-12, worst, 1e-12,
            "max |sum phi_q - 1| on " + std::to_string(n_radii) + " radii"};
}

CheckResult lp_reconstruction(int n_fields) {
    const Domain d = make_domain(1.0, 128);
    const ShellSystem shells(d);
    double worst = 0.0;
    for (int s = 0; s < n_fields; ++s) {
        const SpectralField f = random_field(d, 3000 + s, {1.0, 1.0, double(d.dealias_radius)});
        SpectralField sum(d);
        for (int q = -1; q <= shells.q_max(); ++q) sum = sum + shells.shell_project(f, q);
        worst = std::max(worst, rel_err(sum, f));
    }
    return {"lp_reconstruction", worst <= 1e-12, worst, 1e-12,
            "max relative reconstruction error over " + std::to_string(n_fields) + " fields"};
}

CheckResult lp_telescoping(int n_fields) {
    const Domain d = make_domain(1.0, 128);
    const ShellSystem shells(d);
    double worst = 0.0;
    for (int s = 0; s < n_fields; ++s) {
        const SpectralField f = random_field(d, 4000 + s, {1.0, 1.0, double(d.dealias_radius)});
        for (int Q = -1; Q <= shells.q_max(); ++Q) {
            SpectralField sum(d);
            for (int q = -1; q <= Q; ++q) sum = sum + shells.shell_project(f, q);
            const SpectralField diff = shells.lowpass(f, Q) - sum;
            double cmax = 0.0, fmax = 0.0;
            for (const auto& z : diff.coeffs()) cmax = std::max(cmax, std::abs(z));
            for (const auto& z : f.coeffs()) fmax = std::max(fmax, std::abs(z));
            worst = std::max(worst, cmax / std::max(fmax, 1e-300));
        }
    }
    return {"lp_telescoping", worst <= 1e-13, worst, 1e-13,
            "max telescoped coefficient residual (relative)"};
}

CheckResult bernstein_ratios(int n_fields) {
    const Domain d = make_domain(1.0, 256);
    const ShellSystem shells(d);
    int q_hi = 0;
    while ((1 << (q_hi + 2)) <= d.dealias_radius) ++q_hi;  // untruncated shells only

    struct Pair { double s, r; };
    const Pair pairs[] = {{2.0, INFINITY}, {2.0, 4.0}, {4.0, INFINITY}};
    double global_max = 0.0;
    double worst_spread = 1.0;
    for (const auto& pr : pairs) {
        std::vector<double> per_q;
        for (int q = 0; q <= q_hi; ++q) {
            double mx = 0.0;
            for (int s = 0; s < n_fields; ++s) {
                const SpectralField u = (s % 2 == 0)
                                            ? shell_kernel_translates(shells, q, 5000 + 31 * q + s)
                                            : shell_random_phase(shells, q, 6000 + 37 * q + s);
                const double nr = lebesgue_norm(u, pr.r);
                const double ns = lebesgue_norm(u, pr.s);
                const double lam = std::pow(shells.lambda_q(q), 2.0 * (1.0 / pr.s - 1.0 / pr.r));
                mx = std::max(mx, nr / (lam * ns));
            }
            per_q.push_back(mx);
            global_max = std::max(global_max, mx);
        }
        const double spread = *std::max_element(per_q.begin(), per_q.end()) /
                              *std::min_element(per_q.begin(), per_q.end());
        worst_spread = std::max(worst_spread, spread);
    }
    const bool pass = global_max <= 10.0 && worst_spread < 2.0;
    return {"bernstein_ratios", pass, global_max, 10.0,
            "max ratio " + fmt(global_max) + ", cross-shell spread " + fmt(worst_spread) +
                " (must be < 2)"};
}

CheckResult shell_coercivity(int n_fields) {
    const Domain d = make_domain(1.0, 256);
    const ShellSystem shells(d);
    int q_hi = 0;
    while ((1 << (q_hi + 2)) <= d.dealias_radius) ++q_hi;

    const double ls[] = {2.0, 4.0, 6.0};
    const double alphas[] = {1.2, 1.5, 1.8};
    double min_ratio = INFINITY;
    for (int q = 0; q <= q_hi; ++q) {
        std::vector<SpectralField> ensemble;
        ensemble.reserve(n_fields);
        for (int s = 0; s < n_fields; ++s)
            ensemble.push_back(s % 2 == 0 ? shell_kernel_translates(shells, q, 7000 + 41 * q + s)
                                          : shell_random_phase(shells, q, 8000 + 43 * q + s));
        for (double l : ls)
            for (double alpha : alphas)
                for (const auto& u : ensemble)
                    min_ratio = std::min(min_ratio, coercivity_ratio(shells, u, q, alpha, l));
    }
    return {"shell_coercivity", min_ratio > 0.0, min_ratio, 0.0,
            "min dyadic coercivity ratio " + fmt(min_ratio) + " (must stay positive)"};
}

CheckResult coercivity_single_mode() {
    const Domain d = make_domain(1.0, 128);
    const ShellSystem shells(d);
    double worst = 0.0;
    const double ls[] = {2.0, 4.0, 6.0};
    const double alphas[] = {1.2, 1.5, 1.8};
    struct Probe { int k1, k2, q; };
    const Probe probes[] = {{1, 0, 0}, {2, 0, 1}, {3, 0, 1}, {4, 0, 2}, {8, 0, 3}, {3, 4, 2}};
    for (const auto& pb : probes) {
        const SpectralField u = from_modes(d, {Mode{pb.k1, pb.k2, {0.5, 0.0}}});
        const double kk = std::hypot(double(pb.k1), double(pb.k2));
        for (double l : ls) {
            for (double alpha : alphas) {
                const double got = coercivity_ratio(shells, u, pb.q, alpha, l);
                const double want =
                    l * std::pow(2.0 * M_PI * kk / (shells.lambda_q(pb.q) * d.L), alpha);
                worst = std::max(worst, std::abs(got - want) / want);
            }
        }
    }
    return {"coercivity_single_mode", worst <= 1e-10, worst, 1e-10,
            "max relative deviation from the analytic multiplier value"};
}

CheckResult advection_oracle_equivalence(int n_fields) {
    const Domain d = make_domain(1.0, 64);
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> kpick(-12, 12);
    std::uniform_real_distribution<double> apick(-1.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < n_fields; ++s) {
        std::vector<Mode> modes;
        while (modes.size() < 12) {
            const int k1 = kpick(rng), k2 = kpick(rng);
            if ((k1 == 0 && k2 == 0) || !d.inside_dealias(k1, k2)) continue;
            modes.push_back({k1, k2, {apick(rng), apick(rng)}});
        }
        const SpectralField theta = from_modes(d, std::span<const Mode>(modes.data(), modes.size()));
        const SpectralField fast = advection(theta);
        const SpectralField exact = advection_oracle(theta);
        worst = std::max(worst, rel_err(fast, exact));
    }
    return {"advection_oracle_equivalence", worst <= 1e-11, worst, 1e-11,
            "max relative discrepancy over " + std::to_string(n_fields) + " sparse fields"};
}

CheckResult advection_closed_forms() {
    const Domain d = make_domain(1.0, 64);
    // sin(2 pi x1) + cos(2 pi x2) is a steady datum: u . grad theta = 0.
    const SpectralField theta1 = from_modes(
        d, {Mode{1, 0, {0.0, -0.5}}, Mode{0, 1, {0.5, 0.0}}});
    const double z1 = lebesgue_norm(advection(theta1), 2.0) /
                      std::max(lebesgue_norm(lambda_pow(theta1, 1.0), 2.0), 1e-300);
    // cos(2 pi x1) + cos(4 pi x2) advects to 2 pi sin(2 pi x1) sin(4 pi x2).
    const SpectralField theta2 = from_modes(d, {Mode{1, 0, {0.5, 0.0}}, Mode{0, 2, {0.5, 0.0}}});
    const SpectralField expected =
        from_modes(d, {Mode{1, 2, {-M_PI / 2.0, 0.0}}, Mode{1, -2, {M_PI / 2.0, 0.0}}});
    const double z2 = rel_err(advection(theta2), expected);
    const double worst = std::max(z1, z2);
    return {"advection_closed_forms", worst <= 1e-11, worst, 1e-11,
            "steady-datum residual " + fmt(z1) + ", two-mode form error " + fmt(z2)};
}

CheckResult energy_flux_neutrality(int n_fields) {
    const Domain d = make_domain(1.0, 64);
    double worst = 0.0;
    for (int s = 0; s < n_fields; ++s) {
        const SpectralField theta = random_field(d, 11000 + s, {1.5, 1.0, double(d.dealias_radius)});
        const double flux = std::abs(inner_product(advection(theta), theta));
        const double scale =
            lebesgue_norm(theta, 2.0) * lebesgue_norm(lambda_pow(theta, 1.0), 2.0);
        worst = std::max(worst, flux / std::max(scale, 1e-300));
    }
    return {"energy_flux_neutrality", worst <= 1e-12, worst, 1e-12,
            "max |(u.grad theta, theta)| / (||theta||_2 ||Lambda theta||_2)"};
}

CheckResult riesz_properties(int n_fields) {
    const Domain d = make_domain(1.0, 64);
    double worst = 0.0;
    for (int s = 0; s < n_fields; ++s) {
        const SpectralField theta = random_field(d, 12000 + s, {1.0, 1.0, 10.0});
        const auto [u1, u2] = riesz_perp(theta);
        // modewise isometry
        double iso = 0.0;
        const auto ct = theta.coeffs();
        const auto c1 = u1.coeffs();
        const auto c2 = u2.coeffs();
        for (std::size_t i = 0; i < ct.size(); ++i) {
            const double lhs = std::norm(c1[i]) + std::norm(c2[i]);
            iso = std::max(iso, std::abs(lhs - std::norm(ct[i])));
        }
        // spectral divergence residual
        const SpectralField div = partial_derivative(u1, 1) + partial_derivative(u2, 2);
        const double dres = lebesgue_norm(div, 2.0) /
                            std::max(lebesgue_norm(lambda_pow(theta, 1.0), 2.0), 1e-300);
        worst = std::max(worst, std::max(iso, dres));
    }
    return {"riesz_properties", worst <= 1e-13, worst, 1e-13,
            "max of modewise isometry defect and relative divergence residual"};
}

CheckResult lambda_semigroup(int n_fields) {
    const Domain d = make_domain(1.0, 64);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> expo(-2.0, 2.0);
    double worst = 0.0;
    for (int s = 0; s < n_fields; ++s) {
        const SpectralField theta = random_field(d, 13000 + s, {1.0, 1.0, 15.0});
        const double a = expo(rng), b = expo(rng);
        worst = std::max(worst, rel_err(lambda_pow(lambda_pow(theta, a), b), lambda_pow(theta, a + b)));
    }
    return {"lambda_semigroup", worst <= 1e-13, worst, 1e-13,
            "max relative semigroup defect for exponents in [-2,2]"};
}

CheckResult analytic_decay() {
    const Domain d = make_domain(1.0, 64);
    SqgParams params;
    params.nu = 1.0;
    params.alpha = 1.5;
    params.p = 4.0;
    params.l = 4.0;
    const SpectralField theta0 = from_modes(d, {Mode{1, 0, {0.5, 0.0}}});
    SimulateOptions opts;
    opts.horizon = 1.0;
    opts.dt_max = 1e-3;
    const TrajectorySummary traj = simulate(theta0, params, opts);
    const double amp = std::exp(-std::pow(2.0 * M_PI, 1.5) * 1.0);
    const SpectralField expected = amp * theta0;
    const double err = rel_err(traj.final_state.theta, expected);
    return {"analytic_decay", err <= 1e-8, err, 1e-8,
            "relative error vs e^{-(2 pi)^{3/2} t} cos(2 pi x1) at t = 1"};
}

CheckResult energy_budget_single_mode() {
    const Domain d = make_domain(1.0, 64);
    SqgParams params;
    params.nu = 1.0;
    params.alpha = 1.5;
    params.p = 4.0;
    params.l = 4.0;
    const SpectralField theta0 = from_modes(d, {Mode{1, 0, {0.5, 0.0}}});
    SimulateOptions opts;
    opts.horizon = 1.0;
    opts.dt_max = 1e-3;
    const TrajectorySummary traj = simulate(theta0, params, opts);
    const double res = energy_budget(traj.energy, params.nu);
    return {"energy_budget_single_mode", res <= 1e-8, res, 1e-8,
            "max relative defect of the discrete energy balance (unforced)"};
}

CheckResult energy_budget_forced() {
    const Domain d = make_domain(1.0, 128);
    SqgParams params;
    params.nu = 0.1;
    params.alpha = 1.5;
    params.p = 4.0;
    params.l = 4.0;
    params.forcing.modes = {Mode{1, 0, {0.15, 0.0}}, Mode{0, 1, {0.0, -0.15}}};
    const SpectralField theta0 = scaled_to_l2(random_field(d, 42, {2.0, 1.0, 2.0}), 0.5);
    SimulateOptions opts;
    opts.horizon = 5.0;
    opts.dt_max = 1e-3;
    const TrajectorySummary traj = simulate(theta0, params, opts);
    const double res = energy_budget(traj.energy, params.nu);
    return {"energy_budget_forced", res <= 1e-5, res, 1e-5,
            "max relative defect of the discrete energy balance (forced, N=128, horizon 5)"};
}

CheckResult determining_scale_doubling() {
    const CalibrationConstants c;
    double worst = 0.0;
    for (double alpha : {1.2, 1.5, 1.8}) {
        for (double R : {0.3, 2.0, 17.0}) {
            const double l = 2.0 * alpha / (alpha - 1.0);  // safely admissible
            const double a = compute_determining_Q(R, 0.5, alpha, l, c, 1.0).Lambda;
            const double b = compute_determining_Q(2.0 * R, 0.5, alpha, l, c, 1.0).Lambda;
            const double want = std::pow(2.0, 1.0 / (alpha - 1.0));
            worst = std::max(worst, std::abs(b / a - want) / want);
        }
    }
    return {"determining_scale_doubling", worst <= 1e-13, worst, 1e-13,
            "relative defect of Lambda(2R)/Lambda(R) = 2^{1/(alpha-1)}"};
}

}  // namespace checks

std::vector<CheckResult> run_validation_suite(bool quick) {
    const int big = quick ? 40 : 200;
    const int mid = quick ? 20 : 100;
    std::vector<CheckResult> out;
    out.push_back(checks::fourier_round_trip(mid));
    out.push_back(checks::parseval_consistency(quick ? 10 : 50));
    out.push_back(checks::partition_of_unity());
    out.push_back(checks::lp_reconstruction(mid));
    out.push_back(checks::lp_telescoping(quick ? 5 : 20));
    out.push_back(checks::bernstein_ratios(big));
    out.push_back(checks::shell_coercivity(quick ? 20 : big));
    out.push_back(checks::coercivity_single_mode());
    out.push_back(checks::advection_oracle_equivalence(20));
    out.push_back(checks::advection_closed_forms());
    out.push_back(checks::energy_flux_neutrality(quick ? 5 : 20));
    out.push_back(checks::riesz_properties(quick ? 5 : 20));
    out.push_back(checks::lambda_semigroup(quick ? 5 : 20));
    out.push_back(checks::analytic_decay());
    out.push_back(checks::energy_budget_single_mode());
    if (!quick) out.push_back(checks::energy_budget_forced());
    out.push_back(checks::determining_scale_doubling());
    return out;
}

}  // namespace sqg
