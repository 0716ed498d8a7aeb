#include "sqg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace sqg {

std::string to_string(ProjectionKind k) {
    return k == ProjectionKind::smooth_lp ? "smooth_lp" : "sharp_truncation";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::synchronized: return "synchronized";
        case Verdict::not_synchronized: return "not_synchronized";
        default: return "inconclusive";
    }
}

namespace {

// Copies the reference field's coefficients into the slaved field on the
// replaced mode set. For the smooth kind that set is the full support of the
// low-pass cutoff, |k| < 2^{Q+1}, so the coincidence hypothesis
// (theta1 - theta2)_{<=Q} = 0 holds exactly after every step.
void slave_low_modes(SpectralField& theta2, const SpectralField& theta1, int Q,
                     ProjectionKind kind, const ShellSystem& shells) {
    if (Q < 0) return;
    const Domain& d = theta2.domain();
    auto c2 = theta2.mutable_coeffs();
    const auto c1 = theta1.coeffs();
    const std::int64_t sharp_r2 = std::int64_t(1) << (2 * Q);
    for (int i1 = 0; i1 < d.N; ++i1) {
        const int k1 = d.wavenumber(i1);
        for (int i2 = 0; i2 < d.N; ++i2) {
            const int k2 = d.wavenumber(i2);
            if (k1 == 0 && k2 == 0) continue;
            bool replace;
            if (kind == ProjectionKind::sharp_truncation)
                replace = std::int64_t(k1) * k1 + std::int64_t(k2) * k2 <= sharp_r2;
            else
                replace = shells.in_lowpass_support(k1, k2, Q);
            if (replace) c2[d.flat(i1, i2)] = c1[d.flat(i1, i2)];
        }
    }
}

double linf_norm(const SpectralField& f) { return lebesgue_norm(f, INFINITY); }

SyncResult run_twin(const TwinConfig& cfg, const std::optional<ForcePerturbation>& pert) {
    cfg.params.validate();
    cfg.constants.validate();
    if (!admissible_l(cfg.params.alpha, cfg.params.l))
        throw std::invalid_argument("twin run: Besov exponent l must exceed alpha/(alpha-1)");
    if (!(cfg.horizon > cfg.spinup && cfg.spinup >= 0.0))
        throw std::invalid_argument("twin run: need 0 <= spinup < horizon");

    const Domain& d = cfg.domain;
    const ShellSystem shells(d);
    const double l = cfg.params.l;
    const double alpha = cfg.params.alpha;

    const Force force1(d, cfg.params.forcing);
    Force force2 = force1;
    std::optional<SpectralField> pert_envelope;
    if (pert && pert->epsilon != 0.0) {
        ForcingSpec ps;
        ps.modes = pert->modes;
        ps.modulation = ModulationKind::exp_decay;
        ps.param = pert->gamma;
        force2.add_term(d, ps, pert->epsilon);
        pert_envelope = from_modes(d, std::span<const Mode>(ps.modes.data(), ps.modes.size()));
    }

    SimState s1{scaled_to_l2(random_field(d, cfg.seed1, cfg.init.shape), cfg.init.amplitude), 0.0, 0};
    SimState s2{(cfg.seed2 == cfg.seed1)
                    ? s1.theta
                    : scaled_to_l2(random_field(d, cfg.seed2, cfg.init.shape), cfg.init.amplitude),
                0.0, 0};

    // Shared uniform dt, rounded so horizon and sample times are exact.
    const double dt_raw = std::min(cfl_dt(s1, cfg.dt_max), cfl_dt(s2, cfg.dt_max));
    long nsteps = static_cast<long>(std::ceil(cfg.horizon / dt_raw - 1e-12));
    const long cad = std::max(1, cfg.cadence);
    nsteps = ((nsteps + cad - 1) / cad) * cad;
    const double dt = cfg.horizon / static_cast<double>(nsteps);

    const IntegratingFactorRk4 step1(d, cfg.params, force1, dt);
    const IntegratingFactorRk4 step2(d, cfg.params, force2, dt);

    const AbsorbingRadii radii =
        compute_Rinfty(d, cfg.params.forcing, cfg.params.nu, alpha, cfg.params.p, cfg.constants);

    SyncResult r;
    r.q_max = shells.q_max();
    r.dt = dt;
    const double sexp = -alpha * (1.0 - 1.0 / l);

    bool slaving = false;
    std::size_t slave_sample = 0;
    auto record = [&](double t) {
        const SpectralField w = s1.theta - s2.theta;
        const auto spec = shells.shell_spectrum(w, l);
        double acc = 0.0;
        std::vector<double> row(spec.size());
        for (std::size_t q = 0; q < spec.size(); ++q) {
            row[q] = spec[q].second;
            acc += std::pow(spec[q].second, l);
        }
        r.times.push_back(t);
        r.shells_w.push_back(std::move(row));
        r.besov_w.push_back(std::pow(acc, 1.0 / l));
        r.l2_w.push_back(lebesgue_norm(w, 2.0));
        const double n1 = linf_norm(s1.theta);
        r.linf_theta1.push_back(n1);
        r.linf_theta2.push_back(linf_norm(s2.theta));
        if (r.entry_time < 0.0 && n1 <= radii.Rinfty_sharp) r.entry_time = t;
        double gap = 0.0;
        if (pert_envelope) {
            const SpectralField fdiff = force1.eval(d, t) - force2.eval(d, t);
            gap = shells.besov_norm(lambda_pow(fdiff, sexp), 0.0, l);
        }
        r.force_gap.push_back(gap);
    };

    record(0.0);
    for (long n = 1; n <= nsteps; ++n) {
        step1.advance(s1);
        step2.advance(s2);
        if (!slaving && s1.t >= cfg.spinup - 1e-12) {
            slaving = true;
            slave_sample = r.times.size();  // index of the next recorded sample
        }
        if (slaving) slave_low_modes(s2.theta, s1.theta, cfg.Q, cfg.projection, shells);
        if (n % cad == 0) {
            if (!std::isfinite(lebesgue_norm(s1.theta, 2.0)) ||
                !std::isfinite(lebesgue_norm(s2.theta, 2.0)))
                throw StepFailure(s1.t);
            record(s1.t);
        }
    }
    r.slave_start = std::min(slave_sample, r.times.size() - 1);

    // Verdict from the decay measured after slaving begins.
    const double start = r.besov_w[r.slave_start];
    const double final_v = r.besov_w.back();
    const double floor_abs = 1e-15 * std::max(1.0, lebesgue_norm(s1.theta, 2.0));
    if (start <= floor_abs) {
        r.verdict = Verdict::synchronized;  // twins already identical
        r.decades = 0.0;
    } else {
        const double ratio = final_v / start;
        r.decades = std::log10(start / std::max(final_v, 1e-300));
        if (ratio <= cfg.sync_tol)
            r.verdict = Verdict::synchronized;
        else if (ratio >= cfg.desync_tol)
            r.verdict = Verdict::not_synchronized;
        else
            r.verdict = Verdict::inconclusive;

        // Log-linear fit on the post-settle window, cut both at the relative
        // fit floor and at the roundoff plateau of the twin difference.
        std::vector<double> ft, fv;
        const double tmin = r.times[r.slave_start] + cfg.fit_settle;
        double theta_scale = 0.0;
        for (double v : r.linf_theta1) theta_scale = std::max(theta_scale, v);
        const double floor_fit = std::max(1e-14 * start, 1e-13 * theta_scale);
        for (std::size_t i = r.slave_start; i < r.times.size(); ++i) {
            if (r.times[i] < tmin) continue;
            if (r.besov_w[i] <= floor_fit) break;
            ft.push_back(r.times[i]);
            fv.push_back(r.besov_w[i]);
        }
        if (ft.size() >= 10) {
            const FitResult fit = fit_decay_rate(ft, fv);
            r.fitted_rate = fit.rate;
            r.fit_r2 = fit.r2;
        }
    }
    return r;
}

}  // namespace

SyncResult twin_sync_run(const TwinConfig& cfg) { return run_twin(cfg, std::nullopt); }

SyncResult force_perturbation_run(const TwinConfig& cfg, const ForcePerturbation& pert) {
    return run_twin(cfg, pert);
}

FitResult fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size())
        throw std::invalid_argument("fit_decay_rate: series length mismatch");
    if (values.empty() || values.front() <= 0.0)
        throw std::invalid_argument("fit_decay_rate: values must be positive");
    const double floor = 1e-14 * values.front();
    std::size_t n = values.size();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] <= floor) { n = i; break; }
        if (values[i] <= 0.0)
            throw std::invalid_argument("fit_decay_rate: nonpositive value in the fit window");
    }
    if (n < 10) throw std::invalid_argument("fit_decay_rate: need at least 10 samples above floor");

    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        st += times[i];
        sy += std::log(values[i]);
    }
    const double mt = st / n, my = sy / n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = times[i] - mt;
        const double dy = std::log(values[i]) - my;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    if (stt == 0.0) throw std::invalid_argument("fit_decay_rate: degenerate time axis");
    FitResult out;
    if (syy == 0.0) return out;  // constant series: rate 0, r2 0 by convention
    const double slope = sty / stt;
    out.rate = -slope;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = my + slope * (times[i] - mt);
        const double e = std::log(values[i]) - pred;
        ss_res += e * e;
    }
    out.r2 = 1.0 - ss_res / syy;
    return out;
}

DecayDiagnostics make_decay_diagnostics(const SyncResult& r, const TwinConfig& cfg) {
    const double l = cfg.params.l;
    const double alpha = cfg.params.alpha;
    const double nu = cfg.params.nu;
    const double lambda0 = cfg.domain.lambda0;
    const double C = 1.0;

    DecayDiagnostics diag;
    diag.phi = 0.5 * std::pow(2.0 * M_PI * lambda0, alpha) * C * nu;
    const AbsorbingRadii radii =
        compute_Rinfty(cfg.domain, cfg.params.forcing, nu, alpha, cfg.params.p, cfg.constants);
    const double Lambda = lambda0 * std::ldexp(1.0, std::max(cfg.Q, 0));
    const double force_pref = std::pow(2.0 / (C * nu), l - 1.0) * std::pow(l, l - 2.0);
    const double lowmode_pref =
        std::pow(Lambda, (l - 1.0) * (alpha - 1.0)) * radii.Rinfty_sharp * l * l;

    for (std::size_t i = r.slave_start; i < r.times.size(); ++i) {
        diag.times.push_back(r.times[i]);
        diag.xi.push_back(std::pow(r.besov_w[i], l));
        double low = 0.0;
        for (int q = -1; q <= cfg.Q && q <= r.q_max; ++q)
            low += std::pow(r.shells_w[i][static_cast<std::size_t>(q + 1)], l);
        diag.psi.push_back(force_pref * std::pow(r.force_gap[i], l) + lowmode_pref * low);
    }
    return diag;
}

GronwallReport gronwall_check(const DecayDiagnostics& diag, double slack) {
    const auto& t = diag.times;
    const auto& xi = diag.xi;
    const auto& psi = diag.psi;
    if (xi.size() != t.size() || psi.size() != t.size())
        throw std::invalid_argument("gronwall_check: series length mismatch");
    if (t.size() < 3) throw std::invalid_argument("gronwall_check: series too short");
    const double dt0 = t[1] - t[0];
    for (std::size_t i = 1; i + 1 < t.size(); ++i)
        if (std::abs((t[i + 1] - t[i]) - dt0) > 1e-6 * dt0)
            throw std::invalid_argument("gronwall_check: sampling is not uniform");

    GronwallReport rep;
    for (double v : xi) rep.scale = std::max(rep.scale, v);
    rep.worst_margin = -INFINITY;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double margin = (xi[i + 1] - xi[i]) / dt0 + diag.phi * xi[i] - psi[i];
        rep.worst_margin = std::max(rep.worst_margin, margin);
    }
    rep.holds = rep.worst_margin <= slack * rep.scale;
    return rep;
}

int worker_count() {
    if (const char* env = std::getenv("SQG_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

SweepResult threshold_sweep(const TwinConfig& base, const std::vector<int>& Q_list) {
    if (Q_list.empty()) throw std::invalid_argument("threshold_sweep: empty Q list");
    if (!std::is_sorted(Q_list.begin(), Q_list.end()))
        throw std::invalid_argument("threshold_sweep: Q list must be ascending");

    std::vector<SyncResult> results(Q_list.size());
    std::vector<std::string> errors(Q_list.size());
    std::atomic<std::size_t> next{0};
    const int workers = std::min<int>(worker_count(), static_cast<int>(Q_list.size()));
    auto body = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= Q_list.size()) return;
            TwinConfig cfg = base;
            cfg.Q = Q_list[i];
            try {
                results[i] = twin_sync_run(cfg);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty())
            throw std::runtime_error("threshold_sweep: run at Q=" + std::to_string(Q_list[i]) +
                                     " failed: " + errors[i]);

    SweepResult out;
    for (std::size_t i = 0; i < Q_list.size(); ++i) {
        const auto& r = results[i];
        out.rows.push_back({Q_list[i], r.verdict, r.fitted_rate, r.fit_r2, r.decades});
    }
    const AbsorbingRadii radii = compute_Rinfty(base.domain, base.params.forcing, base.params.nu,
                                                base.params.alpha, base.params.p, base.constants);
    out.Rinfty_sharp = radii.Rinfty_sharp;
    CalibrationConstants c1 = base.constants;
    c1.c_thm = 1.0;
    out.theoretical_Q_c1 = compute_determining_Q(radii.Rinfty_sharp, base.params.nu,
                                                 base.params.alpha, base.params.l, c1,
                                                 base.domain.lambda0)
                               .Q;

    bool all_inconclusive = true;
    for (const auto& row : out.rows) {
        if (row.verdict != Verdict::inconclusive) all_inconclusive = false;
        if (row.verdict == Verdict::synchronized && out.Q_crit < 0) out.Q_crit = row.Q;
        if (out.Q_crit >= 0 && row.Q > out.Q_crit && row.verdict != Verdict::synchronized)
            out.monotonicity_violations.push_back(row.Q);
    }
    if (all_inconclusive)
        throw std::runtime_error("threshold_sweep: every run was inconclusive");
    if (out.Q_crit >= 0) {
        const double LambdaCrit = base.domain.lambda0 * std::ldexp(1.0, out.Q_crit);
        out.implied_c_thm = std::pow(LambdaCrit, base.params.alpha - 1.0) * base.params.nu /
                            (base.params.l * base.params.l * radii.Rinfty_sharp);
    }
    return out;
}

}  // namespace sqg
