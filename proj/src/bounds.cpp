#include "sqg/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sqg {

void CalibrationConstants::validate() const {
    if (!(c_infty > 0.0 && c_thm > 0.0 && c_linfty > 0.0))
        throw std::invalid_argument("constants: calibration constants must be positive");
}

bool admissible_l(double alpha, double l) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("admissible_l: alpha must lie in (1,2)");
    return l > alpha / (alpha - 1.0);
}

double compute_R2(const Domain& d, const ForcingSpec& f, double nu, double alpha) {
    const Force force(d, f);
    const SpectralField g = force.envelope(d);
    const double norm = lebesgue_norm(lambda_pow(g, -alpha / 2.0), 2.0);
    return norm / (nu * std::pow(d.lambda0, alpha / 2.0));
}

AbsorbingRadii compute_Rinfty(const Domain& d, const ForcingSpec& f, double nu, double alpha,
                              double p, const CalibrationConstants& constants) {
    if (!(p > 2.0 / alpha)) throw std::invalid_argument("compute_Rinfty: need p > 2/alpha");
    constants.validate();
    const Force force(d, f);
    const SpectralField g = force.envelope(d);
    AbsorbingRadii r;
    r.F = lebesgue_norm(g, p);
    if (r.F == 0.0) return r;
    r.R2 = compute_R2(d, f, nu, alpha);
    double ea, eb;  // exponents of F/nu and R2
    if (std::isinf(p)) {
        ea = 1.0 / (1.0 + alpha);
        eb = alpha / (1.0 + alpha);
    } else {
        ea = p / (p + p * alpha - 2.0);
        eb = (p * alpha - 2.0) / (p + p * alpha - 2.0);
    }
    r.Rinfty_sharp = constants.c_infty * std::pow(r.F / nu, ea) * std::pow(r.R2, eb);
    const double lam_exp = std::isinf(p) ? -alpha : 2.0 / p - alpha;
    r.Rinfty_simplified = constants.c_infty * std::pow(d.lambda0, lam_exp) * r.F / nu;
    return r;
}

DeterminingScale compute_determining_Q(double Rinfty, double nu, double alpha, double l,
                                       const CalibrationConstants& constants, double lambda0) {
    if (!admissible_l(alpha, l))
        throw std::invalid_argument("compute_determining_Q: l must exceed alpha/(alpha-1)");
    if (Rinfty < 0.0) throw std::invalid_argument("compute_determining_Q: Rinfty must be >= 0");
    constants.validate();
    DeterminingScale s;
    s.l = l;
    s.constants = constants;
    s.Lambda = std::pow(constants.c_thm * l * l * Rinfty / nu, 1.0 / (alpha - 1.0));
    if (s.Lambda <= lambda0) {
        s.Q = 0;  // any shell works; floor at zero
        return s;
    }
    // Smallest Q with lambda0 2^Q >= Lambda; tiny slack absorbs pow() roundoff
    // so exact powers of two resolve to the intended shell.
    const double x = std::log2(s.Lambda / lambda0);
    s.Q = std::max(0, static_cast<int>(std::ceil(x - 1e-9)));
    return s;
}

double linfty_bound(double t, double theta0_l2, double F, double nu, double alpha, double p,
                    const CalibrationConstants& constants) {
    if (!(t > 0.0)) throw std::invalid_argument("linfty_bound: time must be positive");
    constants.validate();
    double ea, eb;
    if (std::isinf(p)) {
        ea = 1.0 / (1.0 + alpha);
        eb = alpha / (1.0 + alpha);
    } else {
        if (!(p > 2.0 / alpha)) throw std::invalid_argument("linfty_bound: need p > 2/alpha");
        ea = p / (p + p * alpha - 2.0);
        eb = (p * alpha - 2.0) / (p + p * alpha - 2.0);
    }
    const double transient = theta0_l2 / std::pow(nu * t, 1.0 / alpha);
    const double persistent =
        (theta0_l2 == 0.0) ? 0.0 : std::pow(F / nu, ea) * std::pow(theta0_l2, eb);
    return constants.c_linfty * (transient + persistent);
}

double l2_envelope(double t, double theta0_l2, const Domain& d, const ForcingSpec& f, double nu,
                   double alpha) {
    if (t < 0.0) throw std::invalid_argument("l2_envelope: time must be nonnegative");
    const double rate = nu * std::pow(2.0 * M_PI * d.lambda0, alpha);
    const double decay = std::exp(-rate * t);
    double forced = 0.0;
    if (!f.modes.empty()) {
        const Force force(d, f);
        const double fn = lebesgue_norm(lambda_pow(force.envelope(d), -alpha / 2.0), 2.0);
        forced = fn * fn / (nu * rate) * (1.0 - decay);
    }
    return std::sqrt(theta0_l2 * theta0_l2 * decay + forced);
}

CalibrationConstants calibrate(const MonitoredRun& run, const Domain& d, const SqgParams& params,
                               CalibrationConstants base, double settle_tol) {
    if (run.times.size() < 8 || run.times.size() != run.l2.size() ||
        run.times.size() != run.linf.size())
        throw std::invalid_argument("calibrate: monitored series too short or mismatched");
    const AbsorbingRadii radii =
        compute_Rinfty(d, params.forcing, params.nu, params.alpha, params.p,
                       CalibrationConstants{1.0, base.c_thm, base.c_linfty});
    if (radii.Rinfty_sharp == 0.0)
        throw std::invalid_argument("calibrate: zero force has no absorbing band to calibrate");

    // Trailing window: last quarter of the run; the L2 history must have
    // settled to within settle_tol of its band there.
    const std::size_t n = run.times.size();
    const std::size_t w0 = n - n / 4;
    double lo = run.l2[w0], hi = run.l2[w0], sup_inf = 0.0;
    for (std::size_t i = w0; i < n; ++i) {
        lo = std::min(lo, run.l2[i]);
        hi = std::max(hi, run.l2[i]);
        sup_inf = std::max(sup_inf, run.linf[i]);
    }
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0 || (hi - lo) / mid > 2.0 * settle_tol)
        throw std::runtime_error("calibrate: trajectory has not settled into its absorbing band");

    CalibrationConstants out = base;
    out.c_infty = sup_inf / radii.Rinfty_sharp;
    return out;
}

}  // namespace sqg
