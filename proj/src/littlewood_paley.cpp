#include "sqg/littlewood_paley.hpp"

#include <cmath>
#include <stdexcept>

namespace sqg {

namespace {

// Modewise real multiplier application; skips exact zeros.
template <class Fn>
SpectralField apply_radial(const SpectralField& f, Fn&& weight) {
    const Domain& d = f.domain();
    SpectralField out(d);
    auto oc = out.mutable_coeffs();
    const auto c = f.coeffs();
    for (int i1 = 0; i1 < d.N; ++i1) {
        const int k1 = d.wavenumber(i1);
        for (int i2 = 0; i2 < d.N; ++i2) {
            const int k2 = d.wavenumber(i2);
            if (k1 == 0 && k2 == 0) continue;
            const auto z = c[d.flat(i1, i2)];
            if (z == std::complex<double>(0.0, 0.0)) continue;
            const double w = weight(std::hypot(double(k1), double(k2)));
            if (w != 0.0) oc[d.flat(i1, i2)] = w * z;
        }
    }
    return out;
}

}  // namespace

ShellSystem::ShellSystem(const Domain& d) : domain_(d) {
    // Largest shell whose support (3/4) 2^q <= |k| <= 2^{q+1} reaches into the
    // retained ball; beyond it the telescoped cutoff is identically 1 there.
    int q = 0;
    while (0.75 * std::ldexp(1.0, q + 1) <= double(d.dealias_radius)) ++q;
    q_max_ = q;
}

double ShellSystem::lambda_q(int q) const {
    if (q < -1) throw std::invalid_argument("lambda_q: shell index must be >= -1");
    return std::ldexp(1.0, q) / domain_.L;
}

double ShellSystem::chi(double xi_norm) {
    if (xi_norm < 0.0) throw std::invalid_argument("chi: radius must be nonnegative");
    if (xi_norm <= 0.75) return 1.0;
    if (xi_norm >= 1.0) return 0.0;
    const double t = (xi_norm - 0.75) * 4.0;
    const double s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));  // quintic smoothstep
    return 1.0 - s;
}

double ShellSystem::phi(int q, double xi_norm) {
    if (q < -1) throw std::invalid_argument("phi: shell index must be >= -1");
    if (q == -1) return chi(xi_norm);
    return chi(std::ldexp(xi_norm, -q - 1)) - chi(std::ldexp(xi_norm, -q));
}

SpectralField ShellSystem::shell_project(const SpectralField& theta, int q) const {
    if (q < -1 || q > q_max_)
        throw std::invalid_argument("shell_project: shell index out of range [-1, q_max]");
    return apply_radial(theta, [q](double r) { return phi(q, r); });
}

SpectralField ShellSystem::lowpass(const SpectralField& theta, int Q) const {
    if (Q < -1) throw std::invalid_argument("lowpass: Q must be >= -1");
    return apply_radial(theta, [Q](double r) { return chi(std::ldexp(r, -Q - 1)); });
}

SpectralField ShellSystem::band_project(const SpectralField& theta, int q1, int q2) const {
    if (q1 < -1 || q1 > q2)
        throw std::invalid_argument("band_project: need -1 <= q1 <= q2");
    const int hi = std::min(q2, q_max_);
    SpectralField acc(domain_);
    for (int q = q1; q <= hi; ++q) acc = acc + shell_project(theta, q);
    return acc;
}

double ShellSystem::besov_norm(const SpectralField& theta, double s, double l) const {
    if (l < 1.0) throw std::invalid_argument("besov_norm: exponent l must be >= 1");
    double acc = 0.0;
    for (int q = -1; q <= q_max_; ++q) {
        const double nq = lebesgue_norm(shell_project(theta, q), l);
        if (nq == 0.0) continue;
        acc += std::pow(lambda_q(q), s * l) * std::pow(nq, l);
    }
    return std::pow(acc, 1.0 / l);
}

std::vector<std::pair<int, double>> ShellSystem::shell_spectrum(const SpectralField& theta,
                                                                double l) const {
    std::vector<std::pair<int, double>> rows;
    rows.reserve(q_max_ + 2);
    for (int q = -1; q <= q_max_; ++q)
        rows.emplace_back(q, lebesgue_norm(shell_project(theta, q), l));
    return rows;
}

bool ShellSystem::in_lowpass_support(int k1, int k2, int Q) const {
    const double r = std::hypot(double(k1), double(k2));
    return chi(std::ldexp(r, -Q - 1)) > 0.0;
}

}  // namespace sqg
