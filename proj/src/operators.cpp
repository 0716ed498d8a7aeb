#include "sqg/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace sqg {

namespace {

// Applies a modewise multiplier m(k1,k2) in place; mean mode stays zero.
template <class Fn>
void apply_multiplier(SpectralField& f, Fn&& m) {
    const Domain& d = f.domain();
    auto c = f.mutable_coeffs();
    for (int i1 = 0; i1 < d.N; ++i1) {
        const int k1 = d.wavenumber(i1);
        for (int i2 = 0; i2 < d.N; ++i2) {
            const int k2 = d.wavenumber(i2);
            if (k1 == 0 && k2 == 0) continue;
            auto& z = c[d.flat(i1, i2)];
            if (z != std::complex<double>(0.0, 0.0)) z *= m(k1, k2);
        }
    }
}

}  // namespace

SpectralField lambda_pow(const SpectralField& theta, double s) {
    SpectralField out = theta;
    if (s == 0.0) return out;
    const double two_pi_over_L = 2.0 * M_PI / theta.domain().L;
    apply_multiplier(out, [&](int k1, int k2) {
        const double kk = std::hypot(double(k1), double(k2));
        return std::pow(two_pi_over_L * kk, s);
    });
    SQG_DEBUG_VALIDATE(out);
    return out;
}

VelocityField riesz_perp(const SpectralField& theta) {
    const Domain& d = theta.domain();
    SpectralField u1(d), u2(d);
    auto c1 = u1.mutable_coeffs();
    auto c2 = u2.mutable_coeffs();
    const auto ct = theta.coeffs();
    for (int i1 = 0; i1 < d.N; ++i1) {
        const int k1 = d.wavenumber(i1);
        for (int i2 = 0; i2 < d.N; ++i2) {
            const int k2 = d.wavenumber(i2);
            if (k1 == 0 && k2 == 0) continue;
            const auto z = ct[d.flat(i1, i2)];
            if (z == std::complex<double>(0.0, 0.0)) continue;
            const double kk = std::hypot(double(k1), double(k2));
            const std::complex<double> i_unit(0.0, 1.0);
            c1[d.flat(i1, i2)] = -i_unit * (k2 / kk) * z;
            c2[d.flat(i1, i2)] = i_unit * (k1 / kk) * z;
        }
    }
    SQG_DEBUG_VALIDATE(u1);
    SQG_DEBUG_VALIDATE(u2);
    return {std::move(u1), std::move(u2)};
}

SpectralField partial_derivative(const SpectralField& theta, int j) {
    if (j != 1 && j != 2) throw std::invalid_argument("partial_derivative: axis must be 1 or 2");
    SpectralField out = theta;
    const double two_pi_over_L = 2.0 * M_PI / theta.domain().L;
    apply_multiplier(out, [&](int k1, int k2) {
        const double kj = (j == 1) ? k1 : k2;
        return std::complex<double>(0.0, two_pi_over_L * kj);
    });
    return out;
}

SpectralField advection(const SpectralField& theta) {
    const Domain& d = theta.domain();
    const auto [u1, u2] = riesz_perp(theta);
    const PhysicalField pu1 = to_physical(u1);
    const PhysicalField pu2 = to_physical(u2);
    const PhysicalField pg1 = to_physical(partial_derivative(theta, 1));
    const PhysicalField pg2 = to_physical(partial_derivative(theta, 2));

    PhysicalField prod{d, std::vector<double>(d.size())};
    for (std::size_t i = 0; i < prod.samples.size(); ++i)
        prod.samples[i] = pu1.samples[i] * pg1.samples[i] + pu2.samples[i] * pg2.samples[i];

    // to_spectral dealiases and zeroes the mean, which completes the 2/3 rule.
    return to_spectral(prod);
}

SpectralField advection_oracle(const SpectralField& theta, int max_modes) {
    const Domain& d = theta.domain();
    std::vector<Mode> support;
    for (int i1 = 0; i1 < d.N; ++i1) {
        const int k1 = d.wavenumber(i1);
        for (int i2 = 0; i2 < d.N; ++i2) {
            const int k2 = d.wavenumber(i2);
            const auto z = theta.coeff(k1, k2);
            if (z != std::complex<double>(0.0, 0.0)) support.push_back({k1, k2, z});
        }
    }
    if (static_cast<int>(support.size()) > max_modes)
        throw std::invalid_argument("advection_oracle: field support exceeds max_modes");

    const double two_pi_over_L = 2.0 * M_PI / d.L;
    const std::complex<double> i_unit(0.0, 1.0);
    SpectralField out(d);
    auto oc = out.mutable_coeffs();
    for (const auto& m : support) {          // velocity mode
        const double mm = std::hypot(double(m.k1), double(m.k2));
        const std::complex<double> v1 = -i_unit * (m.k2 / mm) * m.amplitude;
        const std::complex<double> v2 = i_unit * (m.k1 / mm) * m.amplitude;
        for (const auto& n : support) {      // gradient mode
            const int k1 = m.k1 + n.k1;
            const int k2 = m.k2 + n.k2;
            if ((k1 == 0 && k2 == 0) || !d.inside_dealias(k1, k2)) continue;
            const std::complex<double> g1 = i_unit * two_pi_over_L * double(n.k1) * n.amplitude;
            const std::complex<double> g2 = i_unit * two_pi_over_L * double(n.k2) * n.amplitude;
            oc[d.flat(d.index_of(k1), d.index_of(k2))] += v1 * g1 + v2 * g2;
        }
    }
    SQG_DEBUG_VALIDATE(out);
    return out;
}

double modulation_value(const ForcingSpec& spec, double t) {
    switch (spec.modulation) {
        case ModulationKind::constant: return 1.0;
        case ModulationKind::exp_decay: return std::exp(-spec.param * t);
        case ModulationKind::sinusoid: return std::cos(spec.param * t);
    }
    return 1.0;
}

Force::Force(const Domain& d, const ForcingSpec& spec) { add_term(d, spec); }

void Force::add_term(const Domain& d, const ForcingSpec& spec, double scale) {
    SpectralField g = from_modes(d, std::span<const Mode>(spec.modes.data(), spec.modes.size()));
    if (scale != 1.0) g = scale * g;
    terms_.emplace_back(std::move(g), spec);
}

void Force::accumulate(std::span<std::complex<double>> acc, double t) const {
    for (const auto& [g, spec] : terms_) {
        const double h = modulation_value(spec, t);
        if (h == 0.0) continue;
        const auto gc = g.coeffs();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += h * gc[i];
    }
}

SpectralField Force::eval(const Domain& d, double t) const {
    SpectralField f(d);
    accumulate(f.mutable_coeffs(), t);
    return f;
}

SpectralField Force::envelope(const Domain& d) const {
    // sup_t |h| = 1 for the three modulations (h(0) = 1 normalization).
    SpectralField f(d);
    for (const auto& [g, spec] : terms_) {
        (void)spec;
        auto fc = f.mutable_coeffs();
        const auto gc = g.coeffs();
        for (std::size_t i = 0; i < fc.size(); ++i) fc[i] += gc[i];
    }
    return f;
}

SpectralField force_eval(const Domain& d, const ForcingSpec& spec, double t) {
    if (t < 0.0) throw std::invalid_argument("force_eval: time must be nonnegative");
    Force f(d, spec);
    return f.eval(d, t);
}

}  // namespace sqg
