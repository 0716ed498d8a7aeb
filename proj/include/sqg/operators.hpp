#pragma once

#include <functional>
#include <vector>

#include "sqg/spectral_field.hpp"

namespace sqg {

struct VelocityField {
    SpectralField u1;
    SpectralField u2;
};

/// Zygmund multiplier: coeff(k) *= (2 pi |k| / L)^s, mean mode pinned to zero.
SpectralField lambda_pow(const SpectralField& theta, double s);

/// u = Lambda^{-1}(-d2 theta, d1 theta); divergence-free, modewise isometric.
VelocityField riesz_perp(const SpectralField& theta);

/// Partial derivative d/dx_j as a spectral multiplier (j is 1 or 2).
SpectralField partial_derivative(const SpectralField& theta, int j);

/// Dealiased pseudospectral u . grad(theta) with u = riesz_perp(theta).
SpectralField advection(const SpectralField& theta);

/// Exact convolution-sum advection for sparse fields; testing oracle.
SpectralField advection_oracle(const SpectralField& theta, int max_modes = 64);

enum class ModulationKind { constant, exp_decay, sinusoid };

/// Separable forcing f(x,t) = h(t) g(x), h(0) = 1 for every modulation.
struct ForcingSpec {
    std::vector<Mode> modes;                // g(x), zero-mean, band-limited
    ModulationKind modulation = ModulationKind::constant;
    double param = 0.0;                     // decay rate gamma or frequency omega
};

double modulation_value(const ForcingSpec& spec, double t);

/// Forcing materialized on a domain; possibly a sum of separable terms
/// (the perturbation experiments drive the second twin with f1 + eps e^{-gt} g').
class Force {
  public:
    Force() = default;
    Force(const Domain& d, const ForcingSpec& spec);

    void add_term(const Domain& d, const ForcingSpec& spec, double scale = 1.0);
    bool empty() const { return terms_.empty(); }

    /// acc += f_hat(t), coefficient-wise.
    void accumulate(std::span<std::complex<double>> acc, double t) const;
    SpectralField eval(const Domain& d, double t) const;

    /// sup_t |h| g for bound evaluation; constant term caching lives here too.
    SpectralField envelope(const Domain& d) const;

    const std::vector<std::pair<SpectralField, ForcingSpec>>& terms() const { return terms_; }

  private:
    std::vector<std::pair<SpectralField, ForcingSpec>> terms_;
};

/// Spec-level operation: h(t) g as a field (cached g behind Force).
SpectralField force_eval(const Domain& d, const ForcingSpec& spec, double t);

}  // namespace sqg
