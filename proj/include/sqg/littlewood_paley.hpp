#pragma once

#include <utility>
#include <vector>

#include "sqg/spectral_field.hpp"

namespace sqg {

/// Dyadic shell apparatus on the integer frequency lattice.
///
/// chi is a radial C^2 cutoff equal to 1 on [0, 3/4] and 0 on [1, inf); the
/// block profiles are phi_q(xi) = chi(2^{-q-1} xi) - chi(2^{-q} xi) for q >= 0
/// and phi_{-1} = chi, so shells telescope exactly: sum_{q<=Q} phi_q(xi) =
/// chi(2^{-Q-1} xi). Shell wavenumbers are lambda_q = 2^q / L.
class ShellSystem {
  public:
    explicit ShellSystem(const Domain& d);

    const Domain& domain() const { return domain_; }
    int q_max() const { return q_max_; }
    double lambda_q(int q) const;  // q >= -1; lambda_{-1} = 2^{-1}/L

    /// Smooth radial cutoff profile (quintic smoothstep on the [3/4,1] ramp).
    static double chi(double xi_norm);
    /// Block profile phi_q at radius xi_norm (q >= -1).
    static double phi(int q, double xi_norm);

    SpectralField shell_project(const SpectralField& theta, int q) const;
    SpectralField lowpass(const SpectralField& theta, int Q) const;
    SpectralField band_project(const SpectralField& theta, int q1, int q2) const;

    /// (sum_q lambda_q^{s l} ||Delta_q theta||_l^l)^{1/l}
    double besov_norm(const SpectralField& theta, double s, double l) const;
    /// Per-shell L^l norms for q = -1 .. q_max.
    std::vector<std::pair<int, double>> shell_spectrum(const SpectralField& theta, double l) const;

    /// Keep-everything-in-the-smooth-support mask used by twin slaving:
    /// 1 where chi(2^{-Q-1}|k|) > 0, i.e. |k| < 2^{Q+1}, else 0.
    bool in_lowpass_support(int k1, int k2, int Q) const;

  private:
    Domain domain_;
    int q_max_;
};

}  // namespace sqg
