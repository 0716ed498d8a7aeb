#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sqg/domain.hpp"
#include "sqg/fft.hpp"

namespace sqg {

struct PhysicalField {
    Domain domain;
    std::vector<double> samples;  // N x N, row-major, x2 fastest

    double& at(int i1, int i2) { return samples[domain.flat(i1, i2)]; }
    double at(int i1, int i2) const { return samples[domain.flat(i1, i2)]; }
};

struct Mode {
    int k1 = 0;
    int k2 = 0;
    std::complex<double> amplitude;
};

/// Fourier coefficients of a real zero-mean scalar on [0,L]^2.
/// Invariants: coeff(-k) = conj(coeff(k)), coeff(0,0) = 0, and coefficients
/// outside the dealias ball are exactly zero.
class SpectralField {
  public:
    explicit SpectralField(const Domain& d) : domain_(d), c_(d.size()) {}

    const Domain& domain() const { return domain_; }

    std::complex<double> coeff(int k1, int k2) const {
        return c_[domain_.flat(domain_.index_of(k1), domain_.index_of(k2))];
    }
    void set_coeff_pair(int k1, int k2, std::complex<double> a);  // sets (k, a) and (-k, conj a)

    std::span<const std::complex<double>> coeffs() const { return c_; }
    /// Raw access for solver kernels; callers must preserve the invariants.
    std::span<std::complex<double>> mutable_coeffs() { return c_; }

    /// Throws if an invariant is violated beyond tol (relative to max |coeff|).
    void validate(double tol = 1e-12) const;

    bool same_domain(const SpectralField& o) const { return domain_ == o.domain_; }

  private:
    Domain domain_;
    complex_vector c_;
};

SpectralField make_zero_field(const Domain& d);
SpectralField from_modes(const Domain& d, std::span<const Mode> modes);
SpectralField from_modes(const Domain& d, std::initializer_list<Mode> modes);

PhysicalField to_physical(const SpectralField& f);
SpectralField to_spectral(const PhysicalField& f);

/// Grid-node Riemann sum L^r norm; r may be any real >= 1 or infinity.
double lebesgue_norm(const SpectralField& f, double r);
double lebesgue_norm(const PhysicalField& f, double r);

/// Real L^2 inner product via Parseval, L^2 sum over coefficient products.
double inner_product(const SpectralField& a, const SpectralField& b);

struct SpectrumShape {
    double decay = 0.0;  // coefficient magnitudes ~ |k|^{-decay}
    double band_lo = 1.0;
    double band_hi = 1.0;  // inclusive bounds on |k|
};

/// Deterministic random field: magnitudes |k|^{-decay} on band_lo <= |k| <= band_hi,
/// phases drawn from mt19937_64(seed) in fixed lattice order.
SpectralField random_field(const Domain& d, std::uint64_t seed, const SpectrumShape& shape);

// Arithmetic helpers used across modules and tests.
SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double s, const SpectralField& a);
SpectralField scaled_to_l2(const SpectralField& a, double target_l2);

#ifndef NDEBUG
#define SQG_DEBUG_VALIDATE(field) (field).validate()
#else
#define SQG_DEBUG_VALIDATE(field) ((void)0)
#endif

}  // namespace sqg
