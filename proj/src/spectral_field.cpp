#include "sqg/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sqg {

void SpectralField::set_coeff_pair(int k1, int k2, std::complex<double> a) {
    c_[domain_.flat(domain_.index_of(k1), domain_.index_of(k2))] = a;
    c_[domain_.flat(domain_.index_of(-k1), domain_.index_of(-k2))] = std::conj(a);
}

void SpectralField::validate(double tol) const {
    const int N = domain_.N;
    double cmax = 0.0;
    for (const auto& z : c_) cmax = std::max(cmax, std::abs(z));
    const double eps = tol * std::max(cmax, 1e-300);

    if (std::abs(c_[0]) != 0.0)
        throw std::runtime_error("spectral field: mean mode is nonzero");
    for (int i1 = 0; i1 < N; ++i1) {
        const int k1 = domain_.wavenumber(i1);
        for (int i2 = 0; i2 < N; ++i2) {
            const int k2 = domain_.wavenumber(i2);
            const auto z = c_[domain_.flat(i1, i2)];
            if (!domain_.inside_dealias(k1, k2)) {
                if (std::abs(z) != 0.0)
                    throw std::runtime_error("spectral field: energy outside the dealias ball");
                continue;
            }
            const auto zc = c_[domain_.flat(domain_.index_of(-k1), domain_.index_of(-k2))];
            if (std::abs(z - std::conj(zc)) > eps)
                throw std::runtime_error("spectral field: Hermitian symmetry violated");
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw std::runtime_error("spectral field: non-finite coefficient");
        }
    }
}

SpectralField make_zero_field(const Domain& d) { return SpectralField(d); }

SpectralField from_modes(const Domain& d, std::span<const Mode> modes) {
    SpectralField f(d);
    for (const auto& m : modes) {
        if (m.k1 == 0 && m.k2 == 0)
            throw std::invalid_argument("from_modes: the mean mode (0,0) must stay zero");
        if (!d.inside_dealias(m.k1, m.k2))
            throw std::invalid_argument("from_modes: mode (" + std::to_string(m.k1) + "," +
                                        std::to_string(m.k2) + ") lies outside the dealias ball");
        f.set_coeff_pair(m.k1, m.k2, m.amplitude);
    }
    SQG_DEBUG_VALIDATE(f);
    return f;
}

SpectralField from_modes(const Domain& d, std::initializer_list<Mode> modes) {
    return from_modes(d, std::span<const Mode>(modes.begin(), modes.size()));
}

PhysicalField to_physical(const SpectralField& f) {
    const Domain& d = f.domain();
    const auto& plan = FftPlan::get(d.N);
    complex_vector out(d.size());
    plan.backward(f.coeffs().data(), out.data());
    PhysicalField p{d, std::vector<double>(d.size())};
    for (std::size_t i = 0; i < out.size(); ++i) p.samples[i] = out[i].real();
    return p;
}

SpectralField to_spectral(const PhysicalField& p) {
    const Domain& d = p.domain;
    if (p.samples.size() != d.size())
        throw std::invalid_argument("to_spectral: sample count does not match the domain grid");
    const auto& plan = FftPlan::get(d.N);
    complex_vector in(d.size()), out(d.size());
    for (std::size_t i = 0; i < in.size(); ++i) in[i] = p.samples[i];
    plan.forward(in.data(), out.data());

    SpectralField f(d);
    auto c = f.mutable_coeffs();
    const double scale = 1.0 / (static_cast<double>(d.N) * d.N);
    const int N = d.N;
    for (int i1 = 0; i1 < N; ++i1) {
        const int k1 = d.wavenumber(i1);
        for (int i2 = 0; i2 < N; ++i2) {
            const int k2 = d.wavenumber(i2);
            if ((k1 == 0 && k2 == 0) || !d.inside_dealias(k1, k2)) continue;
            c[d.flat(i1, i2)] = scale * out[d.flat(i1, i2)];
        }
    }
    // Symmetrize so Hermitian symmetry is exact, not just roundoff-close.
    for (int i1 = 0; i1 < N; ++i1) {
        const int k1 = d.wavenumber(i1);
        for (int i2 = 0; i2 < N; ++i2) {
            const int k2 = d.wavenumber(i2);
            if (k1 < 0 || (k1 == 0 && k2 <= 0)) continue;
            if (!d.inside_dealias(k1, k2)) continue;
            const auto zp = c[d.flat(i1, i2)];
            const auto zm = c[d.flat(d.index_of(-k1), d.index_of(-k2))];
            const auto avg = 0.5 * (zp + std::conj(zm));
            c[d.flat(i1, i2)] = avg;
            c[d.flat(d.index_of(-k1), d.index_of(-k2))] = std::conj(avg);
        }
    }
    SQG_DEBUG_VALIDATE(f);
    return f;
}

double lebesgue_norm(const PhysicalField& p, double r) {
    if (r < 1.0) throw std::invalid_argument("lebesgue_norm: exponent must be >= 1");
    const Domain& d = p.domain;
    if (std::isinf(r)) {
        double m = 0.0;
        for (double v : p.samples) m = std::max(m, std::abs(v));
        return m;
    }
    const double cell = d.grid_spacing() * d.grid_spacing();
    double acc = 0.0;
    if (r == 2.0) {
        for (double v : p.samples) acc += v * v;
    } else {
        for (double v : p.samples) acc += std::pow(std::abs(v), r);
    }
    return std::pow(acc * cell, 1.0 / r);
}

double lebesgue_norm(const SpectralField& f, double r) {
    return lebesgue_norm(to_physical(f), r);
}

double inner_product(const SpectralField& a, const SpectralField& b) {
    if (!a.same_domain(b)) throw std::invalid_argument("inner_product: domain mismatch");
    const double L2 = a.domain().L * a.domain().L;
    const auto ca = a.coeffs();
    const auto cb = b.coeffs();
    double acc = 0.0;
    for (std::size_t i = 0; i < ca.size(); ++i)
        acc += ca[i].real() * cb[i].real() + ca[i].imag() * cb[i].imag();
    return L2 * acc;
}

SpectralField random_field(const Domain& d, std::uint64_t seed, const SpectrumShape& shape) {
    if (shape.band_hi < shape.band_lo)
        throw std::invalid_argument("random_field: empty spectral band");
    if (shape.band_hi > d.dealias_radius)
        throw std::invalid_argument("random_field: band exceeds the dealias radius");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);

    SpectralField f(d);
    bool any = false;
    // Fixed half-plane order keeps the construction deterministic per seed.
    for (int k1 = 0; k1 <= d.dealias_radius; ++k1) {
        for (int k2 = (k1 == 0 ? 1 : -d.dealias_radius); k2 <= d.dealias_radius; ++k2) {
            const double kk = std::hypot(double(k1), double(k2));
            if (kk < shape.band_lo || kk > shape.band_hi) continue;
            if (!d.inside_dealias(k1, k2)) continue;
            const double mag = std::pow(kk, -shape.decay);
            const double ph = phase(rng);
            f.set_coeff_pair(k1, k2, std::polar(mag, ph));
            any = true;
        }
    }
    if (!any) throw std::invalid_argument("random_field: no lattice modes in the requested band");
    SQG_DEBUG_VALIDATE(f);
    return f;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    if (!a.same_domain(b)) throw std::invalid_argument("field sum: domain mismatch");
    SpectralField r = a;
    auto rc = r.mutable_coeffs();
    auto bc = b.coeffs();
    for (std::size_t i = 0; i < rc.size(); ++i) rc[i] += bc[i];
    return r;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    if (!a.same_domain(b)) throw std::invalid_argument("field difference: domain mismatch");
    SpectralField r = a;
    auto rc = r.mutable_coeffs();
    auto bc = b.coeffs();
    for (std::size_t i = 0; i < rc.size(); ++i) rc[i] -= bc[i];
    return r;
}

SpectralField operator*(double s, const SpectralField& a) {
    SpectralField r = a;
    for (auto& z : r.mutable_coeffs()) z *= s;
    return r;
}

SpectralField scaled_to_l2(const SpectralField& a, double target_l2) {
    const double n = lebesgue_norm(a, 2.0);
    if (n == 0.0) throw std::invalid_argument("scaled_to_l2: zero field");
    return (target_l2 / n) * a;
}

}  // namespace sqg
