#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace sqg {

/// Periodic square [0,L]^2 discretized with N uniform nodes per side.
/// Spectral coefficients live on the integer lattice k in [-N/2, N/2)^2;
/// the 2/3 rule keeps the circular ball |k| <= dealias_radius = floor(N/3).
struct Domain {
    double L = 1.0;
    int N = 0;
    double lambda0 = 1.0;   // base wavenumber 1/L
    int dealias_radius = 0;

    // FFT storage index -> signed wavenumber and back
    int wavenumber(int idx) const { return idx <= N / 2 - 1 ? idx : idx - N; }
    int index_of(int k) const { return k >= 0 ? k : k + N; }
    std::size_t flat(int i1, int i2) const {
        return static_cast<std::size_t>(i1) * N + i2;  // k2 fastest
    }

    bool inside_dealias(int k1, int k2) const {
        return k1 * k1 + k2 * k2 <= dealias_radius * dealias_radius;
    }
    double grid_spacing() const { return L / N; }
    std::size_t size() const { return static_cast<std::size_t>(N) * N; }

    bool operator==(const Domain& o) const { return L == o.L && N == o.N; }
    bool operator!=(const Domain& o) const { return !(*this == o); }
};

inline Domain make_domain(double L, int N) {
    if (!(L > 0.0))
        throw std::invalid_argument("domain: side length L must be positive, got " + std::to_string(L));
    if (N < 8)
        throw std::invalid_argument("domain: need N >= 8 grid points per side, got " + std::to_string(N));
    if (N % 2 != 0)
        throw std::invalid_argument("domain: N must be even, got " + std::to_string(N));
    Domain d;
    d.L = L;
    d.N = N;
    d.lambda0 = 1.0 / L;
    d.dealias_radius = N / 3;  // floor
    return d;
}

}  // namespace sqg
