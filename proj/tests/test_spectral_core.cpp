#include <doctest.h>

#include <cmath>

#include "sqg/spectral_field.hpp"

using namespace sqg;

TEST_CASE("domain construction and dealias radius") {
    const Domain d = make_domain(1.0, 64);
    CHECK(d.lambda0 == 1.0);
    CHECK(d.dealias_radius == 21);
    const Domain d2 = make_domain(2.0, 128);
    CHECK(d2.lambda0 == 0.5);
    CHECK(d2.dealias_radius == 42);
    CHECK(d.lambda0 * d.L == 1.0);
    CHECK(d2.lambda0 * d2.L == 1.0);

    CHECK_THROWS_AS(make_domain(1.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(make_domain(1.0, 6), std::invalid_argument);
    CHECK_THROWS_AS(make_domain(-1.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(make_domain(0.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(make_domain(1.0, 65), std::invalid_argument);
}

TEST_CASE("from_modes produces the expected physical fields") {
    const Domain d = make_domain(1.0, 64);

    SUBCASE("cos(2 pi x1) from the (1,0) half-amplitude pair") {
        const SpectralField f = from_modes(d, {Mode{1, 0, {0.5, 0.0}}});
        const PhysicalField p = to_physical(f);
        for (int i = 0; i < d.N; ++i) {
            const double x1 = d.L * i / d.N;
            CHECK(p.at(i, 7) == doctest::Approx(std::cos(2.0 * M_PI * x1)).epsilon(1e-13));
        }
    }
    SUBCASE("sin(4 pi x2) from (0,2) with amplitude -i/2") {
        const SpectralField f = from_modes(d, {Mode{0, 2, {0.0, -0.5}}});
        const PhysicalField p = to_physical(f);
        for (int j = 0; j < d.N; ++j) {
            const double x2 = d.L * j / d.N;
            CHECK(p.at(3, j) == doctest::Approx(std::sin(4.0 * M_PI * x2)).epsilon(1e-13));
        }
    }
    SUBCASE("empty list gives the zero field") {
        const SpectralField f = from_modes(d, {});
        CHECK(lebesgue_norm(f, 2.0) == 0.0);
    }
    SUBCASE("mean mode and out-of-ball modes are rejected") {
        CHECK_THROWS_AS(from_modes(d, {Mode{0, 0, {1.0, 0.0}}}), std::invalid_argument);
        CHECK_THROWS_AS(from_modes(d, {Mode{22, 0, {1.0, 0.0}}}), std::invalid_argument);
        CHECK_THROWS_AS(from_modes(d, {Mode{15, 15, {1.0, 0.0}}}), std::invalid_argument);
        CHECK_NOTHROW(from_modes(d, {Mode{21, 0, {1.0, 0.0}}}));
    }
}

TEST_CASE("transform round trip") {
    const Domain d = make_domain(1.0, 64);
    SUBCASE("zero field") {
        const SpectralField z(d);
        const SpectralField back = to_spectral(to_physical(z));
        CHECK(lebesgue_norm(back, 2.0) == 0.0);
    }
    SUBCASE("cosine maps to the half-amplitude pair") {
        PhysicalField p{d, std::vector<double>(d.size())};
        for (int i = 0; i < d.N; ++i)
            for (int j = 0; j < d.N; ++j)
                p.at(i, j) = std::cos(2.0 * M_PI * i / d.N);
        const SpectralField f = to_spectral(p);
        CHECK(f.coeff(1, 0).real() == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(f.coeff(-1, 0).real() == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(std::abs(f.coeff(0, 1)) < 1e-14);
    }
    SUBCASE("seeded band-limited fields round trip to 1e-13") {
        for (int s = 0; s < 25; ++s) {
            const SpectralField f = random_field(d, 500 + s, {1.0, 1.0, 21.0});
            const SpectralField g = to_spectral(to_physical(f));
            const double err = lebesgue_norm(g - f, 2.0) / lebesgue_norm(f, 2.0);
            CHECK(err < 1e-13);
        }
    }
    SUBCASE("size mismatch is rejected") {
        PhysicalField bad{d, std::vector<double>(17)};
        CHECK_THROWS_AS(to_spectral(bad), std::invalid_argument);
    }
}

TEST_CASE("lebesgue norms") {
    const Domain d = make_domain(1.0, 64);
    const SpectralField c = from_modes(d, {Mode{1, 0, {0.5, 0.0}}});

    CHECK(lebesgue_norm(c, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(lebesgue_norm(c, 4.0) == doctest::Approx(std::pow(3.0 / 8.0, 0.25)).epsilon(1e-12));
    CHECK(lebesgue_norm(c, INFINITY) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lebesgue_norm(SpectralField(d), 3.7) == 0.0);
    CHECK_THROWS_AS(lebesgue_norm(c, 0.5), std::invalid_argument);

    SUBCASE("r=2 grid norm matches Parseval") {
        for (int s = 0; s < 10; ++s) {
            const SpectralField f = random_field(d, 600 + s, {1.2, 1.0, 21.0});
            double sum = 0.0;
            for (const auto& z : f.coeffs()) sum += std::norm(z);
            const double parseval = std::sqrt(d.L * d.L * sum);
            const double grid = lebesgue_norm(f, 2.0);
            CHECK(std::abs(grid * grid - parseval * parseval) <= 1e-12 * parseval * parseval);
        }
    }
}

TEST_CASE("inner product") {
    const Domain d = make_domain(1.0, 64);
    const SpectralField c = from_modes(d, {Mode{1, 0, {0.5, 0.0}}});
    const SpectralField s = from_modes(d, {Mode{1, 0, {0.0, -0.5}}});
    CHECK(inner_product(c, c) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(inner_product(c, s) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(inner_product(c, SpectralField(d)) == 0.0);
    CHECK(inner_product(c, s) == inner_product(s, c));
    const double n2 = lebesgue_norm(c, 2.0);
    CHECK(inner_product(c, c) == doctest::Approx(n2 * n2).epsilon(1e-12));

    const Domain d2 = make_domain(2.0, 64);
    CHECK_THROWS_AS(inner_product(c, SpectralField(d2)), std::invalid_argument);
}

TEST_CASE("random_field determinism and spectrum") {
    const Domain d = make_domain(1.0, 64);
    const SpectralField a = random_field(d, 7, {2.0, 1.0, 10.0});
    const SpectralField b = random_field(d, 7, {2.0, 1.0, 10.0});
    CHECK(lebesgue_norm(a - b, 2.0) == 0.0);
    const SpectralField c = random_field(d, 8, {2.0, 1.0, 10.0});
    CHECK(lebesgue_norm(a - c, 2.0) > 0.0);

    SUBCASE("band [1,1] puts energy only at |k| = 1") {
        const SpectralField f = random_field(d, 9, {0.0, 1.0, 1.0});
        for (int k1 = -21; k1 <= 21; ++k1)
            for (int k2 = -21; k2 <= 21; ++k2) {
                if (!d.inside_dealias(k1, k2)) continue;
                const double kk = std::hypot(double(k1), double(k2));
                if (kk != 1.0) CHECK(std::abs(f.coeff(k1, k2)) == 0.0);
            }
        CHECK(lebesgue_norm(f, 2.0) > 0.0);
    }
    SUBCASE("norm agrees with the direct magnitude sum") {
        const SpectralField f = random_field(d, 10, {2.0, 1.0, 10.0});
        double sum = 0.0;
        for (int k1 = -21; k1 <= 21; ++k1)
            for (int k2 = -21; k2 <= 21; ++k2) {
                if (k1 == 0 && k2 == 0) continue;
                if (!d.inside_dealias(k1, k2)) continue;
                const double kk = std::hypot(double(k1), double(k2));
                if (kk < 1.0 || kk > 10.0) continue;
                sum += std::pow(kk, -4.0);
            }
        CHECK(lebesgue_norm(f, 2.0) == doctest::Approx(std::sqrt(sum)).epsilon(1e-12));
    }
    SUBCASE("empty band is rejected") {
        CHECK_THROWS_AS(random_field(d, 1, {1.0, 5.0, 4.0}), std::invalid_argument);
        CHECK_THROWS_AS(random_field(d, 1, {1.0, 0.1, 0.9}), std::invalid_argument);
    }
}

TEST_CASE("field invariants survive arithmetic and validate() rejects corruption") {
    const Domain d = make_domain(1.0, 64);
    const SpectralField a = random_field(d, 20, {1.0, 1.0, 21.0});
    const SpectralField b = random_field(d, 21, {1.0, 1.0, 21.0});
    CHECK_NOTHROW((a + b).validate());
    CHECK_NOTHROW((a - b).validate());
    CHECK_NOTHROW((3.5 * a).validate());

    SpectralField bad = a;
    bad.mutable_coeffs()[d.flat(d.index_of(3), d.index_of(2))] += std::complex<double>(1.0, 0.0);
    CHECK_THROWS(bad.validate());

    SpectralField bad_mean = a;
    bad_mean.mutable_coeffs()[0] = 1.0;
    CHECK_THROWS(bad_mean.validate());

    SpectralField bad_alias = a;
    bad_alias.mutable_coeffs()[d.flat(d.index_of(30), d.index_of(0))] = 1.0;
    CHECK_THROWS(bad_alias.validate());
}
