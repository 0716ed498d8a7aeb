#include <doctest.h>

#include <cmath>

#include "sqg/littlewood_paley.hpp"
#include "sqg/operators.hpp"
#include "sqg/validation.hpp"

using namespace sqg;

namespace {
double rel_err(const SpectralField& got, const SpectralField& want) {
    return lebesgue_norm(got - want, 2.0) / std::max(lebesgue_norm(want, 2.0), 1e-300);
}
}  // namespace

TEST_CASE("cutoff profile plateaus, midpoint and monotonicity") {
    CHECK(ShellSystem::chi(0.0) == 1.0);
    CHECK(ShellSystem::chi(0.5) == 1.0);
    CHECK(ShellSystem::chi(0.75) == 1.0);
    CHECK(ShellSystem::chi(1.0) == 0.0);
    CHECK(ShellSystem::chi(1.2) == 0.0);
    CHECK(ShellSystem::chi(0.875) == doctest::Approx(0.5).epsilon(1e-14));
    double prev = 1.0;
    for (int i = 1; i <= 100; ++i) {
        const double v = ShellSystem::chi(0.75 + 0.25 * i / 100.0);
        CHECK(v <= prev);
        prev = v;
    }
    CHECK_THROWS_AS(ShellSystem::chi(-0.1), std::invalid_argument);
}

TEST_CASE("shell system geometry") {
    const Domain d = make_domain(1.0, 64);
    const ShellSystem shells(d);
    CHECK(shells.q_max() == 4);  // (3/4) 2^4 = 12 <= 21 < 24 = (3/4) 2^5
    CHECK(shells.lambda_q(0) == 1.0);
    CHECK(shells.lambda_q(3) == 8.0);
    CHECK(shells.lambda_q(-1) == 0.5);

    const Domain d2 = make_domain(2.0, 128);
    const ShellSystem shells2(d2);
    CHECK(shells2.q_max() == 5);
    CHECK(shells2.lambda_q(2) == 2.0);  // 2^2 / L

    // support: phi_q vanishes outside (3/4) 2^q <= |xi| <= 2^{q+1}
    for (int q = 0; q <= 4; ++q) {
        const double lo = 0.75 * std::ldexp(1.0, q);
        const double hi = std::ldexp(1.0, q + 1);
        CHECK(ShellSystem::phi(q, lo * 0.999) == 0.0);
        CHECK(ShellSystem::phi(q, hi * 1.001) == 0.0);
        CHECK(ShellSystem::phi(q, 0.5 * (lo + hi)) > 0.0);
    }
}

TEST_CASE("shell projections") {
    const Domain d = make_domain(1.0, 64);
    const ShellSystem shells(d);

    SUBCASE("|k| = 1 lies entirely in shell 0") {
        const SpectralField f = from_modes(d, {Mode{1, 0, {0.5, 0.0}}});
        CHECK(rel_err(shells.shell_project(f, 0), f) < 1e-14);
        for (int q : {-1, 1, 2, 3, 4})
            CHECK(lebesgue_norm(shells.shell_project(f, q), 2.0) < 1e-15);
    }
    SUBCASE("zero field projects to zero") {
        for (int q = -1; q <= shells.q_max(); ++q)
            CHECK(lebesgue_norm(shells.shell_project(SpectralField(d), q), 2.0) == 0.0);
    }
    SUBCASE("shells reconstruct the field") {
        for (int s = 0; s < 20; ++s) {
            const SpectralField f = random_field(d, 700 + s, {1.0, 1.0, 21.0});
            SpectralField sum(d);
            for (int q = -1; q <= shells.q_max(); ++q) sum = sum + shells.shell_project(f, q);
            CHECK(rel_err(sum, f) < 1e-12);
        }
    }
    SUBCASE("out-of-range shell index") {
        const SpectralField f = from_modes(d, {Mode{1, 0, {0.5, 0.0}}});
        CHECK_THROWS_AS(shells.shell_project(f, shells.q_max() + 1), std::invalid_argument);
        CHECK_THROWS_AS(shells.shell_project(f, -2), std::invalid_argument);
    }
}

TEST_CASE("lowpass telescoping and saturation") {
    const Domain d = make_domain(1.0, 64);
    const ShellSystem shells(d);

    SUBCASE("analytic values on single modes") {
        const SpectralField f1 = from_modes(d, {Mode{1, 0, {0.5, 0.0}}});
        CHECK(rel_err(shells.lowpass(f1, 0), f1) < 1e-14);  // chi(1/2) = 1
        const SpectralField f8 = from_modes(d, {Mode{8, 0, {0.5, 0.0}}});
        CHECK(lebesgue_norm(shells.lowpass(f8, 0), 2.0) < 1e-15);  // chi(4) = 0
    }
    SUBCASE("Q beyond q_max is the identity on dealiased fields") {
        const SpectralField f = random_field(d, 31, {1.0, 1.0, 21.0});
        CHECK(rel_err(shells.lowpass(f, shells.q_max() + 1), f) < 1e-14);
    }
    SUBCASE("telescoping: lowpass equals the shell sum to machine precision") {
        const SpectralField f = random_field(d, 33, {1.0, 1.0, 21.0});
        double cmax_f = 0.0;
        for (const auto& z : f.coeffs()) cmax_f = std::max(cmax_f, std::abs(z));
        for (int Q = -1; Q <= shells.q_max(); ++Q) {
            SpectralField sum(d);
            for (int q = -1; q <= Q; ++q) sum = sum + shells.shell_project(f, q);
            const SpectralField diff = shells.lowpass(f, Q) - sum;
            double cmax = 0.0;
            for (const auto& z : diff.coeffs()) cmax = std::max(cmax, std::abs(z));
            CHECK(cmax <= 1e-13 * cmax_f);
        }
    }
    SUBCASE("idempotence under composition with larger Q") {
        const SpectralField f = random_field(d, 34, {1.0, 1.0, 21.0});
        for (int Q = -1; Q <= 3; ++Q) {
            const SpectralField once = shells.lowpass(f, Q);
            const SpectralField twice = shells.lowpass(once, Q + 1);
            CHECK(lebesgue_norm(twice - once, 2.0) == 0.0);
        }
    }
}

TEST_CASE("band projection") {
    const Domain d = make_domain(1.0, 64);
    const ShellSystem shells(d);
    const SpectralField f = random_field(d, 41, {1.0, 1.0, 21.0});

    CHECK(rel_err(shells.band_project(f, -1, shells.q_max()), f) < 1e-12);
    for (int q = 0; q <= shells.q_max(); ++q)
        CHECK(rel_err(shells.band_project(f, q, q), shells.shell_project(f, q)) == 0.0);
    const SpectralField complement =
        shells.lowpass(f, 1) + shells.band_project(f, 2, shells.q_max());
    CHECK(rel_err(complement, f) < 1e-12);
    CHECK_THROWS_AS(shells.band_project(f, 3, 2), std::invalid_argument);
}

TEST_CASE("partition of unity on sampled radii") {
    const Domain d = make_domain(1.0, 64);
    const ShellSystem shells(d);
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double r = d.dealias_radius * i / 2000.0;
        double sum = 0.0;
        for (int q = -1; q <= shells.q_max(); ++q) sum += ShellSystem::phi(q, r);
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("besov norm") {
    const Domain d = make_domain(1.0, 64);
    const ShellSystem shells(d);

    SUBCASE("single-shell field reduces to its L^l norm") {
        const SpectralField f = from_modes(d, {Mode{1, 0, {0.5, 0.0}}});
        CHECK(shells.besov_norm(f, 0.0, 4.0) ==
              doctest::Approx(std::pow(3.0 / 8.0, 0.25)).epsilon(1e-12));
        CHECK(shells.besov_norm(f, 0.0, 4.0) ==
              doctest::Approx(lebesgue_norm(f, 4.0)).epsilon(1e-12));
    }
    SUBCASE("zero field") { CHECK(shells.besov_norm(SpectralField(d), 0.0, 2.0) == 0.0); }
    SUBCASE("s=0, l=2 lies in the overlap band [‖θ‖₂/√2, ‖θ‖₂]") {
        for (int s = 0; s < 10; ++s) {
            const SpectralField f = random_field(d, 800 + s, {1.0, 1.0, 21.0});
            const double b = shells.besov_norm(f, 0.0, 2.0);
            const double n = lebesgue_norm(f, 2.0);
            CHECK(b >= n / std::sqrt(2.0) * (1 - 1e-12));
            CHECK(b <= n * (1 + 1e-12));
        }
    }
    SUBCASE("weights scale with lambda_q^s") {
        const SpectralField f = from_modes(d, {Mode{8, 0, {0.5, 0.0}}});  // shell 3
        const double b = shells.besov_norm(f, 1.0, 2.0);
        CHECK(b == doctest::Approx(8.0 * lebesgue_norm(f, 2.0)).epsilon(1e-12));
    }
    SUBCASE("l < 1 rejected") {
        CHECK_THROWS_AS(shells.besov_norm(SpectralField(d), 0.0, 0.5), std::invalid_argument);
    }
}

TEST_CASE("shell spectrum support") {
    const Domain d = make_domain(1.0, 64);
    const ShellSystem shells(d);

    SUBCASE("cosine occupies shell 0 only") {
        const SpectralField f = from_modes(d, {Mode{1, 0, {0.5, 0.0}}});
        for (const auto& [q, n] : shells.shell_spectrum(f, 2.0)) {
            if (q == 0) CHECK(n > 0.0);
            else CHECK(n < 1e-15);
        }
    }
    SUBCASE("zero field has an all-zero spectrum") {
        for (const auto& [q, n] : shells.shell_spectrum(SpectralField(d), 2.0)) CHECK(n == 0.0);
    }
    SUBCASE("band field lights up exactly the intersecting shells") {
        const SpectralField f = random_field(d, 55, {0.0, 1.0, 21.0});
        for (const auto& [q, n] : shells.shell_spectrum(f, 2.0)) {
            if (q == -1) { CHECK(n == 0.0); continue; }
            // shell q intersects the band [1,21] iff its support does
            const double lo = 0.75 * std::ldexp(1.0, q);
            bool has_modes = false;
            for (int k1 = -21; k1 <= 21 && !has_modes; ++k1)
                for (int k2 = -21; k2 <= 21 && !has_modes; ++k2) {
                    if ((k1 == 0 && k2 == 0) || !d.inside_dealias(k1, k2)) continue;
                    if (ShellSystem::phi(q, std::hypot(double(k1), double(k2))) > 0.0)
                        has_modes = true;
                }
            if (has_modes) CHECK(n > 0.0);
            else CHECK(n == 0.0);
            (void)lo;
        }
    }
}

TEST_CASE("bernstein and coercivity on reduced ensembles") {
    // Full-size ensembles run in the acceptance suite; this keeps unit runs fast.
    const auto bern = checks::bernstein_ratios(24);
    CHECK(bern.pass);
    const auto coer = checks::shell_coercivity(16);
    CHECK(coer.pass);
    const auto single = checks::coercivity_single_mode();
    CHECK(single.pass);
}
