// Tests for the curvature-trigonometry kernel: reference values frozen from
// a high-precision external evaluation, exact special cases, the identity
// scan, inverses, and domain guards.
#include <catch2/catch_amalgamated.hpp>

#include "cklh/cklh.hpp"
#include "oracle_values.hpp"

#include <cmath>
#include <limits>

using namespace cklh;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("kernel values match high-precision references", "[ktrig]")
{
    CHECK_THAT(ck(-0.37, 0.9), WithinRel(oracle::ck_m037_09, 1e-14));
    CHECK_THAT(sk(-0.37, 0.9), WithinRel(oracle::sk_m037_09, 1e-14));
    CHECK_THAT(tk(0.3, 0.7), WithinRel(oracle::tk_03_07, 1e-14));
    CHECK_THAT(vk(-2.0, 1.3), WithinRel(oracle::vk_m2_13, 1e-14));
    CHECK_THAT(ck(-1.0, 1.0), WithinRel(oracle::cosh1, 1e-14));
    CHECK_THAT(2.0 * vk(-1.0, 1.0), WithinRel(oracle::two_cosh1_minus_2, 1e-14));
    CHECK_THAT(ck_derivatives(0.3, 0.7).dT, WithinRel(oracle::dT_03_07, 1e-14));
}

TEST_CASE("series regime agrees with the closed form near kappa = 0", "[ktrig]")
{
    // |kappa| u^2 = 9e-9 sits below the series switch; the reference values
    // come from 50-digit evaluation of the closed forms.
    CHECK_THAT(ck(1e-9, 3.0), WithinRel(oracle::ck_1en9_3, 1e-15));
    CHECK_THAT(sk(1e-9, 3.0), WithinRel(oracle::sk_1en9_3, 1e-15));
    CHECK_THAT(vk(1e-9, 3.0), WithinRel(oracle::vk_1en9_3, 1e-15));
    CHECK_THAT(vk(-1e-9, 3.0), WithinRel(oracle::vk_m1en9_3, 1e-15));

    // Just below the switch the series path must agree with the closed form
    // evaluated directly at the same point: the truncation error there is
    // O((kappa u^2)^2), far below double precision.
    const double kb = 0.99e-8;
    CHECK_THAT(ck(kb, 1.0), WithinRel(std::cos(std::sqrt(kb)), 1e-14));
    CHECK_THAT(sk(kb, 1.0), WithinRel(std::sin(std::sqrt(kb)) / std::sqrt(kb), 1e-14));
    CHECK_THAT(ck(-kb, 1.0), WithinRel(std::cosh(std::sqrt(kb)), 1e-14));
    CHECK_THAT(sk(-kb, 1.0), WithinRel(std::sinh(std::sqrt(kb)) / std::sqrt(kb), 1e-14));
}

TEST_CASE("flat limit is exact", "[ktrig]")
{
    CHECK(ck(0.0, 2.7) == 1.0);
    CHECK(sk(0.0, 2.7) == 2.7);
    CHECK(tk(0.0, 2.7) == 2.7);
    CHECK(vk(0.0, 2.7) == 0.5 * 2.7 * 2.7);
}

TEST_CASE("unit curvatures reduce to circular and hyperbolic functions", "[ktrig]")
{
    const double u = 0.83;
    CHECK_THAT(ck(1.0, u), WithinRel(std::cos(u), 1e-15));
    CHECK_THAT(sk(1.0, u), WithinRel(std::sin(u), 1e-15));
    CHECK_THAT(tk(1.0, u), WithinRel(std::tan(u), 1e-15));
    CHECK_THAT(ck(-1.0, u), WithinRel(std::cosh(u), 1e-15));
    CHECK_THAT(sk(-1.0, u), WithinRel(std::sinh(u), 1e-15));
    CHECK_THAT(tk(-1.0, u), WithinRel(std::tanh(u), 1e-15));
    // General kappa > 0 rescales the argument.
    CHECK_THAT(ck(4.0, u), WithinRel(std::cos(2.0 * u), 1e-15));
    CHECK_THAT(sk(4.0, u), WithinRel(0.5 * std::sin(2.0 * u), 1e-15));
}

TEST_CASE("identity scan stays below threshold across curvature regimes", "[ktrig]")
{
    for (double kappa : {1.0, 0.5, 0.0, -0.5, -1.0, 1e-9, -1e-9}) {
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) {
                const double u = -2.0 + 1.0 * i;
                const double v = -1.8 + 0.9 * j;
                const IdentityScanResult r = identity_residuals(kappa, u, v);
                INFO("kappa=" << kappa << " u=" << u << " v=" << v);
                CHECK(r.evaluated > 0);
                CHECK(r.max_residual <= 1e-12);
            }
        }
    }
}

TEST_CASE("identity scan skips guarded tangent combinations", "[ktrig]")
{
    // Near a tangent pole the guarded identities are skipped, not failed.
    const IdentityScanResult r = identity_residuals(1.0, M_PI / 2.0 - 1e-9, 0.4);
    CHECK(r.skipped > 0);
    CHECK(r.max_residual <= 1e-12);
}

TEST_CASE("tangent pole and non-finite arguments are rejected", "[ktrig]")
{
    CHECK_THROWS_AS(tk(1.0, M_PI / 2.0), DomainError);
    CHECK_THROWS_AS(ck_derivatives(1.0, M_PI / 2.0), DomainError);
    CHECK_THROWS_AS(ck(1.0, std::numeric_limits<double>::infinity()), DomainError);
    CHECK_THROWS_AS(sk(std::numeric_limits<double>::quiet_NaN(), 1.0), DomainError);
}

TEST_CASE("arc recovery inverts the cosine/sine pair", "[ktrig]")
{
    CHECK_THAT(arc_from_cs(1.0, std::cos(0.8), std::sin(0.8)), WithinRel(0.8, 1e-14));
    CHECK_THAT(arc_from_cs(-1.0, std::cosh(0.8), std::sinh(0.8)), WithinRel(0.8, 1e-14));
    CHECK(arc_from_cs(0.0, 1.0, 0.8) == 0.8);
    // The compact direction reports on the half-open principal range: both
    // ends of the circle map to +pi.
    CHECK_THAT(arc_from_cs(1.0, std::cos(M_PI), std::sin(M_PI)), WithinAbs(M_PI, 1e-12));
    CHECK_THAT(arc_from_cs(1.0, std::cos(-M_PI), std::sin(-M_PI)), WithinAbs(M_PI, 1e-12));
    CHECK_THROWS_AS(arc_from_cs(1.0, std::numeric_limits<double>::quiet_NaN(), 0.0), DomainError);
}

TEST_CASE("inverse tangent round-trips and respects the hyperbolic range", "[ktrig]")
{
    for (double kappa : {1.0, 0.0, -1.0, 0.35, -0.6}) {
        const double u = 0.47;
        CHECK_THAT(inv_tk(kappa, tk(kappa, u)), WithinRel(u, 1e-13));
    }
    CHECK_THROWS_AS(inv_tk(-1.0, 1.5), DomainError);
    CHECK_THROWS_AS(inv_tk(-4.0, 0.5), DomainError); // sqrt(4)*0.5 = 1 on the boundary
}

TEST_CASE("angle wrapping is periodic on compact directions only", "[ktrig]")
{
    CHECK_THAT(wrap_angle(1.0, 0.3 + 2.0 * M_PI), WithinAbs(0.3, 1e-13));
    CHECK_THAT(wrap_angle(4.0, 0.2 + M_PI), WithinAbs(0.2, 1e-13));
    CHECK(wrap_angle(0.0, 42.0) == 42.0);
    CHECK(wrap_angle(-1.0, 42.0) == 42.0);
    // The lower boundary folds onto the upper one.
    CHECK_THAT(wrap_angle(1.0, -M_PI), WithinAbs(M_PI, 1e-12));
}

TEST_CASE("derivative block matches finite differences", "[ktrig]")
{
    const double kappa = -0.8, u = 0.9, h = 1e-6;
    const KTrigDerivatives d = ck_derivatives(kappa, u);
    CHECK_THAT(d.dC, WithinAbs((ck(kappa, u + h) - ck(kappa, u - h)) / (2 * h), 1e-8));
    CHECK_THAT(d.dS, WithinAbs((sk(kappa, u + h) - sk(kappa, u - h)) / (2 * h), 1e-8));
    CHECK_THAT(d.dT, WithinAbs((tk(kappa, u + h) - tk(kappa, u - h)) / (2 * h), 1e-7));
    CHECK_THAT(d.dV, WithinAbs((vk(kappa, u + h) - vk(kappa, u - h)) / (2 * h), 1e-8));
}
