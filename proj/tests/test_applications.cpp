// Tests for the application systems built on the two parent families:
// right-hand sides, pulled-back Hamiltonians and weights against frozen
// references, coordinate-change round trips, pushforward equivalence in both
// directions, the conserved two-copy invariant, the truncated oscillator
// system, and the second-order reduction residual.
#include <catch2/catch_amalgamated.hpp>

#include "cklh/cklh.hpp"
#include "oracle_values.hpp"

#include <cmath>

using namespace cklh;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

void check_vec(const TangentVector& got, const double (&want)[2], double tol = 1e-13)
{
    CHECK_THAT(got.vx, WithinRel(want[0], tol));
    CHECK_THAT(got.vy, WithinRel(want[1], tol));
}

void check_bundle_point(const ApplicationBundle& b, double u, double v, const double (&h)[3],
                        double W)
{
    CHECK_THAT(b.hamiltonians[0].value(u, v), WithinRel(h[0], 1e-12));
    CHECK_THAT(b.hamiltonians[1].value(u, v), WithinRel(h[1], 1e-12));
    CHECK_THAT(b.hamiltonians[2].value(u, v), WithinRel(h[2], 1e-12));
    CHECK_THAT(b.weight.at(u, v), WithinRel(W, 1e-12));
    CHECK_THAT(casimir(b.casimir_kappa, b.hamiltonians[0].value(u, v),
                       b.hamiltonians[1].value(u, v), b.hamiltonians[2].value(u, v)),
               WithinAbs(b.casimir_value, 1e-10));
}

void check_change_roundtrip(const CoordinateChange& c, double u, double v)
{
    REQUIRE(c.source_ok(u, v));
    const auto fwd = c.forward(u, v);
    REQUIRE(c.target_ok(fwd[0], fwd[1]));
    const auto back = c.inverse(fwd[0], fwd[1]);
    CHECK_THAT(back[0], WithinAbs(u, 1e-11));
    CHECK_THAT(back[1], WithinAbs(v, 1e-11));

    // Exact Jacobian vs central differences.
    const auto j = c.jacobian(u, v);
    const double h = 1e-6;
    const auto fup = c.forward(u + h, v), fum = c.forward(u - h, v);
    const auto fvp = c.forward(u, v + h), fvm = c.forward(u, v - h);
    CHECK_THAT(j[0][0], WithinAbs((fup[0] - fum[0]) / (2 * h), 1e-6));
    CHECK_THAT(j[0][1], WithinAbs((fvp[0] - fvm[0]) / (2 * h), 1e-6));
    CHECK_THAT(j[1][0], WithinAbs((fup[1] - fum[1]) / (2 * h), 1e-6));
    CHECK_THAT(j[1][1], WithinAbs((fvp[1] - fvm[1]) / (2 * h), 1e-6));
}

void check_pushforward_both_ways(const ApplicationBundle& b, double u, double v)
{
    CHECK(pushforward_residual(b.change, b.fields, b.class_fields, u, v) < 1e-7);
    const auto img = b.change.forward(u, v);
    CHECK(pushforward_residual(reversed(b.change), b.class_fields, b.fields, img[0], img[1])
          < 1e-7);
}

} // namespace

TEST_CASE("split-form scalar system matches the frozen reference", "[applications]")
{
    const CoefficientSet b{Coefficient::constant(0.3), Coefficient::constant(-0.7),
                           Coefficient::constant(1.1)};
    check_vec(sc_riccati_rhs(0.8, b, 0.0, 0.4, 0.9), oracle::scr_rhs);

    const ApplicationBundle bun = sc_riccati_bundle(0.8);
    check_bundle_point(bun, 0.4, 0.9, oracle::scr_h, oracle::scr_W);
    check_change_roundtrip(bun.change, 0.4, 0.9);
    check_pushforward_both_ways(bun, 0.4, 0.9);
}

TEST_CASE("diffusion-family system matches the frozen reference", "[applications]")
{
    const Coefficient a = Coefficient::constant(0.5);
    const Coefficient b = Coefficient::constant(-0.2);
    const Coefficient c = Coefficient::constant(0.9);
    check_vec(diffusion_rhs(-0.6, a, b, c, 0.0, 0.3, 0.8), oracle::diff_rhs);

    const ApplicationBundle bun = diffusion_bundle(-0.6);
    check_bundle_point(bun, 0.3, 0.8, oracle::diff_h, oracle::diff_W);
    check_change_roundtrip(bun.change, 0.3, 0.8);
    check_pushforward_both_ways(bun, 0.3, 0.8);
}

TEST_CASE("third-order model on the first family matches the frozen reference",
          "[applications]")
{
    const ModelParams params = ModelParams::kummer_schwarz(ModelClass::NegC, 1.2);
    CHECK_THAT(params.c, WithinRel(-1.0 / (4.0 * 1.44), 1e-15));
    const KappaSignature k{0.9, 0.0};
    check_vec(ks_rhs(ModelClass::NegC, k, params, Coefficient::constant(0.4), 0.0, 0.7, 0.5),
              oracle::ksn_rhs);

    const ApplicationBundle bun = ks_neg_bundle(0.9, params);
    check_bundle_point(bun, 0.7, 0.5, oracle::ksn_h, oracle::ksn_W);
    check_change_roundtrip(bun.change, 0.7, 0.5);
    check_pushforward_both_ways(bun, 0.7, 0.5);
}

TEST_CASE("oscillator model on the first family matches the frozen reference",
          "[applications]")
{
    const ModelParams params = ModelParams::ermakov(ModelClass::NegC, 1.1);
    CHECK_THAT(params.c, WithinRel(-0.25 * std::pow(1.1, 4.0), 1e-15));
    const KappaSignature k{-0.7, 0.0};
    check_vec(ermakov_rhs(ModelClass::NegC, k, params, Coefficient::constant(0.6), 0.0, 0.9,
                          -0.4),
              oracle::ern_rhs);

    const ApplicationBundle bun = ermakov_neg_bundle(-0.7, params);
    check_bundle_point(bun, 0.9, -0.4, oracle::ern_h, oracle::ern_W);
    check_change_roundtrip(bun.change, 0.9, -0.4);
    check_pushforward_both_ways(bun, 0.9, -0.4);
}

TEST_CASE("third-order model on the second family matches the frozen reference",
          "[applications]")
{
    const ModelParams params = ModelParams::kummer_schwarz(ModelClass::PosC, 1.3);
    CHECK_THAT(params.c, WithinRel(1.0 / 1.69, 1e-15));
    const KappaSignature k{0.8, -0.5};
    check_vec(ks_rhs(ModelClass::PosC, k, params, Coefficient::constant(-0.2), 0.0, 0.6, 0.4),
              oracle::ksp_rhs);

    const ApplicationBundle bun = ks_pos_bundle(k, params);
    check_bundle_point(bun, 0.6, 0.4, oracle::ksp_h, oracle::ksp_W);
    check_change_roundtrip(bun.change, 0.6, 0.4);
    check_pushforward_both_ways(bun, 0.6, 0.4);
}

TEST_CASE("oscillator model on the second family matches the frozen reference",
          "[applications]")
{
    const ModelParams params = ModelParams::ermakov(ModelClass::PosC, 1.05);
    CHECK_THAT(params.c, WithinRel(std::pow(1.05, 4.0), 1e-15));
    const KappaSignature k{-0.4, 0.9};
    check_vec(ermakov_rhs(ModelClass::PosC, k, params, Coefficient::constant(0.8), 0.0, 1.2,
                          0.3),
              oracle::erp_rhs);

    const ApplicationBundle bun = ermakov_pos_bundle(k, params);
    check_bundle_point(bun, 1.2, 0.3, oracle::erp_h, oracle::erp_W);
    check_change_roundtrip(bun.change, 1.2, 0.3);
    check_pushforward_both_ways(bun, 1.2, 0.3);
}

TEST_CASE("two-copy invariant matches the frozen reference and is conserved",
          "[applications]")
{
    const ModelParams params = ModelParams::ermakov(ModelClass::NegC, 1.3);
    CHECK_THAT(milne_pinney_invariant(0.5, params, 1.1, 0.4, 0.8, -0.2),
               WithinRel(oracle::mp_inv, 1e-12));
    CHECK_THROWS_AS(milne_pinney_invariant(0.5, params, 0.0, 0.4, 0.8, -0.2), DomainError);

    // Two copies driven by the same frequency conserve the invariant.
    const ModelParams run = ModelParams::ermakov(ModelClass::NegC, 0.8);
    const Coefficient Omega = Coefficient::sinusoid(0.1, 0.9, 0.5, 0.25);
    const double kappa = 0.5;
    const SystemRHS sys = ermakov_system(ModelClass::NegC, {kappa, 0.0}, run, Omega);
    IntegrateOptions io;
    io.rtol = 1e-12;
    io.atol = 1e-14;
    io.domain_ok = [](double, const StateVector& s) { return s[0] > 0.05; };
    const Trajectory c1 = integrate(sys, {1.0, 0.8}, 0.0, 5.0, io);
    const Trajectory c2 = integrate(sys, {1.4, 0.6}, 0.0, 5.0, io);
    REQUIRE(c1.status == TrajectoryStatus::Complete);
    REQUIRE(c2.status == TrajectoryStatus::Complete);
    const BundleInvariant inv = [&](const std::vector<StateVector>& ss) {
        return milne_pinney_invariant(kappa, run, ss[0][0], ss[0][1], ss[1][0], ss[1][1]);
    };
    const InvariantReport rep = monitor("two-copy invariant", {&c1, &c2}, inv, 1e-8, 120);
    CHECK(rep.pass);
    CHECK(rep.excluded == 0);
}

TEST_CASE("flat limit of the oscillator invariant is the classic quadratic form",
          "[applications]")
{
    const ModelParams params = ModelParams::ermakov(ModelClass::NegC, 1.3);
    const double c = params.c;
    const double u1 = 1.1, v1 = 0.4, u2 = 0.8, v2 = -0.2;
    const double want = 0.25 * std::pow(u1 * v2 - u2 * v1, 2.0)
                      + 0.25 * c * (u1 * u1 / (u2 * u2) + u2 * u2 / (u1 * u1)) + 0.5 * c;
    CHECK_THAT(milne_pinney_invariant(0.0, params, u1, v1, u2, v2), WithinRel(want, 1e-12));
}

TEST_CASE("truncated oscillator system reproduces the worked example", "[applications]")
{
    // c = -1 corresponds to lambda^4 = 4.
    const ModelParams params = ModelParams::ermakov(ModelClass::NegC, std::sqrt(std::sqrt(4.0)));
    CHECK_THAT(params.c, WithinRel(-1.0, 1e-14));
    const TangentVector v =
        ermakov_perturbed_rhs(0.1, params, Coefficient::constant(0.0), 0.0, 1.0, 1.0);
    CHECK_THAT(v.vx, WithinRel(1.0 - 0.1 / 3.0, 1e-13));

    // Near kappa = 0 the truncation approaches the exact oscillator system.
    const double kappa = 1e-3;
    const TangentVector exact = ermakov_rhs(ModelClass::NegC, {kappa, 0.0}, params,
                                            Coefficient::constant(0.6), 0.0, 0.9, -0.4);
    const TangentVector approx = ermakov_perturbed_rhs(kappa, params, Coefficient::constant(0.6),
                                                       0.0, 0.9, -0.4);
    CHECK_THAT(approx.vx, WithinAbs(exact.vx, 1e-4));
    CHECK_THAT(approx.vy, WithinAbs(exact.vy, 1e-4));
}

TEST_CASE("reduction residual is small for the right label and large for a wrong one",
          "[applications]")
{
    const CoefficientSet coeffs{Coefficient::sinusoid(0.3, 1.2, 0.2, 0.1),
                                Coefficient::sinusoid(0.2, 0.9, 0.8, 0.0),
                                Coefficient::sinusoid(0.1, 1.1, 0.5, 0.35)};
    IntegrateOptions io;
    io.rtol = 1e-12;
    io.atol = 1e-14;
    const Trajectory traj = integrate(p2_system({0.0, 1.0}, coeffs), {0.1, 0.5}, 0.0, 1.0, io);
    CHECK(complex_riccati_reduction_residual(1.0, coeffs, traj) < 1e-5);
    CHECK(complex_riccati_reduction_residual(-1.0, coeffs, traj) > 1e-2);

    // Non-smooth coefficient presets are rejected up front.
    const CoefficientSet rough{coeffs.b1,
                               Coefficient::piecewise_linear({0.0, 1.0}, {0.1, 0.1}),
                               coeffs.b3};
    CHECK_THROWS_AS(complex_riccati_reduction_residual(1.0, rough, traj), DomainError);
}

TEST_CASE("coordinate changes reject points outside their domains", "[applications]")
{
    const ApplicationBundle bun = sc_riccati_bundle(0.8);
    // v = 0 collapses the two class copies onto the diagonal.
    CHECK_FALSE(bun.change.source_ok(0.4, 0.0));
    CHECK_THROWS_AS(pushforward_residual(bun.change, bun.fields, bun.class_fields, 0.4, 0.0),
                    DomainError);

    const ModelParams mp = ModelParams::ermakov(ModelClass::NegC, 1.1);
    const ApplicationBundle ern = ermakov_neg_bundle(-0.7, mp);
    CHECK_FALSE(ern.change.source_ok(0.0, 0.3)); // u = 0 is outside every oscillator chart
}

TEST_CASE("model parameter validation rejects a vanishing scale", "[applications]")
{
    CHECK_THROWS_AS(ModelParams::kummer_schwarz(ModelClass::NegC, 0.0), DomainError);
    CHECK_THROWS_AS(ModelParams::ermakov(ModelClass::PosC, 0.0), DomainError);
}
