// Tests for the two-label coefficient-flow family: both field variants,
// Hamiltonians and pair invariants against frozen references, the flat and
// the degenerate-label reconstruction rules (plus the generic-curvature
// numeric companion), domain guards, and the truncated system.
#include <catch2/catch_amalgamated.hpp>

#include "cklh/cklh.hpp"
#include "oracle_values.hpp"

#include <cmath>

using namespace cklh;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const KappaSignature kRef{oracle::p2_kappa[0], oracle::p2_kappa[1]};
const P2State kS1{oracle::p2_s1[0], oracle::p2_s1[1]};
const P2State kS2{oracle::p2_s2[0], oracle::p2_s2[1]};

} // namespace

TEST_CASE("flat time-like fields are the quadratic triple", "[class_p2]")
{
    const KappaSignature flat{0.0, 1.0};
    const auto X = p2_fields(flat, {0.8, -0.5});
    CHECK(X[0].vx == 1.0);
    CHECK(X[0].vy == 0.0);
    CHECK_THAT(X[1].vx, WithinRel(0.8, 1e-15));
    CHECK_THAT(X[1].vy, WithinRel(-0.5, 1e-15));
    CHECK_THAT(X[2].vx, WithinRel(0.8 * 0.8 - 0.5 * 0.5, 1e-14));
    CHECK_THAT(X[2].vy, WithinRel(2.0 * 0.8 * (-0.5), 1e-14));
}

TEST_CASE("space-like fields close with the swapped structure constants", "[class_p2]")
{
    const KappaSignature k{0.6, -0.8};
    const auto field = [k](int i) {
        return PlanarField([k, i](double x, double y) {
            return p2_fields(k, {x, y}, P2Variant::SpaceLike)[static_cast<std::size_t>(i)];
        });
    };
    const auto X0 = p2_fields(k, {0.4, 0.3}, P2Variant::SpaceLike);
    CHECK(X0[0].vx == 0.0);
    CHECK(X0[0].vy == 1.0);

    // [X1, X3] = 2 kappa2 X2 at a probe point, via finite differences.
    const double x = 0.4, y = 0.3;
    const TangentVector br = lie_bracket_numeric(field(0), field(2), x, y);
    const TangentVector want = 2.0 * k.kappa2 * p2_fields(k, {x, y}, P2Variant::SpaceLike)[1];
    CHECK_THAT(br.vx, WithinAbs(want.vx, 1e-7));
    CHECK_THAT(br.vy, WithinAbs(want.vy, 1e-7));
}

TEST_CASE("rhs on the sphere signature matches the frozen reference", "[class_p2]")
{
    const KappaSignature sphere{1.0, 1.0};
    const CoefficientSet b{Coefficient::constant(0.4), Coefficient::constant(-0.3),
                           Coefficient::constant(0.8)};
    const TangentVector v = p2_rhs(sphere, b, 0.0, {0.6, 0.35});
    CHECK_THAT(v.vx, WithinRel(oracle::p2_rhs_sphere[0], 1e-13));
    CHECK_THAT(v.vy, WithinRel(oracle::p2_rhs_sphere[1], 1e-13));
}

TEST_CASE("pair invariant matches the frozen reference and its limits", "[class_p2]")
{
    CHECK_THAT(p2_F2(kRef, kS1, kS2), WithinRel(oracle::p2_F2_val, 1e-13));

    // Copy-swap symmetry and coincident-copy limit 4 kappa2.
    CHECK_THAT(p2_F2(kRef, kS2, kS1), WithinRel(oracle::p2_F2_val, 1e-13));
    CHECK_THAT(p2_F2(kRef, kS1, kS1), WithinAbs(4.0 * kRef.kappa2, 1e-12));

    // Triple invariant as the cyclic sum with offset.
    const P2State s3{-0.1, 0.55};
    const double want = p2_F2(kRef, kS1, kS2) + p2_F2_13(kRef, kS2, s3)
                      + p2_F2_23(kRef, kS1, s3) - 3.0 * kRef.kappa2;
    CHECK_THAT(p2_F3(kRef, kS1, kS2, s3), WithinRel(want, 1e-13));
    CHECK(p2_F1(kRef) == kRef.kappa2);
}

TEST_CASE("Hamiltonian triples match the frozen references", "[class_p2]")
{
    const auto h = p2_hamiltonians(kRef, kS1);
    CHECK_THAT(h[0], WithinRel(oracle::p2_h_kp[0], 1e-13));
    CHECK_THAT(h[1], WithinRel(oracle::p2_h_kp[1], 1e-13));
    CHECK_THAT(h[2], WithinRel(oracle::p2_h_kp[2], 1e-13));

    const auto h2 = p2_hamiltonians({1.0, -1.0}, {0.8, 0.6});
    CHECK_THAT(h2[0], WithinRel(oracle::p2_h_k1m1[0], 1e-13));
    CHECK_THAT(h2[1], WithinRel(oracle::p2_h_k1m1[1], 1e-13));
    CHECK_THAT(h2[2], WithinRel(oracle::p2_h_k1m1[2], 1e-13));

    // Field form agrees with the value form.
    const auto hf = p2_hamiltonians(kRef);
    CHECK_THAT(hf[0].value(kS1.x, kS1.y), WithinRel(h[0], 1e-15));
    CHECK_THAT(hf[1].value(kS1.x, kS1.y), WithinRel(h[1], 1e-15));
    CHECK_THAT(hf[2].value(kS1.x, kS1.y), WithinRel(h[2], 1e-15));
}

TEST_CASE("triple closes on the signature-label Casimir", "[class_p2]")
{
    CHECK_THAT(casimir(kRef.kappa1, oracle::p2_h_kp[0], oracle::p2_h_kp[1], oracle::p2_h_kp[2]),
               WithinAbs(kRef.kappa2, 1e-12));
    for (const KappaSignature k :
         {KappaSignature{1.0, 1.0}, KappaSignature{0.0, -1.0}, KappaSignature{-1.0, 0.0}}) {
        const auto h = p2_hamiltonians(k, {0.45, 0.6});
        CHECK_THAT(casimir(k.kappa1, h[0], h[1], h[2]), WithinAbs(k.kappa2, 1e-12));
    }
}

TEST_CASE("pairing holds between fields, weight, and Hamiltonians", "[class_p2]")
{
    for (const KappaSignature k :
         {kRef, KappaSignature{1.0, 1.0}, KappaSignature{0.0, -1.0}}) {
        const SymplecticWeight w = p2_symplectic(k);
        const auto h = p2_hamiltonians(k);
        for (int i = 0; i < 3; ++i) {
            const PlanarField X = [k, i](double x, double y) {
                return p2_fields(k, {x, y})[static_cast<std::size_t>(i)];
            };
            INFO("k1=" << k.kappa1 << " k2=" << k.kappa2 << " generator " << i);
            CHECK(pairing_residual(w, h[static_cast<std::size_t>(i)], X, 0.35, 0.6) < 1e-8);
        }
    }
}

TEST_CASE("flat reconstruction reproduces the worked example", "[class_p2]")
{
    // kappa2 = +1 with simple integer particular solutions.
    const P2State got = p2_superpose_flat(1.0, {1.0, 1.0}, {2.0, 2.0}, 13.0 / 3.0, 14.5 / 3.0,
                                          {Branch::Plus, Branch::Minus});
    CHECK_THAT(got.x, WithinAbs(0.5, 1e-11));
    CHECK_THAT(got.y, WithinAbs(1.5, 1e-11));

    // The constants are the pair invariants of the reconstruction.
    const KappaSignature flat{0.0, 1.0};
    CHECK_THAT(p2_F2(flat, got, {1.0, 1.0}), WithinAbs(13.0 / 3.0, 1e-10));
    CHECK_THAT(p2_F2(flat, got, {2.0, 2.0}), WithinAbs(14.5 / 3.0, 1e-10));
}

TEST_CASE("flat reconstruction matches the frozen opposite-signature case", "[class_p2]")
{
    REQUIRE(oracle::p2flat_mink_sy == 1);
    REQUIRE(oracle::p2flat_mink_sx == -1);
    const P2State s2{oracle::p2flat_mink_s2[0], oracle::p2flat_mink_s2[1]};
    const P2State s3{oracle::p2flat_mink_s3[0], oracle::p2flat_mink_s3[1]};
    const P2State got = p2_superpose_flat(-1.0, s2, s3, oracle::p2flat_mink_mu[0],
                                          oracle::p2flat_mink_mu[1],
                                          {Branch::Plus, Branch::Minus});
    CHECK_THAT(got.x, WithinAbs(oracle::p2flat_mink_expected[0], 1e-10));
    CHECK_THAT(got.y, WithinAbs(oracle::p2flat_mink_expected[1], 1e-10));
}

TEST_CASE("degenerate-label reconstruction matches the frozen reference", "[class_p2]")
{
    REQUIRE(oracle::p2nr_branch == 1);
    const P2State s2{oracle::p2nr_s2T[0], oracle::p2nr_s2T[1]};
    const P2State s3{oracle::p2nr_s3T[0], oracle::p2nr_s3T[1]};
    const P2State got = p2_superpose_nonrel(1.0, s2, s3, oracle::p2nr_mu[0], oracle::p2nr_mu[1],
                                            Branch::Plus);
    CHECK_THAT(got.x, WithinRel(oracle::p2nr_expected[0], 1e-10));
    CHECK_THAT(got.y, WithinRel(oracle::p2nr_expected[1], 1e-10));

    // Constants recovered as pair invariants at kappa2 = 0.
    const KappaSignature k{1.0, 0.0};
    CHECK_THAT(p2_F2(k, got, s2), WithinAbs(oracle::p2nr_mu[0], 1e-9));
    CHECK_THAT(p2_F2(k, got, s3), WithinAbs(oracle::p2nr_mu[1], 1e-9));
}

TEST_CASE("generic-curvature numeric companion recovers a known solution", "[class_p2]")
{
    const P2State s3{0.2, 0.6};
    const double mu1 = p2_F2(kRef, kS1, kS2);
    const double mu2 = p2_F2(kRef, kS1, s3);
    const P2State got = p2_superpose_numeric(kRef, kS2, s3, mu1, mu2, {0.25, 0.85});
    CHECK_THAT(got.x, WithinAbs(kS1.x, 1e-9));
    CHECK_THAT(got.y, WithinAbs(kS1.y, 1e-9));
    // A hopeless initial guess fails to converge instead of lying.
    CHECK_THROWS_AS(p2_superpose_numeric(kRef, kS2, s3, mu1, mu2, {40.0, 90.0}),
                    NoRealSolutionError);
}

TEST_CASE("domain guards reject the axis, chart poles, and bad radicands", "[class_p2]")
{
    CHECK_THROWS_AS(p2_symplectic(kRef).at(0.3, 0.0), DomainError);
    CHECK_THROWS_AS(p2_hamiltonians(kRef, {0.3, 0.0}), DomainError);
    CHECK_THROWS_AS(p2_F2(kRef, {0.3, 0.0}, kS2), DomainError);
    CHECK_THROWS_AS(p2_fields({1.0, 1.0}, {0.2, M_PI / 2.0}), DomainError);
    CHECK_THROWS_AS(
        p2_superpose_flat(1.0, {0.4, 0.7}, {0.4, 0.7}, 1.0, 1.0, {Branch::Plus, Branch::Plus}),
        DegenerateConfigurationError);
    CHECK_THROWS_AS(p2_superpose_nonrel(1.0, {0.4, -0.5}, {0.8, 0.6}, 2.0, 2.0, Branch::Plus),
                    NoRealSolutionError);
}

TEST_CASE("truncated system approaches the exact one near zero curvature", "[class_p2]")
{
    const CoefficientSet b{Coefficient::constant(0.3), Coefficient::constant(-0.8),
                           Coefficient::constant(0.5)};
    const P2State s{0.45, 0.6};

    const double eps = 1e-3;
    const KappaSignature small{eps, eps};
    const TangentVector exact = p2_rhs(small, b, 0.0, s);
    const TangentVector approx = p2_perturbed_rhs(small, b, 0.0, s);
    CHECK_THAT(approx.vx, WithinAbs(exact.vx, 1e-4));
    CHECK_THAT(approx.vy, WithinAbs(exact.vy, 1e-4));

    const KappaSignature flat{0.0, 0.0};
    const TangentVector e0 = p2_rhs(flat, b, 0.0, s);
    const TangentVector a0 = p2_perturbed_rhs(flat, b, 0.0, s);
    CHECK_THAT(a0.vx, WithinAbs(e0.vx, 1e-13));
    CHECK_THAT(a0.vy, WithinAbs(e0.vy, 1e-13));
}
