// cklh/class_p2.hpp — the second curved Lie–Hamilton class, living on each
// of the nine 2D CK spaces in geodesic parallel (type I) coordinates, with
// domain y != 0.  Writing C1 = ck(k1, .), S12 = sk(k1*k2, .), etc.:
//
//   time-like fields
//     X1 = (1, 0)
//     X2 = ( S1(x)/C12(y),                    C1(x) S12(y) )
//     X3 = ( 2 (V1(x) - k2 V12(y))/C12(y),    2 S1(x) S12(y) )
//   brackets   [X1,X2] = X1 - (k1/2) X3,  [X1,X3] = 2 X2,  [X2,X3] = X3
//
//   space-like fields (primed coordinates)
//     X1 = (0, 1)
//     X2 = ( S1(x') C12(y'),      S12(y')/C1(x') )
//     X3 = ( 2 k2 S1(x') S12(y'), -(2/C1(x')) (V1(x') - k2 V12(y')) )
//   brackets   [X1,X2] = X1 - (k1/2) X3,  [X1,X3] = 2 k2 X2,  [X2,X3] = X3
//   (fields and brackets only; no symplectic structure ships for this variant)
//
//   weight      W  = C12(y) / S12(y)^2
//   functions   h1 = -1/S12(y),   h2 = -S1(x)/T12(y),
//               h3 = 2 (C1(x) C12(y) - 1) / (k1 S12(y))   [k1-safe form below]
//   Casimir     v1 v3 - v2^2 - (k1/4) v3^2  ->  k2 on (h1, h2, h3)
//
// plus the pairwise invariants F1 = k2 and F2 (k1-safe), their copy
// permutations and F3, the closed-form superposition rules of the k1 = 0
// and k2 = 0 subfamilies, a clearly-labeled numeric reconstruction for the
// generic case, and the first-order small-curvature truncation.
#pragma once

#include <array>
#include <cmath>

#include "cklh/class_i4.hpp" // Branch, casimir, kCoincidenceTolerance
#include "cklh/dynamics.hpp"
#include "cklh/ktrig.hpp"
#include "cklh/symplectic.hpp"
#include "cklh/types.hpp"

namespace cklh {

/// Point on one CK space in geodesic parallel (type I) coordinates.
struct P2State {
    double x = 0.0;
    double y = 0.0;
};

enum class P2Variant { TimeLike, SpaceLike };

namespace detail {

/// sk(k1*k2, y) with the class domain guard y != 0.
[[nodiscard]] inline double p2_sy(const KappaSignature& k, double y)
{
    const double s = sk(k.k12(), y);
    if (std::fabs(s) < kTanPoleTolerance) {
        throw DomainError("class p2: evaluation on the axis y = 0");
    }
    return s;
}

/// k1-safe product expansion (1 - C1(dx) C12(y1) C12(y2)) / k1 as a
/// polynomial in the versed functions Va = vk(k1,dx), V2i = vk(k1 k2, yi):
///   Va + k2 (V21+V22) - k1 k2 Va (V21+V22) - k1 k2^2 V21 V22
///      + k1^2 k2^2 Va V21 V22.
[[nodiscard]] inline double p2_one_minus_ccc_over_k1(const KappaSignature& k, double dx, double y1,
                                                     double y2)
{
    const double va = vk(k.kappa1, dx);
    const double v21 = vk(k.k12(), y1);
    const double v22 = vk(k.k12(), y2);
    const double k1 = k.kappa1, k2 = k.kappa2;
    return va + k2 * (v21 + v22) - k1 * k2 * va * (v21 + v22) - k1 * k2 * k2 * v21 * v22
         + k1 * k1 * k2 * k2 * va * v21 * v22;
}

/// k1-safe expansion (C1(x) C12(y) - 1) / k1 = k1 k2 V1 V12 - V1 - k2 V12.
[[nodiscard]] inline double p2_cc_minus_one_over_k1(const KappaSignature& k, double x, double y)
{
    const double v1 = vk(k.kappa1, x);
    const double v12 = vk(k.k12(), y);
    return k.kappa1 * k.kappa2 * v1 * v12 - v1 - k.kappa2 * v12;
}

} // namespace detail

/**
 * @brief The three generating fields at s in the chosen variant (see file
 *        header).  SpaceLike inputs are interpreted as primed coordinates.
 * @throws DomainError when a required cosine factor vanishes
 *         (C12(y) for TimeLike, C1(x') for SpaceLike).
 */
[[nodiscard]] inline std::array<TangentVector, 3> p2_fields(const KappaSignature& k,
                                                            const P2State& s,
                                                            P2Variant variant = P2Variant::TimeLike)
{
    const double k12 = k.k12();
    if (variant == P2Variant::TimeLike) {
        const double c12 = ck(k12, s.y);
        if (std::fabs(c12) < kTanPoleTolerance) {
            throw DomainError("class p2: C12(y) vanishes (chart pole)");
        }
        const double s1 = sk(k.kappa1, s.x), c1 = ck(k.kappa1, s.x), s12 = sk(k12, s.y);
        const double q = vk(k.kappa1, s.x) - k.kappa2 * vk(k12, s.y);
        return {{{1.0, 0.0}, {s1 / c12, c1 * s12}, {2.0 * q / c12, 2.0 * s1 * s12}}};
    }
    const double c1 = ck(k.kappa1, s.x);
    if (std::fabs(c1) < kTanPoleTolerance) {
        throw DomainError("class p2: C1(x') vanishes (chart pole)");
    }
    const double s1 = sk(k.kappa1, s.x), s12 = sk(k12, s.y), c12 = ck(k12, s.y);
    const double q = vk(k.kappa1, s.x) - k.kappa2 * vk(k12, s.y);
    return {{{0.0, 1.0},
             {s1 * c12, s12 / c1},
             {2.0 * k.kappa2 * s1 * s12, -2.0 * q / c1}}};
}

/**
 * @brief Right-hand side of whichever time-like class system:
 *        x' = b1 + b2 S1(x)/C12(y) + 2 b3 (V1(x) - k2 V12(y))/C12(y)
 *        y' = b2 C1(x) S12(y) + 2 b3 S1(x) S12(y);
 *        at k1 = 0 this is (b1 + b2 x + b3 (x^2 - k2 y^2), b2 y + 2 b3 x y).
 */
[[nodiscard]] inline TangentVector p2_rhs(const KappaSignature& k, const CoefficientSet& coeffs,
                                          double t, const P2State& s)
{
    const auto X = p2_fields(k, s, P2Variant::TimeLike);
    const double b1 = coeffs.b1(t), b2 = coeffs.b2(t), b3 = coeffs.b3(t);
    return b1 * X[0] + b2 * X[1] + b3 * X[2];
}

/// Wrap the time-like class system as an integrable 2D RHS.
[[nodiscard]] inline SystemRHS p2_system(KappaSignature k, CoefficientSet coeffs)
{
    return [k, coeffs](double t, const StateVector& s, StateVector& ds) {
        const TangentVector v = p2_rhs(k, coeffs, t, {s[0], s[1]});
        ds[0] = v.vx;
        ds[1] = v.vy;
    };
}

/**
 * @brief Symplectic weight W = C12(y) / S12(y)^2.
 *
 * The returned evaluator throws DomainError on the axis y = 0.
 */
[[nodiscard]] inline SymplecticWeight p2_symplectic(const KappaSignature& k)
{
    const double k12 = k.k12();
    return {[k, k12](double /*x*/, double y) {
        const double s = detail::p2_sy(k, y);
        return ck(k12, y) / (s * s);
    }};
}

/**
 * @brief Hamiltonian triple (h1, h2, h3) with exact gradients:
 *
 *   d h1 = ( 0,                C12/S12^2 )
 *   d h2 = ( -C1 C12 / S12,    S1/S12^2 )
 *   d h3 = ( -2 S1 C12 / S12,  2 (V1 - k2 V12)/S12^2 )
 *
 * which reproduce X1, X2, X3 through X = (d_y h / W, -d_x h / W).
 * h3 is evaluated k1-safely (see detail::p2_cc_minus_one_over_k1).
 */
[[nodiscard]] inline std::array<ScalarField, 3> p2_hamiltonians(const KappaSignature& k)
{
    const double k12 = k.k12();
    ScalarField h1{[k](double /*x*/, double y) { return -1.0 / detail::p2_sy(k, y); },
                   [k, k12](double /*x*/, double y) -> Gradient2 {
                       const double s = detail::p2_sy(k, y);
                       return {0.0, ck(k12, y) / (s * s)};
                   }};
    ScalarField h2{[k, k12](double x, double y) {
                       const double s = detail::p2_sy(k, y);
                       return -sk(k.kappa1, x) * ck(k12, y) / s;
                   },
                   [k, k12](double x, double y) -> Gradient2 {
                       const double s = detail::p2_sy(k, y);
                       return {-ck(k.kappa1, x) * ck(k12, y) / s,
                               sk(k.kappa1, x) / (s * s)};
                   }};
    ScalarField h3{[k](double x, double y) {
                       const double s = detail::p2_sy(k, y);
                       return 2.0 * detail::p2_cc_minus_one_over_k1(k, x, y) / s;
                   },
                   [k, k12](double x, double y) -> Gradient2 {
                       const double s = detail::p2_sy(k, y);
                       const double q = vk(k.kappa1, x) - k.kappa2 * vk(k12, y);
                       return {-2.0 * sk(k.kappa1, x) * ck(k12, y) / s, 2.0 * q / (s * s)};
                   }};
    return {std::move(h1), std::move(h2), std::move(h3)};
}

/// Hamiltonian values (h1, h2, h3) at a state.
[[nodiscard]] inline std::array<double, 3> p2_hamiltonians(const KappaSignature& k,
                                                           const P2State& s)
{
    const auto h = p2_hamiltonians(k);
    return {h[0].value(s.x, s.y), h[1].value(s.x, s.y), h[2].value(s.x, s.y)};
}

/// Constant invariant of one copy: F1 = k2.
[[nodiscard]] inline double p2_F1(const KappaSignature& k)
{
    return k.kappa2;
}

/**
 * @brief Pairwise invariant on two copies (s1, s2):
 *
 *   F2 = 2 ( k2 + (1 - C1(x1-x2) C12(y1) C12(y2)) / (k1 S12(y1) S12(y2)) )
 *
 * evaluated k1-safely.  Limits: k1 -> 0 gives
 * ((x1-x2)^2 + k2 (y1+y2)^2)/(y1 y2); k2 -> 0 gives 4 sk(k1,(x1-x2)/2)^2 /
 * (y1 y2); coincident copies give 4 k2 exactly.
 * @throws DomainError when either copy sits on the axis y = 0.
 */
[[nodiscard]] inline double p2_F2(const KappaSignature& k, const P2State& s1, const P2State& s2)
{
    const double sy1 = detail::p2_sy(k, s1.y);
    const double sy2 = detail::p2_sy(k, s2.y);
    const double p = detail::p2_one_minus_ccc_over_k1(k, s1.x - s2.x, s1.y, s2.y);
    return 2.0 * (k.kappa2 + p / (sy1 * sy2));
}

/// Copy-permuted variants on a triple: F2_13 swaps copies 1 and 3 in F2
/// (pair {2,3}); F2_23 swaps copies 2 and 3 (pair {1,3}).
[[nodiscard]] inline double p2_F2_13(const KappaSignature& k, const P2State& s2, const P2State& s3)
{
    return p2_F2(k, s3, s2);
}

[[nodiscard]] inline double p2_F2_23(const KappaSignature& k, const P2State& s1, const P2State& s3)
{
    return p2_F2(k, s1, s3);
}

/// Triple invariant F3 = F2 + F2_13 + F2_23 - 3 k2.
[[nodiscard]] inline double p2_F3(const KappaSignature& k, const P2State& s1, const P2State& s2,
                                  const P2State& s3)
{
    return p2_F2(k, s1, s2) + p2_F2_13(k, s2, s3) + p2_F2_23(k, s1, s3) - 3.0 * k.kappa2;
}

/// Branch pair for the flat-family superposition, where the y- and
/// x-reconstructions carry independent signs.
struct P2FlatBranches {
    Branch y = Branch::Plus;
    Branch x = Branch::Plus;
};

/**
 * @brief Flat-family (k1 = 0) superposition: reconstruct (x1, y1) from two
 *        particular solutions and constants (mu1, mu2), with
 *        mu3 recomputed internally from (s2, s3).
 *
 * With A = -2 k2 (mu1+mu2+mu3) + 8 k2^2 and
 *      B = -mu1 mu2 mu3 + k2 (mu1+mu2+mu3)^2 - 8 k2^2 (mu1+mu2+mu3) + 16 k2^3:
 *
 *   y1 = [ y2 y3 ( (mu1 mu3 + A) y2 + (mu2 mu3 + A) y3 )
 *          ± 2 sqrt( y2^2 y3^2 B ( k2 (y2+y3)^2 - mu3 y2 y3 ) ) ]
 *        / [ mu1 (mu1 - 4 k2) y2^2 + mu2 (mu2 - 4 k2) y3^2
 *            - 2 (mu1 mu2 + A) y2 y3 ]
 *   x1 = x2 ± sqrt( mu1 y1 y2 - k2 (y1+y2)^2 )
 *
 * Note k2 (y2+y3)^2 - mu3 y2 y3 = -(x2-x3)^2, so the y-radicand is
 * nonnegative iff B <= 0.
 *
 * @throws NoRealSolutionError on negative radicands;
 *         DegenerateConfigurationError on vanishing denominators or
 *         near-coincident particular solutions.
 */
[[nodiscard]] inline P2State p2_superpose_flat(double kappa2, const P2State& s2, const P2State& s3,
                                               double mu1, double mu2, P2FlatBranches branches)
{
    if (std::fabs(s2.x - s3.x) < kCoincidenceTolerance
        && std::fabs(s2.y - s3.y) < kCoincidenceTolerance) {
        throw DegenerateConfigurationError("superposition: near-coincident particular solutions");
    }
    const KappaSignature flat{0.0, kappa2};
    const double mu3 = p2_F2_13(flat, s2, s3);

    const double k2 = kappa2;
    const double y2 = s2.y, y3 = s3.y;
    const double sum_mu = mu1 + mu2 + mu3;
    const double A = -2.0 * k2 * sum_mu + 8.0 * k2 * k2;
    const double B = -mu1 * mu2 * mu3 + k2 * sum_mu * sum_mu - 8.0 * k2 * k2 * sum_mu
                   + 16.0 * k2 * k2 * k2;

    const double rad_y = y2 * y2 * y3 * y3 * B * (k2 * (y2 + y3) * (y2 + y3) - mu3 * y2 * y3);
    if (rad_y < 0.0) {
        throw NoRealSolutionError("superposition: negative y-radicand");
    }
    const double den_y = mu1 * (mu1 - 4.0 * k2) * y2 * y2 + mu2 * (mu2 - 4.0 * k2) * y3 * y3
                       - 2.0 * (mu1 * mu2 + A) * y2 * y3;
    if (std::fabs(den_y) < kTanPoleTolerance) {
        throw DegenerateConfigurationError("superposition: vanishing y-denominator");
    }
    const double root_y = (branches.y == Branch::Plus) ? 2.0 * std::sqrt(rad_y)
                                                       : -2.0 * std::sqrt(rad_y);
    const double y1 = (y2 * y3 * ((mu1 * mu3 + A) * y2 + (mu2 * mu3 + A) * y3) + root_y) / den_y;

    const double rad_x = mu1 * y1 * y2 - k2 * (y1 + y2) * (y1 + y2);
    if (rad_x < 0.0) {
        throw NoRealSolutionError("superposition: negative x-radicand");
    }
    const double x1 = (branches.x == Branch::Plus) ? s2.x + std::sqrt(rad_x)
                                                   : s2.x - std::sqrt(rad_x);
    return {x1, y1};
}

/**
 * @brief Non-relativistic-family (k2 = 0) superposition:
 *
 *   tk(k1, x1/2) = [ r2 S3 ± r3 S2 ] / [ r2 C3 ± r3 C2 ],
 *       r2 = sqrt(mu1 y2),  r3 = sqrt(mu2 y3),
 *       Si = sk(k1, xi/2),  Ci = ck(k1, xi/2)
 *   y1 = 4 sk(k1, (x1 - x2)/2)^2 / (mu1 y2)
 *
 * @throws NoRealSolutionError when mu1 y2 <= 0 or mu2 y3 <= 0;
 *         DegenerateConfigurationError on a vanishing denominator.
 */
[[nodiscard]] inline P2State p2_superpose_nonrel(double kappa1, const P2State& s2,
                                                 const P2State& s3, double mu1, double mu2,
                                                 Branch branch)
{
    const double p2v = mu1 * s2.y, p3v = mu2 * s3.y;
    if (p2v <= 0.0 || p3v <= 0.0) {
        throw NoRealSolutionError("superposition: sign-inconsistent radicands");
    }
    const double r2 = std::sqrt(p2v), r3 = std::sqrt(p3v);
    const double sgn = (branch == Branch::Plus) ? 1.0 : -1.0;
    const double num = r2 * sk(kappa1, 0.5 * s3.x) + sgn * r3 * sk(kappa1, 0.5 * s2.x);
    const double den = r2 * ck(kappa1, 0.5 * s3.x) + sgn * r3 * ck(kappa1, 0.5 * s2.x);
    if (std::fabs(den) < kTanPoleTolerance) {
        throw DegenerateConfigurationError("superposition: vanishing tangent denominator");
    }
    const double x1 = 2.0 * inv_tk(kappa1, num / den);
    const double sh = sk(kappa1, 0.5 * (x1 - s2.x));
    return {x1, 4.0 * sh * sh / p2v};
}

/**
 * @brief Numeric reconstruction for the generic case k1 != 0 and k2 != 0,
 *        where no closed-form rule is available: Newton iteration on the
 *        two invariant equations F2(s1, s2) = mu1, F2(s1, s3) = mu2 with a
 *        finite-difference Jacobian, from a caller-supplied initial guess.
 *        This is a best-effort numerical companion, not a closed form.
 *
 * @throws NoRealSolutionError when the iteration fails to converge.
 */
[[nodiscard]] inline P2State p2_superpose_numeric(const KappaSignature& k, const P2State& s2,
                                                  const P2State& s3, double mu1, double mu2,
                                                  const P2State& guess)
{
    const auto residual = [&](const P2State& s) {
        return std::array<double, 2>{p2_F2(k, s, s2) - mu1, p2_F2(k, s, s3) - mu2};
    };
    P2State s = guess;
    constexpr int kMaxIters = 60;
    constexpr double kTol = 1e-12;
    for (int it = 0; it < kMaxIters; ++it) {
        const auto r = residual(s);
        if (std::fabs(r[0]) < kTol && std::fabs(r[1]) < kTol) {
            return s;
        }
        const double hx = 1e-7 * std::max(1.0, std::fabs(s.x));
        const double hy = 1e-7 * std::max(1.0, std::fabs(s.y));
        const auto rxp = residual({s.x + hx, s.y}), rxm = residual({s.x - hx, s.y});
        const auto ryp = residual({s.x, s.y + hy}), rym = residual({s.x, s.y - hy});
        const double j00 = (rxp[0] - rxm[0]) / (2.0 * hx), j01 = (ryp[0] - rym[0]) / (2.0 * hy);
        const double j10 = (rxp[1] - rxm[1]) / (2.0 * hx), j11 = (ryp[1] - rym[1]) / (2.0 * hy);
        const double det = j00 * j11 - j01 * j10;
        if (std::fabs(det) < 1e-300 || !std::isfinite(det)) {
            break;
        }
        s.x -= (j11 * r[0] - j01 * r[1]) / det;
        s.y -= (-j10 * r[0] + j00 * r[1]) / det;
        if (!std::isfinite(s.x) || !std::isfinite(s.y)) {
            break;
        }
    }
    const auto r = residual(s);
    if (std::fabs(r[0]) < 1e-9 && std::fabs(r[1]) < 1e-9) {
        return s;
    }
    throw NoRealSolutionError("numeric superposition: Newton iteration did not converge");
}

/**
 * @brief First-order small-curvature truncation of the class system:
 *        x' = b1 + b2 x + b3 x^2 - (k1/12)(2 b2 x^3 + b3 x^4) - k2 b3 y^2
 *        y' = b2 y + 2 b3 x y - (k1/6)(3 b2 x^2 y + 2 b3 x^3 y).
 *        At k = (0,0) this is the parabolic-family system exactly.
 */
[[nodiscard]] inline TangentVector p2_perturbed_rhs(const KappaSignature& k,
                                                    const CoefficientSet& coeffs, double t,
                                                    const P2State& s)
{
    const double b1 = coeffs.b1(t), b2 = coeffs.b2(t), b3 = coeffs.b3(t);
    const double x = s.x, y = s.y;
    const double x2 = x * x, x3 = x2 * x;
    return {b1 + b2 * x + b3 * x2 - (k.kappa1 / 12.0) * (2.0 * b2 * x3 + b3 * x2 * x2)
                - k.kappa2 * b3 * y * y,
            b2 * y + 2.0 * b3 * x * y - (k.kappa1 / 6.0) * (3.0 * b2 * x2 * y + 2.0 * b3 * x3 * y)};
}

} // namespace cklh
