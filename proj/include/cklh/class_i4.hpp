// cklh/class_i4.hpp — the first curved Lie–Hamilton class, living on the
// product of two 1D CK spaces (coordinates x, y with x != y):
//
//   fields      X1 = (1, 1),  X2 = (sk(x), sk(y)),  X3 = (2 vk(x), 2 vk(y))
//   brackets    [X1,X2] = X1 - (kappa/2) X3,  [X1,X3] = 2 X2,  [X2,X3] = X3
//   weight      W = 1 / (4 sk(D)^2),              D = (x - y)/2
//   functions   h1 = 1/(2 tk(D)),  h2 = sk(S)/(2 sk(D)),  S = (x + y)/2
//               h3 = 2 sk(x/2) sk(y/2) / sk(D)
//   Casimir     v1 v3 - v2^2 - (kappa/4) v3^2  ->  -1/4 on (h1, h2, h3)
//
// plus the pairwise invariant F2 on products of copies, the closed-form
// three-point superposition rule (in half-argument tangent variables), its
// 1D projection, and the second-order small-curvature truncation.
#pragma once

#include <array>
#include <cmath>

#include "cklh/dynamics.hpp"
#include "cklh/ktrig.hpp"
#include "cklh/symplectic.hpp"
#include "cklh/types.hpp"

namespace cklh {

/// Near-coincidence guard for superposition inputs: two particular
/// solutions closer than this in both coordinates are degenerate.
inline constexpr double kCoincidenceTolerance = 1e-9;

/// Point on the product of two 1D spaces.
struct I4State {
    double x = 0.0;
    double y = 0.0;
};

namespace detail {

/// sk at the half-difference with the class domain guard x != y.
[[nodiscard]] inline double i4_sd(double kappa, double x, double y)
{
    const double s = sk(kappa, 0.5 * (x - y));
    if (std::fabs(s) < kTanPoleTolerance) {
        throw DomainError("class i4: evaluation on the diagonal x = y");
    }
    return s;
}

} // namespace detail

/**
 * @brief The three generating fields at s (see file header).
 */
[[nodiscard]] inline std::array<TangentVector, 3> i4_fields(double kappa, const I4State& s)
{
    return {{{1.0, 1.0},
             {sk(kappa, s.x), sk(kappa, s.y)},
             {2.0 * vk(kappa, s.x), 2.0 * vk(kappa, s.y)}}};
}

/**
 * @brief Right-hand side of the class system
 *        x' = b1 + b2 sk(x) + 2 b3 vk(x)  (same form in y),
 *        the curvature-deformed coupled Riccati pair.
 */
[[nodiscard]] inline TangentVector i4_rhs(double kappa, const CoefficientSet& coeffs, double t,
                                          const I4State& s)
{
    const double b1 = coeffs.b1(t), b2 = coeffs.b2(t), b3 = coeffs.b3(t);
    return {b1 + b2 * sk(kappa, s.x) + 2.0 * b3 * vk(kappa, s.x),
            b1 + b2 * sk(kappa, s.y) + 2.0 * b3 * vk(kappa, s.y)};
}

/// Wrap the class system as an integrable 2D RHS.
[[nodiscard]] inline SystemRHS i4_system(double kappa, CoefficientSet coeffs)
{
    return [kappa, coeffs](double t, const StateVector& s, StateVector& ds) {
        const TangentVector v = i4_rhs(kappa, coeffs, t, {s[0], s[1]});
        ds[0] = v.vx;
        ds[1] = v.vy;
    };
}

/**
 * @brief Symplectic weight W = 1 / (4 sk((x-y)/2)^2).
 *
 * The returned evaluator throws DomainError on the diagonal x = y.
 */
[[nodiscard]] inline SymplecticWeight i4_symplectic(double kappa)
{
    return {[kappa](double x, double y) {
        const double s = detail::i4_sd(kappa, x, y);
        return 1.0 / (4.0 * s * s);
    }};
}

/**
 * @brief Hamiltonian triple (h1, h2, h3) with exact gradients:
 *
 *   d h1 = ( -1, +1 ) / (4 sk(D)^2)
 *   d h2 = ( -sk(y), +sk(x) ) / (4 sk(D)^2)
 *   d h3 = ( -vk(y), +vk(x) ) / (2 sk(D)^2)
 *
 * which reproduce X1, X2, X3 through X = (d_y h / W, -d_x h / W).
 */
[[nodiscard]] inline std::array<ScalarField, 3> i4_hamiltonians(double kappa)
{
    ScalarField h1{[kappa](double x, double y) {
                       const double d = 0.5 * (x - y);
                       (void)detail::i4_sd(kappa, x, y);
                       return 1.0 / (2.0 * tk(kappa, d));
                   },
                   [kappa](double x, double y) -> Gradient2 {
                       const double s = detail::i4_sd(kappa, x, y);
                       const double q = 4.0 * s * s;
                       return {-1.0 / q, 1.0 / q};
                   }};
    ScalarField h2{[kappa](double x, double y) {
                       const double s = detail::i4_sd(kappa, x, y);
                       return sk(kappa, 0.5 * (x + y)) / (2.0 * s);
                   },
                   [kappa](double x, double y) -> Gradient2 {
                       const double s = detail::i4_sd(kappa, x, y);
                       const double q = 4.0 * s * s;
                       return {-sk(kappa, y) / q, sk(kappa, x) / q};
                   }};
    ScalarField h3{[kappa](double x, double y) {
                       const double s = detail::i4_sd(kappa, x, y);
                       return 2.0 * sk(kappa, 0.5 * x) * sk(kappa, 0.5 * y) / s;
                   },
                   [kappa](double x, double y) -> Gradient2 {
                       const double s = detail::i4_sd(kappa, x, y);
                       const double q = 2.0 * s * s;
                       return {-vk(kappa, y) / q, vk(kappa, x) / q};
                   }};
    return {std::move(h1), std::move(h2), std::move(h3)};
}

/// Hamiltonian values (h1, h2, h3) at a state.
[[nodiscard]] inline std::array<double, 3> i4_hamiltonians(double kappa, const I4State& s)
{
    const auto h = i4_hamiltonians(kappa);
    return {h[0].value(s.x, s.y), h[1].value(s.x, s.y), h[2].value(s.x, s.y)};
}

/**
 * @brief Quadratic Casimir polynomial v1 v3 - v2^2 - (kappa/4) v3^2.
 *        Substituting the class Hamiltonians yields -1/4 identically.
 */
[[nodiscard]] inline double casimir(double kappa, double v1, double v2, double v3)
{
    return v1 * v3 - v2 * v2 - 0.25 * kappa * v3 * v3;
}

/**
 * @brief Pairwise invariant on two copies (s1, s2):
 *
 *   F2 = - sk((x2-y1)/2) sk((x1-y2)/2) / ( sk((x1-y1)/2) sk((x2-y2)/2) ).
 *
 * Symmetric under copy swap; equals -1 on coincident copies.
 * @throws DomainError when either copy sits on its diagonal.
 */
[[nodiscard]] inline double i4_F2(double kappa, const I4State& s1, const I4State& s2)
{
    const double d1 = detail::i4_sd(kappa, s1.x, s1.y);
    const double d2 = detail::i4_sd(kappa, s2.x, s2.y);
    return -sk(kappa, 0.5 * (s2.x - s1.y)) * sk(kappa, 0.5 * (s1.x - s2.y)) / (d1 * d2);
}

/// Copy-permuted variants on a triple: F2_13 swaps copies 1 and 3 in F2
/// (pair {2,3}); F2_23 swaps copies 2 and 3 (pair {1,3}).
[[nodiscard]] inline double i4_F2_13(double kappa, const I4State& s2, const I4State& s3)
{
    return i4_F2(kappa, s3, s2);
}

[[nodiscard]] inline double i4_F2_23(double kappa, const I4State& s1, const I4State& s3)
{
    return i4_F2(kappa, s1, s3);
}

/// Triple invariant F3 = F2 + F2_13 + F2_23 + 3/4.
[[nodiscard]] inline double i4_F3(double kappa, const I4State& s1, const I4State& s2,
                                  const I4State& s3)
{
    return i4_F2(kappa, s1, s2) + i4_F2_13(kappa, s2, s3) + i4_F2_23(kappa, s1, s3) + 0.75;
}

enum class Branch { Plus, Minus };

/// Ingredients of a three-point reconstruction: the two supplied constants,
/// the internally recomputed third one, and the discriminant.
struct SuperpositionData {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double mu3 = 0.0; ///< always recomputed from (s2, s3)
    double Xi = 0.0;  ///< discriminant; >= 0 required for a real solution
};

namespace detail {

/// Half-argument tangent of one copy coordinate.
[[nodiscard]] inline double half_tan(double kappa, double u)
{
    return tk(kappa, 0.5 * u);
}

} // namespace detail

/**
 * @brief Discriminant bundle of the superposition rule at particular
 *        solutions (s2, s3) and constants (mu1, mu2).
 *
 * In t-variables t_u = tk(u/2):
 *   Xi = (t_x2 - t_x3)^2 (t_y2 - t_y3)^2
 *      + (mu1^2 + mu2^2 - 2 mu1 mu2 mu3) (t_x2 - t_y2)^2 (t_x3 - t_y3)^2
 *      - 2 (mu1 + mu2 - mu1 mu2) (t_x2 - t_y2)(t_x3 - t_y3)(t_x2 - t_x3)(t_y2 - t_y3)
 * with mu3 = -F2(s3, s2) recomputed internally (it is functionally
 * dependent on the two particular solutions).
 */
[[nodiscard]] inline SuperpositionData i4_superposition_data(double kappa, const I4State& s2,
                                                             const I4State& s3, double mu1,
                                                             double mu2)
{
    if (std::fabs(s2.x - s3.x) < kCoincidenceTolerance
        && std::fabs(s2.y - s3.y) < kCoincidenceTolerance) {
        throw DegenerateConfigurationError("superposition: near-coincident particular solutions");
    }
    SuperpositionData d;
    d.mu1 = mu1;
    d.mu2 = mu2;
    d.mu3 = -i4_F2_13(kappa, s2, s3);

    const double tx2 = detail::half_tan(kappa, s2.x), ty2 = detail::half_tan(kappa, s2.y);
    const double tx3 = detail::half_tan(kappa, s3.x), ty3 = detail::half_tan(kappa, s3.y);

    const double dx23 = tx2 - tx3, dy23 = ty2 - ty3;
    const double d2 = tx2 - ty2, d3 = tx3 - ty3;

    d.Xi = dx23 * dx23 * dy23 * dy23
         + (mu1 * mu1 + mu2 * mu2 - 2.0 * mu1 * mu2 * d.mu3) * d2 * d2 * d3 * d3
         - 2.0 * (mu1 + mu2 - mu1 * mu2) * d2 * d3 * dx23 * dy23;
    return d;
}

/**
 * @brief Three-point superposition: reconstruct the general solution
 *        (x1, y1) from two particular solutions and constants (mu1, mu2).
 *
 * In t-variables (see i4_superposition_data):
 *
 *   tk(y1/2) = [ (t_x2 + t_x3)(t_y2 - t_y3) + mu1 (t_x2 - t_y2)(t_x3 + t_y3)
 *                - mu2 (t_x3 - t_y3)(t_x2 + t_y2) ± sqrt(Xi) ]
 *              / ( 2 [ mu1 (t_x2 - t_y2) - mu2 (t_x3 - t_y3) + (t_y2 - t_y3) ] )
 *
 *   tk(x1/2) = [ mu1 (t_x2 - t_y2) tk(y1/2) - (t_x2 - tk(y1/2)) t_y2 ]
 *              / [ mu1 (t_x2 - t_y2) - (t_x2 - tk(y1/2)) ]
 *
 * @throws NoRealSolutionError when Xi < 0;
 *         DegenerateConfigurationError on vanishing denominators.
 */
[[nodiscard]] inline I4State i4_superpose(double kappa, const I4State& s2, const I4State& s3,
                                          double mu1, double mu2, Branch branch)
{
    const SuperpositionData d = i4_superposition_data(kappa, s2, s3, mu1, mu2);
    if (d.Xi < 0.0) {
        throw NoRealSolutionError("superposition: negative discriminant");
    }

    const double tx2 = detail::half_tan(kappa, s2.x), ty2 = detail::half_tan(kappa, s2.y);
    const double tx3 = detail::half_tan(kappa, s3.x), ty3 = detail::half_tan(kappa, s3.y);

    const double root = std::sqrt(d.Xi);
    const double signed_root = (branch == Branch::Plus) ? root : -root;

    const double num_y = (tx2 + tx3) * (ty2 - ty3) + mu1 * (tx2 - ty2) * (tx3 + ty3)
                       - mu2 * (tx3 - ty3) * (tx2 + ty2) + signed_root;
    const double den_y = mu1 * (tx2 - ty2) - mu2 * (tx3 - ty3) + (ty2 - ty3);
    if (std::fabs(den_y) < kTanPoleTolerance) {
        throw DegenerateConfigurationError("superposition: vanishing y-denominator");
    }
    const double t_y1 = 0.5 * num_y / den_y;

    const double num_x = mu1 * (tx2 - ty2) * t_y1 - (tx2 - t_y1) * ty2;
    const double den_x = mu1 * (tx2 - ty2) - (tx2 - t_y1);
    if (std::fabs(den_x) < kTanPoleTolerance) {
        throw DegenerateConfigurationError("superposition: vanishing x-denominator");
    }
    const double t_x1 = num_x / den_x;

    return {2.0 * inv_tk(kappa, t_x1), 2.0 * inv_tk(kappa, t_y1)};
}

/**
 * @brief 1D projection: superposition rule of the deformed Riccati equation
 *        x' = b1 + b2 sk(x) + 2 b3 vk(x) from three particular solutions:
 *
 *   tk(x/2) = [ mu1 (T2 - T1) T3 + (T3 - T2) T1 ]
 *             / [ mu1 (T2 - T1) + (T3 - T2) ],     T_i = tk(x_i / 2).
 *
 * mu1 = 0 collapses to x = x1.
 */
[[nodiscard]] inline double riccati_superpose(double kappa, double x1, double x2, double x3,
                                              double mu1)
{
    const double t1 = detail::half_tan(kappa, x1);
    const double t2 = detail::half_tan(kappa, x2);
    const double t3 = detail::half_tan(kappa, x3);
    const double den = mu1 * (t2 - t1) + (t3 - t2);
    if (std::fabs(den) < kTanPoleTolerance) {
        throw DegenerateConfigurationError("riccati superposition: vanishing denominator");
    }
    const double t = (mu1 * (t2 - t1) * t3 + (t3 - t2) * t1) / den;
    return 2.0 * inv_tk(kappa, t);
}

/**
 * @brief Second-order small-curvature truncation of the class system:
 *        x' = b1 + b2 x + b3 x^2 - (kappa/12)(2 b2 x^3 + b3 x^4)
 *        (same form in y).  Deviation from the exact system is O(kappa^2).
 */
[[nodiscard]] inline TangentVector i4_perturbed_rhs(double kappa, const CoefficientSet& coeffs,
                                                    double t, const I4State& s)
{
    const double b1 = coeffs.b1(t), b2 = coeffs.b2(t), b3 = coeffs.b3(t);
    const auto comp = [&](double u) {
        const double u2 = u * u;
        return b1 + b2 * u + b3 * u2 - (kappa / 12.0) * (2.0 * b2 * u2 * u + b3 * u2 * u2);
    };
    return {comp(s.x), comp(s.y)};
}

} // namespace cklh
