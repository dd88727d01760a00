// cklh/conformal.hpp — the conformal algebra of the 2D and 1D CK spaces:
// six generators (two translations, one rotation/boost, two specific
// conformal transformations, one dilation) in geodesic parallel coordinates
// of type I, their conformal factors, and numeric Lie-bracket / conformal
// Killing machinery.
#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "cklh/geometry.hpp"
#include "cklh/ktrig.hpp"
#include "cklh/types.hpp"

namespace cklh {

/// Basis order used for bracket expansions: {P1, P2, J12, G1, G2, D}.
enum class ConformalGenerator { P1 = 0, P2 = 1, J12 = 2, G1 = 3, G2 = 4, D = 5 };

/// 1D restriction: basis order {P1, G1, D}.
enum class ConformalGenerator1D { P1 = 0, G1 = 1, D = 2 };

/// Planar vector field as a plain evaluator on chart coordinates.
using PlanarField = std::function<TangentVector(double, double)>;

/// Scalar field on chart coordinates.
using PlanarScalar = std::function<double(double, double)>;

/**
 * @brief Conformal generator field at (x, y) in the ParallelI chart.
 *
 * With ck1 = ck(kappa1, .), tk12 = tk(kappa1*kappa2, .) etc. and the
 * versed-sine combination Q = vk1(x) - kappa2 vk12(y):
 *
 *   P1  = (-1, 0)
 *   P2  = (-k1 k2 sk1(x) tk12(y),  -ck1(x))
 *   J12 = ( k2 ck1(x) tk12(y),     -sk1(x))
 *   G1  = ( Q / ck12(y),            sk1(x) sk12(y))
 *   G2  = ( k2 sk1(x) tk12(y),     -Q)
 *   D   = (-sk1(x) / ck12(y),      -ck1(x) sk12(y))
 *
 * All six are globally defined away from the poles of ck12(y).
 */
[[nodiscard]] inline TangentVector conf_field(const KappaSignature& k, ConformalGenerator gen,
                                              double x, double y)
{
    const double k1 = k.kappa1;
    const double k2 = k.kappa2;
    const double k12 = k.k12();

    switch (gen) {
    case ConformalGenerator::P1:
        return {-1.0, 0.0};
    case ConformalGenerator::P2:
        return {-k1 * k2 * sk(k1, x) * tk(k12, y), -ck(k1, x)};
    case ConformalGenerator::J12:
        return {k2 * ck(k1, x) * tk(k12, y), -sk(k1, x)};
    case ConformalGenerator::G1: {
        const double q = vk(k1, x) - k2 * vk(k12, y);
        return {q / ck(k12, y), sk(k1, x) * sk(k12, y)};
    }
    case ConformalGenerator::G2: {
        const double q = vk(k1, x) - k2 * vk(k12, y);
        return {k2 * sk(k1, x) * tk(k12, y), -q};
    }
    case ConformalGenerator::D:
    default:
        return {-sk(k1, x) / ck(k12, y), -ck(k1, x) * sk(k12, y)};
    }
}

/// GeoPoint convenience overload; the fields are stated in ParallelI.
[[nodiscard]] inline TangentVector conf_field(const KappaSignature& k, ConformalGenerator gen,
                                              const GeoPoint& p)
{
    if (p.chart != Chart::ParallelI) {
        throw DomainError("conf_field: generator components are defined in the ParallelI chart");
    }
    return conf_field(k, gen, p.a, p.b);
}

/**
 * @brief 1D conformal generator on the circle/line/hyperbola:
 *
 *   P1 = -d/dx,   G1 = vk(x) d/dx,   D = -sk(x) d/dx.
 */
[[nodiscard]] inline double conf_field_1d(double kappa, ConformalGenerator1D gen, double x)
{
    switch (gen) {
    case ConformalGenerator1D::P1:
        return -1.0;
    case ConformalGenerator1D::G1:
        return vk(kappa, x);
    case ConformalGenerator1D::D:
    default:
        return -sk(kappa, x);
    }
}

/**
 * @brief Conformal factor mu_X of the generator at (x, y), ParallelI chart:
 *
 *   mu = 0 for P1, P2, J12 (isometries);
 *   mu_D  = -2 x0,  mu_G1 = 2 x1,  mu_G2 = 2 kappa2 x2,
 *
 * with (x0, x1, x2) the ambient image of the point.
 */
[[nodiscard]] inline double conf_factor(const KappaSignature& k, ConformalGenerator gen, double x,
                                        double y)
{
    switch (gen) {
    case ConformalGenerator::P1:
    case ConformalGenerator::P2:
    case ConformalGenerator::J12:
        return 0.0;
    default:
        break;
    }
    const AmbientPoint q = to_ambient(k, {Chart::ParallelI, x, y});
    switch (gen) {
    case ConformalGenerator::D:
        return -2.0 * q.x0;
    case ConformalGenerator::G1:
        return 2.0 * q.x1;
    case ConformalGenerator::G2:
    default:
        return 2.0 * k.kappa2 * q.x2;
    }
}

/**
 * @brief Structure constants of the 2D conformal algebra: returns the
 *        expansion coefficients of [a, b] over {P1, P2, J12, G1, G2, D}.
 *
 * The nonzero brackets are
 *   [J12,P1] = P2          [J12,P2] = -k2 P1     [P1,P2] = k1 J12
 *   [J12,G1] = G2          [J12,G2] = -k2 G1     [G1,G2] = 0
 *   [D,P1]   = P1 + k1 G1  [D,P2]   = P2 + k1 G2 [D,J12] = 0
 *   [D,G1]   = -G1         [D,G2]   = -G2
 *   [P1,G1]  = D           [P2,G2]  = k2 D
 *   [P1,G2]  = -J12        [P2,G1]  = J12
 */
[[nodiscard]] inline std::array<double, 6> cck_bracket_expansion(const KappaSignature& k,
                                                                 ConformalGenerator a,
                                                                 ConformalGenerator b)
{
    std::array<double, 6> out{};
    if (a == b) {
        return out;
    }
    // Normalize to a canonical order and track the antisymmetry sign.
    double sign = 1.0;
    if (static_cast<int>(a) > static_cast<int>(b)) {
        std::swap(a, b);
        sign = -1.0;
    }
    using G = ConformalGenerator;
    auto set = [&out, sign](G g, double c) { out[static_cast<int>(g)] += sign * c; };

    if (a == G::P1 && b == G::P2) {
        set(G::J12, k.kappa1);
    } else if (a == G::P1 && b == G::J12) {
        set(G::P2, -1.0); // [J12, P1] = P2
    } else if (a == G::P2 && b == G::J12) {
        set(G::P1, k.kappa2); // [J12, P2] = -k2 P1
    } else if (a == G::P1 && b == G::G1) {
        set(G::D, 1.0);
    } else if (a == G::P2 && b == G::G2) {
        set(G::D, k.kappa2);
    } else if (a == G::P1 && b == G::G2) {
        set(G::J12, -1.0);
    } else if (a == G::P2 && b == G::G1) {
        set(G::J12, 1.0);
    } else if (a == G::J12 && b == G::G1) {
        set(G::G2, 1.0); // [J12, G1] = G2
    } else if (a == G::J12 && b == G::G2) {
        set(G::G1, -k.kappa2); // [J12, G2] = -k2 G1
    } else if (a == G::P1 && b == G::D) {
        set(G::P1, -1.0); // [D, P1] = P1 + k1 G1
        set(G::G1, -k.kappa1);
    } else if (a == G::P2 && b == G::D) {
        set(G::P2, -1.0); // [D, P2] = P2 + k1 G2
        set(G::G2, -k.kappa1);
    } else if (a == G::G1 && b == G::D) {
        set(G::G1, 1.0); // [D, G1] = -G1
    } else if (a == G::G2 && b == G::D) {
        set(G::G2, 1.0); // [D, G2] = -G2
    }
    // [G1, G2] = 0 and [J12, D] = 0 fall through with zero output.
    return out;
}

/**
 * @brief 1D structure constants over {P1, G1, D}:
 *   [D, P1] = P1 + kappa G1,   [D, G1] = -G1,   [P1, G1] = D.
 */
[[nodiscard]] inline std::array<double, 3> cck1_bracket_expansion(double kappa,
                                                                  ConformalGenerator1D a,
                                                                  ConformalGenerator1D b)
{
    std::array<double, 3> out{};
    if (a == b) {
        return out;
    }
    double sign = 1.0;
    if (static_cast<int>(a) > static_cast<int>(b)) {
        std::swap(a, b);
        sign = -1.0;
    }
    using G = ConformalGenerator1D;
    if (a == G::P1 && b == G::G1) {
        out[static_cast<int>(G::D)] = sign;
    } else if (a == G::P1 && b == G::D) {
        out[static_cast<int>(G::P1)] = -sign; // [D, P1] = P1 + kappa G1
        out[static_cast<int>(G::G1)] = -sign * kappa;
    } else { // (G1, D)
        out[static_cast<int>(G::G1)] = sign; // [D, G1] = -G1
    }
    return out;
}

/// Finite-difference step scale for bracket/Killing stencils.
inline constexpr double kBracketStepScale = 1e-6;

/**
 * @brief Numeric Lie bracket [X, Y]^i = X^j d_j Y^i - Y^j d_j X^i by central
 *        differences, step h = 1e-6 * max(1, |p|).
 */
[[nodiscard]] inline TangentVector lie_bracket_numeric(const PlanarField& X, const PlanarField& Y,
                                                       double x, double y)
{
    const double h = kBracketStepScale * std::max(1.0, std::hypot(x, y));

    const TangentVector Xp = X(x, y);
    const TangentVector Yp = Y(x, y);

    const TangentVector Yxp = Y(x + h, y), Yxm = Y(x - h, y);
    const TangentVector Yyp = Y(x, y + h), Yym = Y(x, y - h);
    const TangentVector Xxp = X(x + h, y), Xxm = X(x - h, y);
    const TangentVector Xyp = X(x, y + h), Xym = X(x, y - h);

    const double inv2h = 1.0 / (2.0 * h);
    const double dYx_dx = (Yxp.vx - Yxm.vx) * inv2h, dYx_dy = (Yyp.vx - Yym.vx) * inv2h;
    const double dYy_dx = (Yxp.vy - Yxm.vy) * inv2h, dYy_dy = (Yyp.vy - Yym.vy) * inv2h;
    const double dXx_dx = (Xxp.vx - Xxm.vx) * inv2h, dXx_dy = (Xyp.vx - Xym.vx) * inv2h;
    const double dXy_dx = (Xxp.vy - Xxm.vy) * inv2h, dXy_dy = (Xyp.vy - Xym.vy) * inv2h;

    return {Xp.vx * dYx_dx + Xp.vy * dYx_dy - (Yp.vx * dXx_dx + Yp.vy * dXx_dy),
            Xp.vx * dYy_dx + Xp.vy * dYy_dy - (Yp.vx * dXy_dx + Yp.vy * dXy_dy)};
}

/// 1D numeric Lie bracket [X, Y] = X Y' - Y X'.
[[nodiscard]] inline double lie_bracket_numeric_1d(const std::function<double(double)>& X,
                                                   const std::function<double(double)>& Y,
                                                   double x)
{
    const double h = kBracketStepScale * std::max(1.0, std::fabs(x));
    const double dY = (Y(x + h) - Y(x - h)) / (2.0 * h);
    const double dX = (X(x + h) - X(x - h)) / (2.0 * h);
    return X(x) * dY - Y(x) * dX;
}

/// Result of a conformal Killing check.
struct KillingResult {
    double residual = 0.0; ///< max-abs entry of (L_X g - mu_X g) over checked components
    bool restricted = false; ///< true when kappa2 = 0 limited the check to g_xx
};

/**
 * @brief Residual of the conformal Killing equation L_X g = mu_X g at (x, y)
 *        in the ParallelI chart.
 *
 * (L_X g)_ij = X^k d_k g_ij + g_kj d_i X^k + g_ik d_j X^k, with all
 * derivatives by central differences.  For kappa2 = 0 the metric is rank
 * one and only the g_xx component is checked (flagged in the result).
 */
[[nodiscard]] inline KillingResult killing_residual(const KappaSignature& k, const PlanarField& X,
                                                    const PlanarScalar& mu, double x, double y)
{
    const double h = kBracketStepScale * std::max(1.0, std::hypot(x, y));
    const double inv2h = 1.0 / (2.0 * h);

    const auto g = [&k](double a, double b) {
        return metric_at(k, {Chart::ParallelI, a, b});
    };

    const Metric2 g0 = g(x, y);
    const Metric2 gxp = g(x + h, y), gxm = g(x - h, y);
    const Metric2 gyp = g(x, y + h), gym = g(x, y - h);

    const TangentVector Xp = X(x, y);
    const TangentVector Xxp = X(x + h, y), Xxm = X(x - h, y);
    const TangentVector Xyp = X(x, y + h), Xym = X(x, y - h);

    // dX[i][j] = d_i X^j with index 0 = x, 1 = y.
    const double dX[2][2] = {
        {(Xxp.vx - Xxm.vx) * inv2h, (Xxp.vy - Xxm.vy) * inv2h},
        {(Xyp.vx - Xym.vx) * inv2h, (Xyp.vy - Xym.vy) * inv2h},
    };
    const double Xc[2] = {Xp.vx, Xp.vy};
    const double mu0 = mu(x, y);

    const bool restricted = (k.kappa2 == 0.0);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = i; j < 2; ++j) {
            if (restricted && !(i == 0 && j == 0)) {
                continue;
            }
            const double dg_dx = (gxp[i][j] - gxm[i][j]) * inv2h;
            const double dg_dy = (gyp[i][j] - gym[i][j]) * inv2h;
            double lie = Xc[0] * dg_dx + Xc[1] * dg_dy;
            for (int l = 0; l < 2; ++l) {
                lie += g0[l][j] * dX[i][l] + g0[i][l] * dX[j][l];
            }
            worst = std::max(worst, std::fabs(lie - mu0 * g0[i][j]));
        }
    }
    return {worst, restricted};
}

} // namespace cklh
