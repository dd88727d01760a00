// cklh/applications.hpp — the named curved systems built on the two classes:
//
//   * split-complex Riccati equation      -> class i4   (x = u+v, y = u-v)
//   * planar diffusion Riccati system     -> class i4   (x = 2u+v^2, y = 2u-v^2)
//   * Kummer-Schwarz, c = -1/(4 l^2) < 0  -> class i4   (x,y = v/2u ± u/2l)
//   * Ermakov, c = -l^4/4 < 0             -> class i4   (x,y = -v/u ± l^2/2u^2)
//   * Kummer-Schwarz, c = 1/l^2 > 0       -> class p2   (x = v/2u, y = u/l)
//   * Ermakov, c = l^4 > 0                -> class p2   (x = -v/u, y = l^2/u^2)
//
// Each application ships: the curved generating fields in its own (u, v)
// coordinates (closed forms), the coordinate change with exact Jacobian and
// domain predicates, and the symplectic weight / Hamiltonian triple obtained
// by exact pullback of the parent class (scale * det J * W(Phi), with exact
// chain-rule gradients).  Free functions provide right-hand sides, the
// Milne-Pinney pairwise invariant, the first-order small-curvature Ermakov
// truncation, a pushforward residual for change-of-variables verification,
// and the oscillator-reduction residual of the flat complex Riccati system.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "cklh/class_i4.hpp"
#include "cklh/class_p2.hpp"
#include "cklh/dynamics.hpp"
#include "cklh/ktrig.hpp"
#include "cklh/symplectic.hpp"
#include "cklh/types.hpp"

namespace cklh {

/// Triple of planar vector fields as a single evaluator.
using FieldTriple = std::function<std::array<TangentVector, 3>(double, double)>;

/// Sign class of the model constant c: NegC pairs with class i4, PosC with
/// class p2.
enum class ModelClass { NegC, PosC };

/// Model constant c and the parameter lambda that fixes it.
struct ModelParams {
    double c = 0.0;
    double lambda = 1.0;

    /// Kummer-Schwarz constant: c = -1/(4 l^2) (NegC) or c = 1/l^2 (PosC).
    [[nodiscard]] static ModelParams kummer_schwarz(ModelClass cls, double lambda)
    {
        require_lambda(lambda);
        const double c = (cls == ModelClass::NegC) ? -1.0 / (4.0 * lambda * lambda)
                                                   : 1.0 / (lambda * lambda);
        return {c, lambda};
    }

    /// Ermakov constant: c = -l^4/4 (NegC) or c = l^4 (PosC).
    [[nodiscard]] static ModelParams ermakov(ModelClass cls, double lambda)
    {
        require_lambda(lambda);
        const double l2 = lambda * lambda;
        const double c = (cls == ModelClass::NegC) ? -0.25 * l2 * l2 : l2 * l2;
        return {c, lambda};
    }

private:
    static void require_lambda(double lambda)
    {
        if (!(std::fabs(lambda) > 0.0) || !std::isfinite(lambda)) {
            throw DomainError("model params: lambda must be nonzero and finite");
        }
    }
};

/// Invertible change of coordinates with its exact Jacobian and the domain
/// predicates of both sides.  inverse(forward(p)) = p on the source domain.
struct CoordinateChange {
    std::string name;
    std::function<std::array<double, 2>(double, double)> forward;
    std::function<std::array<double, 2>(double, double)> inverse;
    /// Exact Jacobian of forward: [[dX/du, dX/dv], [dY/du, dY/dv]].
    std::function<std::array<std::array<double, 2>, 2>(double, double)> jacobian;
    std::function<bool(double, double)> source_ok;
    std::function<bool(double, double)> target_ok;
};

/// Swap the two sides of a change; the reversed Jacobian is the exact 2x2
/// inverse of the original one evaluated at the preimage.
[[nodiscard]] inline CoordinateChange reversed(const CoordinateChange& change)
{
    CoordinateChange r;
    r.name = change.name + "-reversed";
    r.forward = change.inverse;
    r.inverse = change.forward;
    r.source_ok = change.target_ok;
    r.target_ok = change.source_ok;
    r.jacobian = [change](double x, double y) {
        const auto p = change.inverse(x, y);
        const auto j = change.jacobian(p[0], p[1]);
        const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if (std::fabs(det) < 1e-300) {
            throw DomainError("coordinate change: singular Jacobian");
        }
        return std::array<std::array<double, 2>, 2>{
            {{j[1][1] / det, -j[0][1] / det}, {-j[1][0] / det, j[0][0] / det}}};
    };
    return r;
}

namespace detail {

inline void require_off(double value, const char* what)
{
    if (std::fabs(value) < kTanPoleTolerance) {
        throw DomainError(std::string("application domain: ") + what);
    }
}

/// (1 - ck(ka,a) ck(kb,b)) / k for equal labels ka = kb = k, evaluated
/// k-safely as V(a) + V(b) - k V(a) V(b).
[[nodiscard]] inline double one_minus_cc_over_k(double kappa, double a, double b)
{
    const double va = vk(kappa, a), vb = vk(kappa, b);
    return va + vb - kappa * va * vb;
}

/// Pull the parent-class symplectic weight back through a change:
/// W_app(p) = scale * det J(p) * W_class(Phi(p)).
[[nodiscard]] inline SymplecticWeight pullback_weight(double scale, CoordinateChange change,
                                                      SymplecticWeight base)
{
    return {[scale, change = std::move(change), base = std::move(base)](double u, double v) {
        if (!change.source_ok(u, v)) {
            throw DomainError("application domain: point outside the coordinate chart");
        }
        const auto j = change.jacobian(u, v);
        const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        const auto q = change.forward(u, v);
        return scale * det * base.at(q[0], q[1]);
    }};
}

/// Pull a parent-class Hamiltonian triple back through a change:
/// h_app = scale * (h_class o Phi), with exact chain-rule gradients
/// grad h_app = scale * J^T grad h_class(Phi).
[[nodiscard]] inline std::array<ScalarField, 3>
pullback_hamiltonians(double scale, const CoordinateChange& change,
                      const std::array<ScalarField, 3>& base)
{
    std::array<ScalarField, 3> out;
    for (int i = 0; i < 3; ++i) {
        out[i] = ScalarField{
            [scale, change, f = base[static_cast<std::size_t>(i)]](double u, double v) {
                if (!change.source_ok(u, v)) {
                    throw DomainError("application domain: point outside the coordinate chart");
                }
                const auto q = change.forward(u, v);
                return scale * f.value(q[0], q[1]);
            },
            [scale, change, f = base[static_cast<std::size_t>(i)]](double u,
                                                                   double v) -> Gradient2 {
                if (!change.source_ok(u, v)) {
                    throw DomainError("application domain: point outside the coordinate chart");
                }
                const auto q = change.forward(u, v);
                const auto j = change.jacobian(u, v);
                const Gradient2 g = f.grad(q[0], q[1]);
                return {scale * (j[0][0] * g.dx + j[1][0] * g.dy),
                        scale * (j[0][1] * g.dx + j[1][1] * g.dy)};
            }};
    }
    return out;
}

} // namespace detail

// --------------------------------------------------------------------------
// Coordinate changes (application (u,v) -> class (x,y))
// --------------------------------------------------------------------------

/// x = u + v, y = u - v (split-complex Riccati -> class i4).
[[nodiscard]] inline CoordinateChange sc_riccati_change()
{
    CoordinateChange c;
    c.name = "split-complex-riccati";
    c.forward = [](double u, double v) { return std::array<double, 2>{u + v, u - v}; };
    c.inverse = [](double x, double y) {
        return std::array<double, 2>{0.5 * (x + y), 0.5 * (x - y)};
    };
    c.jacobian = [](double, double) {
        return std::array<std::array<double, 2>, 2>{{{1.0, 1.0}, {1.0, -1.0}}};
    };
    c.source_ok = [](double, double v) { return std::fabs(v) > kTanPoleTolerance; };
    c.target_ok = [](double x, double y) { return std::fabs(x - y) > kTanPoleTolerance; };
    return c;
}

/// x = 2u + v^2, y = 2u - v^2 on the sheet v > 0 (diffusion -> class i4).
[[nodiscard]] inline CoordinateChange diffusion_change()
{
    CoordinateChange c;
    c.name = "diffusion-riccati";
    c.forward = [](double u, double v) {
        return std::array<double, 2>{2.0 * u + v * v, 2.0 * u - v * v};
    };
    c.inverse = [](double x, double y) {
        if (!(x > y)) {
            throw DomainError("diffusion change: inverse requires x > y");
        }
        return std::array<double, 2>{0.25 * (x + y), std::sqrt(0.5 * (x - y))};
    };
    c.jacobian = [](double, double v) {
        return std::array<std::array<double, 2>, 2>{{{2.0, 2.0 * v}, {2.0, -2.0 * v}}};
    };
    c.source_ok = [](double, double v) { return v > kTanPoleTolerance; };
    c.target_ok = [](double x, double y) { return x - y > kTanPoleTolerance; };
    return c;
}

/// x,y = v/2u ± u/2l (Kummer-Schwarz with c < 0 -> class i4).
[[nodiscard]] inline CoordinateChange ks_neg_change(double lambda)
{
    CoordinateChange c;
    c.name = "kummer-schwarz-negc";
    c.forward = [lambda](double u, double v) {
        detail::require_off(u, "u = 0");
        const double a = 0.5 * v / u, b = 0.5 * u / lambda;
        return std::array<double, 2>{a + b, a - b};
    };
    c.inverse = [lambda](double x, double y) {
        return std::array<double, 2>{lambda * (x - y), lambda * (x * x - y * y)};
    };
    c.jacobian = [lambda](double u, double v) {
        detail::require_off(u, "u = 0");
        const double du = -0.5 * v / (u * u), dl = 0.5 / lambda, dv = 0.5 / u;
        return std::array<std::array<double, 2>, 2>{{{du + dl, dv}, {du - dl, dv}}};
    };
    c.source_ok = [](double u, double) { return std::fabs(u) > kTanPoleTolerance; };
    c.target_ok = [](double x, double y) { return std::fabs(x - y) > kTanPoleTolerance; };
    return c;
}

/// x,y = -v/u ± l^2/2u^2 on the sheet u > 0 (Ermakov with c < 0 -> class i4).
[[nodiscard]] inline CoordinateChange ermakov_neg_change(double lambda)
{
    CoordinateChange c;
    c.name = "ermakov-negc";
    c.forward = [lambda](double u, double v) {
        detail::require_off(u, "u = 0");
        const double a = -v / u, b = 0.5 * lambda * lambda / (u * u);
        return std::array<double, 2>{a + b, a - b};
    };
    c.inverse = [lambda](double x, double y) {
        if (!(x > y)) {
            throw DomainError("ermakov change: inverse requires x > y");
        }
        const double s = std::sqrt(x - y);
        return std::array<double, 2>{lambda / s, -0.5 * lambda * (x + y) / s};
    };
    c.jacobian = [lambda](double u, double v) {
        detail::require_off(u, "u = 0");
        const double u2 = u * u;
        const double da = v / u2, db = -lambda * lambda / (u2 * u), dv = -1.0 / u;
        return std::array<std::array<double, 2>, 2>{{{da + db, dv}, {da - db, dv}}};
    };
    c.source_ok = [](double u, double) { return u > kTanPoleTolerance; };
    c.target_ok = [](double x, double y) { return x - y > kTanPoleTolerance; };
    return c;
}

/// x = v/2u, y = u/l (Kummer-Schwarz with c > 0 -> class p2).
[[nodiscard]] inline CoordinateChange ks_pos_change(double lambda)
{
    CoordinateChange c;
    c.name = "kummer-schwarz-posc";
    c.forward = [lambda](double u, double v) {
        detail::require_off(u, "u = 0");
        return std::array<double, 2>{0.5 * v / u, u / lambda};
    };
    c.inverse = [lambda](double x, double y) {
        return std::array<double, 2>{lambda * y, 2.0 * lambda * x * y};
    };
    c.jacobian = [lambda](double u, double v) {
        detail::require_off(u, "u = 0");
        return std::array<std::array<double, 2>, 2>{
            {{-0.5 * v / (u * u), 0.5 / u}, {1.0 / lambda, 0.0}}};
    };
    c.source_ok = [](double u, double) { return std::fabs(u) > kTanPoleTolerance; };
    c.target_ok = [](double, double y) { return std::fabs(y) > kTanPoleTolerance; };
    return c;
}

/// x = -v/u, y = l^2/u^2 on the sheet u > 0 (Ermakov with c > 0 -> class p2).
[[nodiscard]] inline CoordinateChange ermakov_pos_change(double lambda)
{
    CoordinateChange c;
    c.name = "ermakov-posc";
    c.forward = [lambda](double u, double v) {
        detail::require_off(u, "u = 0");
        return std::array<double, 2>{-v / u, lambda * lambda / (u * u)};
    };
    c.inverse = [lambda](double x, double y) {
        if (!(y > 0.0)) {
            throw DomainError("ermakov change: inverse requires y > 0");
        }
        const double s = std::sqrt(y);
        return std::array<double, 2>{lambda / s, -lambda * x / s};
    };
    c.jacobian = [lambda](double u, double v) {
        detail::require_off(u, "u = 0");
        const double u2 = u * u;
        return std::array<std::array<double, 2>, 2>{
            {{v / u2, -1.0 / u}, {-2.0 * lambda * lambda / (u2 * u), 0.0}}};
    };
    c.source_ok = [](double u, double) { return u > kTanPoleTolerance; };
    c.target_ok = [](double, double y) { return y > kTanPoleTolerance; };
    return c;
}

// --------------------------------------------------------------------------
// Curved generating fields in application coordinates (closed forms)
// --------------------------------------------------------------------------

/// Split-complex Riccati generators:
///   X1 = (1, 0)
///   X2 = ( ck(v) sk(u),                 ck(u) sk(v) )
///   X3 = ( 2 (1 - ck(u) ck(v))/kappa,   2 sk(u) sk(v) )   [kappa-safe]
[[nodiscard]] inline FieldTriple sc_riccati_fields(double kappa)
{
    return [kappa](double u, double v) {
        const double su = sk(kappa, u), cu = ck(kappa, u);
        const double sv = sk(kappa, v), cv = ck(kappa, v);
        return std::array<TangentVector, 3>{
            {{1.0, 0.0},
             {cv * su, cu * sv},
             {2.0 * detail::one_minus_cc_over_k(kappa, u, v), 2.0 * su * sv}}};
    };
}

/// Diffusion Riccati generators (v != 0):
///   X1 = (1/2, 0)
///   X2 = ( ck(v^2) sk(2u)/2,            ck(2u) sk(v^2)/(2v) )
///   X3 = ( (1 - ck(2u) ck(v^2))/kappa,  sk(2u) sk(v^2)/v )
[[nodiscard]] inline FieldTriple diffusion_fields(double kappa)
{
    return [kappa](double u, double v) {
        detail::require_off(v, "v = 0");
        const double a = 2.0 * u, b = v * v;
        const double sa = sk(kappa, a), ca = ck(kappa, a);
        const double sb = sk(kappa, b), cb = ck(kappa, b);
        return std::array<TangentVector, 3>{
            {{0.5, 0.0},
             {0.5 * cb * sa, 0.5 * ca * sb / v},
             {detail::one_minus_cc_over_k(kappa, a, b), sa * sb / v}}};
    };
}

/// Kummer-Schwarz (c < 0) generators, with a = u/2l, b = v/2u:
///   X1 = (0, 2u)
///   X2 = ( 2l sk(a) ck(b),      2 [u ck(a) sk(b) + (l v/u) sk(a) ck(b)] )
///   X3 = ( 4l sk(a) sk(b),      4 [u (1 - ck(a) ck(b))/kappa + (l v/u) sk(a) sk(b)] )
[[nodiscard]] inline FieldTriple ks_neg_fields(double kappa, double lambda)
{
    return [kappa, lambda](double u, double v) {
        detail::require_off(u, "u = 0");
        const double a = 0.5 * u / lambda, b = 0.5 * v / u;
        const double sa = sk(kappa, a), ca = ck(kappa, a);
        const double sb = sk(kappa, b), cb = ck(kappa, b);
        const double r = lambda * v / u;
        return std::array<TangentVector, 3>{
            {{0.0, 2.0 * u},
             {2.0 * lambda * sa * cb, 2.0 * (u * ca * sb + r * sa * cb)},
             {4.0 * lambda * sa * sb,
              4.0 * (u * detail::one_minus_cc_over_k(kappa, a, b) + r * sa * sb)}}};
    };
}

/// Ermakov (c < 0) generators, with a = v/u, b = l^2/2u^2:
///   X1 = (0, -u)
///   X2 = ( -(u^3/l^2) ck(a) sk(b),  u sk(a) ck(b) - (u^2 v/l^2) ck(a) sk(b) )
///   X3 = ( (2u^3/l^2) sk(a) sk(b),
///          (2u^2 v/l^2) sk(a) sk(b) - 2u (1 - ck(a) ck(b))/kappa )
[[nodiscard]] inline FieldTriple ermakov_neg_fields(double kappa, double lambda)
{
    return [kappa, lambda](double u, double v) {
        detail::require_off(u, "u = 0");
        const double l2 = lambda * lambda;
        const double u2 = u * u;
        const double a = v / u, b = 0.5 * l2 / u2;
        const double sa = sk(kappa, a), ca = ck(kappa, a);
        const double sb = sk(kappa, b), cb = ck(kappa, b);
        return std::array<TangentVector, 3>{
            {{0.0, -u},
             {-(u2 * u / l2) * ca * sb, u * sa * cb - (u2 * v / l2) * ca * sb},
             {(2.0 * u2 * u / l2) * sa * sb,
              (2.0 * u2 * v / l2) * sa * sb
                  - 2.0 * u * detail::one_minus_cc_over_k(kappa, a, b)}}};
    };
}

/// Kummer-Schwarz (c > 0) generators, with x0 = v/2u, y0 = u/l and the
/// two-label kernels S1 = sk(k1, x0), S12 = sk(k1 k2, y0), etc.:
///   X1 = (0, 2u)
///   X2 = ( l C1 S12,    2u S1/C12 + (l v/u) C1 S12 )
///   X3 = ( 2l S1 S12,   4u (V1(x0) - k2 V12(y0))/C12 + (2l v/u) S1 S12 )
[[nodiscard]] inline FieldTriple ks_pos_fields(const KappaSignature& k, double lambda)
{
    return [k, lambda](double u, double v) {
        detail::require_off(u, "u = 0");
        const double k12 = k.k12();
        const double x0 = 0.5 * v / u, y0 = u / lambda;
        const double s1 = sk(k.kappa1, x0), c1 = ck(k.kappa1, x0);
        const double s12 = sk(k12, y0), c12 = ck(k12, y0);
        detail::require_off(c12, "C12 pole");
        const double q = vk(k.kappa1, x0) - k.kappa2 * vk(k12, y0);
        const double r = lambda * v / u;
        return std::array<TangentVector, 3>{
            {{0.0, 2.0 * u},
             {lambda * c1 * s12, 2.0 * u * s1 / c12 + r * c1 * s12},
             {2.0 * lambda * s1 * s12, 4.0 * u * q / c12 + 2.0 * r * s1 * s12}}};
    };
}

/// Ermakov (c > 0) generators, with x0 = v/u, y0 = l^2/u^2:
///   X1 = (0, -u)
///   X2 = ( -(u^3/2l^2) C1 S12,   u S1/C12 - (u^2 v/2l^2) C1 S12 )
///   X3 = ( (u^3/l^2) S1 S12,
///          -2u (V1(x0) - k2 V12(y0))/C12 + (u^2 v/l^2) S1 S12 )
[[nodiscard]] inline FieldTriple ermakov_pos_fields(const KappaSignature& k, double lambda)
{
    return [k, lambda](double u, double v) {
        detail::require_off(u, "u = 0");
        const double k12 = k.k12();
        const double l2 = lambda * lambda;
        const double u2 = u * u;
        const double x0 = v / u, y0 = l2 / u2;
        const double s1 = sk(k.kappa1, x0), c1 = ck(k.kappa1, x0);
        const double s12 = sk(k12, y0), c12 = ck(k12, y0);
        detail::require_off(c12, "C12 pole");
        const double q = vk(k.kappa1, x0) - k.kappa2 * vk(k12, y0);
        return std::array<TangentVector, 3>{
            {{0.0, -u},
             {-(u2 * u / (2.0 * l2)) * c1 * s12,
              u * s1 / c12 - (u2 * v / (2.0 * l2)) * c1 * s12},
             {(u2 * u / l2) * s1 * s12,
              -2.0 * u * q / c12 + (u2 * v / l2) * s1 * s12}}};
    };
}

// --------------------------------------------------------------------------
// Right-hand sides
// --------------------------------------------------------------------------

/**
 * @brief Split-complex Riccati system: b1 X1 + b2 X2 + b3 X3, i.e.
 *          u' = b1 + b2 ck(v) sk(u) + 2 b3 (1 - ck(u) ck(v))/kappa
 *          v' = b2 ck(u) sk(v) + 2 b3 sk(u) sk(v),
 *        reducing at kappa = 0 to u' = b1 + b2 u + b3 (u^2 + v^2),
 *        v' = b2 v + 2 b3 u v.
 */
[[nodiscard]] inline TangentVector sc_riccati_rhs(double kappa, const CoefficientSet& coeffs,
                                                  double t, double u, double v)
{
    const auto X = sc_riccati_fields(kappa)(u, v);
    return coeffs.b1(t) * X[0] + coeffs.b2(t) * X[1] + coeffs.b3(t) * X[2];
}

/**
 * @brief Diffusion Riccati system, the combination -2b X1 + 2c X2 + 2a X3:
 *          u' = -b + c ck(v^2) sk(2u) + 2a (1 - ck(2u) ck(v^2))/kappa
 *          v' = (c/v) ck(2u) sk(v^2) + (2a/v) sk(2u) sk(v^2),
 *        reducing at kappa = 0 to (-b + 2cu + 4au^2 + av^4, cv + 4auv).
 */
[[nodiscard]] inline TangentVector diffusion_rhs(double kappa, const Coefficient& a,
                                                 const Coefficient& b, const Coefficient& c,
                                                 double t, double u, double v)
{
    const auto X = diffusion_fields(kappa)(u, v);
    return -2.0 * b(t) * X[0] + 2.0 * c(t) * X[1] + 2.0 * a(t) * X[2];
}

/**
 * @brief Kummer-Schwarz system X3 + eta(t) X1 in the chosen sign class:
 *        NegC (c = -1/(4 l^2), scalar curvature k.kappa1) or PosC
 *        (c = 1/l^2, full two-label curvature).  Both reduce at zero
 *        curvature to u' = v, v' = (3/2) v^2/u - 2 c u^3 + 2 eta u.
 */
[[nodiscard]] inline TangentVector ks_rhs(ModelClass cls, const KappaSignature& k,
                                          const ModelParams& params, const Coefficient& eta,
                                          double t, double u, double v)
{
    const auto X = (cls == ModelClass::NegC) ? ks_neg_fields(k.kappa1, params.lambda)(u, v)
                                             : ks_pos_fields(k, params.lambda)(u, v);
    return X[2] + eta(t) * X[0];
}

/**
 * @brief Ermakov system X3 + Omega(t)^2 X1 in the chosen sign class:
 *        NegC (c = -l^4/4, scalar curvature k.kappa1) or PosC (c = l^4,
 *        full two-label curvature).  Both reduce at zero curvature to
 *        u' = v, v' = -Omega^2 u + c/u^3.
 */
[[nodiscard]] inline TangentVector ermakov_rhs(ModelClass cls, const KappaSignature& k,
                                               const ModelParams& params,
                                               const Coefficient& Omega, double t, double u,
                                               double v)
{
    const auto X = (cls == ModelClass::NegC)
                       ? ermakov_neg_fields(k.kappa1, params.lambda)(u, v)
                       : ermakov_pos_fields(k, params.lambda)(u, v);
    const double w = Omega(t);
    return X[2] + (w * w) * X[0];
}

/// Integrable wrappers (state = (u, v)).
[[nodiscard]] inline SystemRHS sc_riccati_system(double kappa, CoefficientSet coeffs)
{
    return [kappa, coeffs](double t, const StateVector& s, StateVector& ds) {
        const TangentVector d = sc_riccati_rhs(kappa, coeffs, t, s[0], s[1]);
        ds[0] = d.vx;
        ds[1] = d.vy;
    };
}

[[nodiscard]] inline SystemRHS diffusion_system(double kappa, Coefficient a, Coefficient b,
                                                Coefficient c)
{
    return [kappa, a, b, c](double t, const StateVector& s, StateVector& ds) {
        const TangentVector d = diffusion_rhs(kappa, a, b, c, t, s[0], s[1]);
        ds[0] = d.vx;
        ds[1] = d.vy;
    };
}

[[nodiscard]] inline SystemRHS ks_system(ModelClass cls, KappaSignature k, ModelParams params,
                                         Coefficient eta)
{
    return [cls, k, params, eta](double t, const StateVector& s, StateVector& ds) {
        const TangentVector d = ks_rhs(cls, k, params, eta, t, s[0], s[1]);
        ds[0] = d.vx;
        ds[1] = d.vy;
    };
}

[[nodiscard]] inline SystemRHS ermakov_system(ModelClass cls, KappaSignature k,
                                              ModelParams params, Coefficient Omega)
{
    return [cls, k, params, Omega](double t, const StateVector& s, StateVector& ds) {
        const TangentVector d = ermakov_rhs(cls, k, params, Omega, t, s[0], s[1]);
        ds[0] = d.vx;
        ds[1] = d.vy;
    };
}

/**
 * @brief First-order small-curvature truncation of the NegC Ermakov system:
 *          u' = v + (kappa/6) ( c v/u^4 - v^3/u^2 )
 *          v' = -Omega^2 u + c/u^3
 *               + (kappa/12) ( c^2/u^7 - 4 c v^2/u^5 - v^4/u^3 ).
 */
[[nodiscard]] inline TangentVector ermakov_perturbed_rhs(double kappa, const ModelParams& params,
                                                         const Coefficient& Omega, double t,
                                                         double u, double v)
{
    detail::require_off(u, "u = 0");
    const double c = params.c;
    const double w = Omega(t);
    const double u2 = u * u, u3 = u2 * u, v2 = v * v;
    return {v + (kappa / 6.0) * (c * v / (u2 * u2) - v2 * v / u2),
            -w * w * u + c / u3
                + (kappa / 12.0) * (c * c / (u3 * u2 * u2) - 4.0 * c * v2 / (u3 * u2)
                                    - v2 * v2 / u3)};
}

// --------------------------------------------------------------------------
// Application bundles (fields + class data + pullback symplectic structure)
// --------------------------------------------------------------------------

/// Everything needed to verify one application against its parent class.
struct ApplicationBundle {
    std::string name;
    CoordinateChange change;               ///< app (u,v) -> class (x,y)
    FieldTriple fields;                    ///< curved generators, app coordinates
    FieldTriple class_fields;              ///< parent-class generators, class coordinates
    SymplecticWeight weight;               ///< pullback symplectic weight
    std::array<ScalarField, 3> hamiltonians; ///< pullback Hamiltonian triple
    double casimir_kappa = 0.0;            ///< curvature label entering casimir()
    double casimir_value = 0.0;            ///< expected constant of the h-triple
};

namespace detail {

[[nodiscard]] inline FieldTriple i4_field_triple(double kappa)
{
    return [kappa](double x, double y) { return i4_fields(kappa, {x, y}); };
}

[[nodiscard]] inline FieldTriple p2_field_triple(const KappaSignature& k)
{
    return [k](double x, double y) { return p2_fields(k, {x, y}, P2Variant::TimeLike); };
}

[[nodiscard]] inline ApplicationBundle make_i4_bundle(std::string name, CoordinateChange change,
                                                      FieldTriple fields, double kappa,
                                                      double scale, double casimir_value)
{
    ApplicationBundle b;
    b.name = std::move(name);
    b.change = change;
    b.fields = std::move(fields);
    b.class_fields = i4_field_triple(kappa);
    b.weight = pullback_weight(scale, change, i4_symplectic(kappa));
    b.hamiltonians = pullback_hamiltonians(scale, change, i4_hamiltonians(kappa));
    b.casimir_kappa = kappa;
    b.casimir_value = casimir_value;
    return b;
}

[[nodiscard]] inline ApplicationBundle make_p2_bundle(std::string name, CoordinateChange change,
                                                      FieldTriple fields,
                                                      const KappaSignature& k, double scale,
                                                      double casimir_value)
{
    ApplicationBundle b;
    b.name = std::move(name);
    b.change = change;
    b.fields = std::move(fields);
    b.class_fields = p2_field_triple(k);
    b.weight = pullback_weight(scale, change, p2_symplectic(k));
    b.hamiltonians = pullback_hamiltonians(scale, change, p2_hamiltonians(k));
    b.casimir_kappa = k.kappa1;
    b.casimir_value = casimir_value;
    return b;
}

} // namespace detail

/// W = -1/(2 sk(v)^2); h = ( 1/(2 tk(v)), sk(u)/(2 sk(v)), (ck(v)-ck(u))/(kappa sk(v)) ).
[[nodiscard]] inline ApplicationBundle sc_riccati_bundle(double kappa)
{
    return detail::make_i4_bundle("sc_riccati", sc_riccati_change(), sc_riccati_fields(kappa),
                                  kappa, 1.0, -0.25);
}

/// W = -2v/sk(v^2)^2; h = ( 1/(2 tk(v^2)), sk(2u)/(2 sk(v^2)), (ck(v^2)-ck(2u))/(kappa sk(v^2)) ).
[[nodiscard]] inline ApplicationBundle diffusion_bundle(double kappa)
{
    return detail::make_i4_bundle("diffusion", diffusion_change(), diffusion_fields(kappa),
                                  kappa, 1.0, -0.25);
}

/// W = 1/(8 l u sk(u/2l)^2); h = ( 1/(2 tk(a)), sk(b)/(2 sk(a)), (ck(a)-ck(b))/(kappa sk(a)) ),
/// a = u/2l, b = v/2u.
[[nodiscard]] inline ApplicationBundle ks_neg_bundle(double kappa, const ModelParams& params)
{
    return detail::make_i4_bundle("ks_neg", ks_neg_change(params.lambda),
                                  ks_neg_fields(kappa, params.lambda), kappa, 1.0, -0.25);
}

/// W = l^4/(4 u^4 sk(l^2/2u^2)^2); h scaled by l^2/2 relative to the class;
/// Casimir constant -l^4/16 = c/4.
[[nodiscard]] inline ApplicationBundle ermakov_neg_bundle(double kappa, const ModelParams& params)
{
    const double l2 = params.lambda * params.lambda;
    return detail::make_i4_bundle("ermakov_neg", ermakov_neg_change(params.lambda),
                                  ermakov_neg_fields(kappa, params.lambda), kappa, 0.5 * l2,
                                  -l2 * l2 / 16.0);
}

/// W = -C12(u/l)/(2 l u S12(u/l)^2); h = class triple at (v/2u, u/l);
/// Casimir constant kappa2.
[[nodiscard]] inline ApplicationBundle ks_pos_bundle(const KappaSignature& k,
                                                     const ModelParams& params)
{
    return detail::make_p2_bundle("ks_pos", ks_pos_change(params.lambda),
                                  ks_pos_fields(k, params.lambda), k, 1.0, k.kappa2);
}

/// W = l^4 C12(l^2/u^2)/(u^4 S12(l^2/u^2)^2); h scaled by -l^2/2 relative to
/// the class; Casimir constant kappa2 l^4/4.
[[nodiscard]] inline ApplicationBundle ermakov_pos_bundle(const KappaSignature& k,
                                                          const ModelParams& params)
{
    const double l2 = params.lambda * params.lambda;
    return detail::make_p2_bundle("ermakov_pos", ermakov_pos_change(params.lambda),
                                  ermakov_pos_fields(k, params.lambda), k, -0.5 * l2,
                                  k.kappa2 * l2 * l2 / 4.0);
}

// --------------------------------------------------------------------------
// Special invariants and verification helpers
// --------------------------------------------------------------------------

/**
 * @brief Pairwise invariant of two NegC Ermakov (Milne-Pinney) copies:
 *
 *   F2 = (l^4/8) ( vk(B) - vk(a1 + a2) ) / ( sk(a1) sk(a2) ),
 *        a_i = l^2/(2 u_i^2),  B = (u1 v2 - u2 v1)/(u1 u2),
 *
 * reducing at kappa = 0 to (u1 v2 - u2 v1)^2/4
 * + (c/4)(u1^2/u2^2 + u2^2/u1^2) + c/2 with c = -l^4/4.
 */
[[nodiscard]] inline double milne_pinney_invariant(double kappa, const ModelParams& params,
                                                   double u1, double v1, double u2, double v2)
{
    detail::require_off(u1, "u = 0");
    detail::require_off(u2, "u = 0");
    const double l2 = params.lambda * params.lambda;
    const double a1 = 0.5 * l2 / (u1 * u1), a2 = 0.5 * l2 / (u2 * u2);
    const double B = (u1 * v2 - u2 * v1) / (u1 * u2);
    const double s1 = sk(kappa, a1), s2 = sk(kappa, a2);
    detail::require_off(s1, "sk(l^2/2u^2) = 0");
    detail::require_off(s2, "sk(l^2/2u^2) = 0");
    return 0.125 * l2 * l2 * (vk(kappa, B) - vk(kappa, a1 + a2)) / (s1 * s2);
}

/**
 * @brief Max residual over the three generators of the pushforward claim
 *        dPhi(X_i)(p) = X_i'(Phi(p)), with the Jacobian of map.forward
 *        taken by central differences.
 * @throws DomainError when p or a stencil point leaves the source domain.
 */
[[nodiscard]] inline double pushforward_residual(const CoordinateChange& map,
                                                 const FieldTriple& source_fields,
                                                 const FieldTriple& target_fields, double u,
                                                 double v)
{
    if (!map.source_ok(u, v)) {
        throw DomainError("pushforward: point outside the source domain");
    }
    const double hu = 1e-6 * std::max(1.0, std::fabs(u));
    const double hv = 1e-6 * std::max(1.0, std::fabs(v));
    if (!map.source_ok(u + hu, v) || !map.source_ok(u - hu, v) || !map.source_ok(u, v + hv)
        || !map.source_ok(u, v - hv)) {
        throw DomainError("pushforward: finite-difference stencil leaves the source domain");
    }
    const auto fpu = map.forward(u + hu, v), fmu = map.forward(u - hu, v);
    const auto fpv = map.forward(u, v + hv), fmv = map.forward(u, v - hv);
    const double j00 = (fpu[0] - fmu[0]) / (2.0 * hu), j01 = (fpv[0] - fmv[0]) / (2.0 * hv);
    const double j10 = (fpu[1] - fmu[1]) / (2.0 * hu), j11 = (fpv[1] - fmv[1]) / (2.0 * hv);

    const auto q = map.forward(u, v);
    const auto Xs = source_fields(u, v);
    const auto Xt = target_fields(q[0], q[1]);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        const auto& s = Xs[static_cast<std::size_t>(i)];
        const auto& d = Xt[static_cast<std::size_t>(i)];
        const double rx = j00 * s.vx + j01 * s.vy - d.vx;
        const double ry = j10 * s.vx + j11 * s.vy - d.vy;
        worst = std::max(worst, std::hypot(rx, ry));
    }
    return worst;
}

/**
 * @brief Residual of the oscillator reduction of the flat complex Riccati
 *        system: along a trajectory (x(t), y(t)) of the k1 = 0 class system,
 *        xi(t) = y(t)^{-1/2} must satisfy
 *
 *   xi'' = (b3'/b3) xi' - A(t) xi + kappa2 b3(t)^2 / xi^3,
 *   A(t) = b1 b3 - b2^2/4 + b2'/2 - b2 b3'/(2 b3).
 *
 * Second derivatives are taken by central differences of step fd_step on
 * the trajectory's dense output; returns the max absolute residual over a
 * uniform interior sample grid.
 *
 * @throws DomainError when y <= 0 or b3 = 0 on the window, or when the
 *         coefficients are not smooth presets (b2', b3' are required).
 */
[[nodiscard]] inline double complex_riccati_reduction_residual(double kappa2,
                                                               const CoefficientSet& coeffs,
                                                               const Trajectory& traj,
                                                               int samples = 50,
                                                               double fd_step = 2e-3)
{
    if (!coeffs.b2.is_smooth() || !coeffs.b3.is_smooth()) {
        throw DomainError("reduction residual: smooth coefficient presets required");
    }
    const double t0 = traj.t_begin(), t1 = traj.t_end();
    const double h = fd_step;
    if (!(t1 - t0 > 4.0 * h) || samples < 1) {
        throw DomainError("reduction residual: trajectory window too short");
    }
    const auto xi_at = [&](double t) {
        const StateVector s = traj.sample(t);
        if (!(s[1] > 0.0)) {
            throw DomainError("reduction residual: y <= 0 on the window");
        }
        return 1.0 / std::sqrt(s[1]);
    };
    double worst = 0.0;
    const double lo = t0 + 2.0 * h, hi = t1 - 2.0 * h;
    for (int i = 0; i < samples; ++i) {
        const double t = (samples == 1) ? 0.5 * (lo + hi)
                                        : lo + (hi - lo) * static_cast<double>(i)
                                              / static_cast<double>(samples - 1);
        const double xm = xi_at(t - h), x0 = xi_at(t), xp = xi_at(t + h);
        const double xi_dd = (xp - 2.0 * x0 + xm) / (h * h);
        const double xi_d = (xp - xm) / (2.0 * h);
        const double b1 = coeffs.b1(t), b2 = coeffs.b2(t), b3 = coeffs.b3(t);
        const double db2 = coeffs.b2.derivative(t), db3 = coeffs.b3.derivative(t);
        if (std::fabs(b3) < kTanPoleTolerance) {
            throw DomainError("reduction residual: b3 = 0 on the window");
        }
        const double A = b1 * b3 - 0.25 * b2 * b2 + 0.5 * db2 - b2 * db3 / (2.0 * b3);
        const double res = xi_dd - (db3 / b3) * xi_d + A * x0
                         - kappa2 * b3 * b3 / (x0 * x0 * x0);
        worst = std::max(worst, std::fabs(res));
    }
    return worst;
}

} // namespace cklh
