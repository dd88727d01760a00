// cklh/geometry.hpp — the nine 2D Cayley–Klein spaces: ambient (Weierstrass)
// model, the three geodesic coordinate charts, metrics, and the three
// one-parameter isometry subgroups.
//
// The space is the quadric
//     Sigma: (x0)^2 + kappa1 (x1)^2 + kappa1 kappa2 (x2)^2 = 1
// (connected component of the origin O = (1,0,0)); for kappa1 = 0 the model
// degenerates to the affine plane x0 = +1.
//
// Charts (a, b mean (x,y), (x',y') or (r,phi) per chart):
//
//   ParallelI :  x0 = ck1(x)  ck12(y),  x1 = sk1(x) ck12(y),  x2 = sk12(y)
//   ParallelII:  x0 = ck1(x') ck12(y'), x1 = sk1(x'),         x2 = ck1(x') sk12(y')
//   Polar     :  x0 = ck1(r),           x1 = sk1(r) ck2(phi), x2 = sk1(r) sk2(phi)
//
// where ck1 = ck(kappa1, .), ck12 = ck(kappa1*kappa2, .), ck2 = ck(kappa2, .).
#pragma once

#include <array>
#include <cmath>

#include "cklh/ktrig.hpp"
#include "cklh/types.hpp"

namespace cklh {

/// Residual tolerance used by chart conversion before engaging the
/// root-finding fallback, and by the on-quadric checks.
inline constexpr double kChartInversionTolerance = 1e-12;

/// Radicand/denominator guard for closed-form chart inversions: below this
/// the chart is treated as singular at the requested point.
inline constexpr double kChartSingularTolerance = 1e-13;

enum class Chart { ParallelI, ParallelII, Polar };

/// Point in ambient (Weierstrass) coordinates.
struct AmbientPoint {
    double x0 = 1.0;
    double x1 = 0.0;
    double x2 = 0.0;
};

/// Point in one of the geodesic charts; (a, b) read as (x, y), (x', y') or
/// (r, phi) depending on the chart tag.
struct GeoPoint {
    Chart chart = Chart::ParallelI;
    double a = 0.0;
    double b = 0.0;
};

/// Quadric constraint residual |x0^2 + k1 x1^2 + k1 k2 x2^2 - 1|.  For
/// kappa1 = 0 this degenerates to |x0^2 - 1| (affine model x0 = +1).
[[nodiscard]] inline double constraint_residual(const KappaSignature& k, const AmbientPoint& p)
{
    return std::fabs(p.x0 * p.x0 + k.kappa1 * p.x1 * p.x1 + k.k12() * p.x2 * p.x2 - 1.0);
}

/**
 * @brief Embed a chart point into the ambient quadric.
 *
 * Applies the chart's parametrization row (see file header); the image
 * satisfies the quadric constraint by the Pythagorean kernel identity.
 */
[[nodiscard]] inline AmbientPoint to_ambient(const KappaSignature& k, const GeoPoint& p)
{
    if (!std::isfinite(p.a) || !std::isfinite(p.b)) {
        throw DomainError("to_ambient: non-finite chart coordinates");
    }
    const double k1 = k.kappa1;
    const double k12 = k.k12();

    switch (p.chart) {
    case Chart::ParallelI: {
        const double c2 = ck(k12, p.b);
        return {ck(k1, p.a) * c2, sk(k1, p.a) * c2, sk(k12, p.b)};
    }
    case Chart::ParallelII: {
        const double c1 = ck(k1, p.a);
        return {c1 * ck(k12, p.b), sk(k1, p.a), c1 * sk(k12, p.b)};
    }
    case Chart::Polar:
    default: {
        const double sr = sk(k1, p.a);
        return {ck(k1, p.a), sr * ck(k.kappa2, p.b), sr * sk(k.kappa2, p.b)};
    }
    }
}

namespace detail {

/// Closed-form chart inversion.  Throws DegenerateChartError where the
/// chart is singular (polar origin, parallel chart beyond its strip).
[[nodiscard]] inline GeoPoint from_ambient(const KappaSignature& k, const AmbientPoint& q,
                                           Chart target)
{
    const double k1 = k.kappa1;
    const double k2 = k.kappa2;
    const double k12 = k.k12();

    switch (target) {
    case Chart::ParallelI: {
        const double rad = q.x0 * q.x0 + k1 * q.x1 * q.x1; // = ck12(y)^2 on the quadric
        if (rad < kChartSingularTolerance) {
            throw DegenerateChartError("ParallelI inversion: chart strip boundary (ck12(y) ~ 0)");
        }
        const double c2 = std::sqrt(rad);
        const double y = arc_from_cs(k12, c2, q.x2);
        const double x = arc_from_cs(k1, q.x0 / c2, q.x1 / c2);
        return {Chart::ParallelI, x, y};
    }
    case Chart::ParallelII: {
        const double rad = q.x0 * q.x0 + k12 * q.x2 * q.x2; // = ck1(x')^2 on the quadric
        if (rad < kChartSingularTolerance) {
            throw DegenerateChartError("ParallelII inversion: chart strip boundary (ck1(x') ~ 0)");
        }
        const double c1 = std::sqrt(rad);
        const double xp = arc_from_cs(k1, c1, q.x1);
        const double yp = arc_from_cs(k12, q.x0 / c1, q.x2 / c1);
        return {Chart::ParallelII, xp, yp};
    }
    case Chart::Polar:
    default: {
        const double rad = q.x1 * q.x1 + k2 * q.x2 * q.x2; // = sk1(r)^2 on the quadric
        if (rad < kChartSingularTolerance) {
            throw DegenerateChartError("Polar inversion: origin or light-cone locus (sk1(r) ~ 0)");
        }
        const double sr = std::sqrt(rad);
        const double r = arc_from_cs(k1, q.x0, sr);
        const double phi = arc_from_cs(k2, q.x1 / sr, q.x2 / sr);
        return {Chart::Polar, r, phi};
    }
    }
}

/// Max-abs ambient mismatch between the images of p and the target q.
[[nodiscard]] inline double ambient_mismatch(const KappaSignature& k, const GeoPoint& p,
                                             const AmbientPoint& q)
{
    const AmbientPoint im = to_ambient(k, p);
    return std::max({std::fabs(im.x0 - q.x0), std::fabs(im.x1 - q.x1), std::fabs(im.x2 - q.x2)});
}

/// Gauss–Newton polish of a chart inversion against a target ambient point,
/// used when the closed form is degraded near a chart boundary.
[[nodiscard]] inline GeoPoint polish_inversion(const KappaSignature& k, GeoPoint p,
                                               const AmbientPoint& q)
{
    constexpr int kMaxIter = 25;
    constexpr double h = 1e-7;

    for (int it = 0; it < kMaxIter; ++it) {
        const AmbientPoint f = to_ambient(k, p);
        const double r0 = f.x0 - q.x0, r1 = f.x1 - q.x1, r2 = f.x2 - q.x2;
        if (std::max({std::fabs(r0), std::fabs(r1), std::fabs(r2)}) < kChartInversionTolerance) {
            break;
        }
        const AmbientPoint fa = to_ambient(k, {p.chart, p.a + h, p.b});
        const AmbientPoint fb = to_ambient(k, {p.chart, p.a, p.b + h});
        const double ja0 = (fa.x0 - f.x0) / h, jb0 = (fb.x0 - f.x0) / h;
        const double ja1 = (fa.x1 - f.x1) / h, jb1 = (fb.x1 - f.x1) / h;
        const double ja2 = (fa.x2 - f.x2) / h, jb2 = (fb.x2 - f.x2) / h;

        // Normal equations of the 3x2 least-squares step.
        const double aa = ja0 * ja0 + ja1 * ja1 + ja2 * ja2;
        const double ab = ja0 * jb0 + ja1 * jb1 + ja2 * jb2;
        const double bb = jb0 * jb0 + jb1 * jb1 + jb2 * jb2;
        const double ra = ja0 * r0 + ja1 * r1 + ja2 * r2;
        const double rb = jb0 * r0 + jb1 * r1 + jb2 * r2;
        const double det = aa * bb - ab * ab;
        if (std::fabs(det) < 1e-300) {
            throw DegenerateChartError("chart inversion: singular Jacobian in polish step");
        }
        p.a -= (bb * ra - ab * rb) / det;
        p.b -= (aa * rb - ab * ra) / det;
    }
    return p;
}

} // namespace detail

/**
 * @brief Re-express a point in another geodesic chart.
 *
 * Route: embed via to_ambient, invert the target chart in closed form, and
 * polish by Gauss–Newton against the ambient image if the closed form left
 * residual above kChartInversionTolerance (chart boundaries).  Angular
 * coordinates on compact directions come out wrapped to the principal range.
 *
 * @throws DegenerateChartError where the target chart is singular.
 */
[[nodiscard]] inline GeoPoint convert_chart(const KappaSignature& k, const GeoPoint& p,
                                            Chart target)
{
    const AmbientPoint q = to_ambient(k, p);
    GeoPoint out = detail::from_ambient(k, q, target);
    if (detail::ambient_mismatch(k, out, q) > kChartInversionTolerance) {
        out = detail::polish_inversion(k, out, q);
    }
    return out;
}

/// 2x2 symmetric metric tensor at a point, row-major [[g00,g01],[g01,g11]].
using Metric2 = std::array<std::array<double, 2>, 2>;

/**
 * @brief Metric tensor of the main (time-like) CK metric in the chart of p:
 *
 *   ParallelI :  diag( ck12(y)^2,        kappa2 )
 *   ParallelII:  diag( 1,  kappa2 ck1(x')^2 )
 *   Polar     :  diag( 1,  kappa2 sk1(r)^2 )
 *
 * Degenerates to rank one when kappa2 = 0 (Newtonian spaces, ds^2 = dx^2).
 */
[[nodiscard]] inline Metric2 metric_at(const KappaSignature& k, const GeoPoint& p)
{
    switch (p.chart) {
    case Chart::ParallelI: {
        const double c = ck(k.k12(), p.b);
        return {{{c * c, 0.0}, {0.0, k.kappa2}}};
    }
    case Chart::ParallelII: {
        const double c = ck(k.kappa1, p.a);
        return {{{1.0, 0.0}, {0.0, k.kappa2 * c * c}}};
    }
    case Chart::Polar:
    default: {
        const double s = sk(k.kappa1, p.a);
        return {{{1.0, 0.0}, {0.0, k.kappa2 * s * s}}};
    }
    }
}

/// Generators of the one-parameter isometry subgroups.
enum class Generator { P1, P2, J12 };

/// Element of the CK isometry group in the ambient representation.
struct GroupElement {
    std::array<std::array<double, 3>, 3> m{};

    [[nodiscard]] AmbientPoint apply(const AmbientPoint& p) const noexcept
    {
        return {m[0][0] * p.x0 + m[0][1] * p.x1 + m[0][2] * p.x2,
                m[1][0] * p.x0 + m[1][1] * p.x1 + m[1][2] * p.x2,
                m[2][0] * p.x0 + m[2][1] * p.x1 + m[2][2] * p.x2};
    }

    /// Max-abs residual of g^T I_k g = I_k with I_k = diag(1, k1, k1 k2).
    [[nodiscard]] double isometry_residual(const KappaSignature& k) const noexcept
    {
        const std::array<double, 3> d = {1.0, k.kappa1, k.k12()};
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                double acc = 0.0;
                for (int l = 0; l < 3; ++l) {
                    acc += m[l][i] * d[l] * m[l][j];
                }
                const double expect = (i == j) ? d[i] : 0.0;
                worst = std::max(worst, std::fabs(acc - expect));
            }
        }
        return worst;
    }
};

/**
 * @brief Exact ambient matrices of the one-parameter subgroups:
 *
 *   exp(a P1)  = [[ck1(a), -k1 sk1(a), 0], [sk1(a), ck1(a), 0], [0, 0, 1]]
 *   exp(b P2)  = [[ck12(b), 0, -k1 k2 sk12(b)], [0, 1, 0], [sk12(b), 0, ck12(b)]]
 *   exp(g J12) = [[1, 0, 0], [0, ck2(g), -k2 sk2(g)], [0, sk2(g), ck2(g)]]
 */
[[nodiscard]] inline GroupElement one_param_subgroup(const KappaSignature& k, Generator gen,
                                                     double param)
{
    if (!std::isfinite(param)) {
        throw DomainError("one_param_subgroup: non-finite parameter");
    }
    GroupElement g;
    switch (gen) {
    case Generator::P1: {
        const double c = ck(k.kappa1, param), s = sk(k.kappa1, param);
        g.m = {{{c, -k.kappa1 * s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
        break;
    }
    case Generator::P2: {
        const double c = ck(k.k12(), param), s = sk(k.k12(), param);
        g.m = {{{c, 0.0, -k.k12() * s}, {0.0, 1.0, 0.0}, {s, 0.0, c}}};
        break;
    }
    case Generator::J12: {
        const double c = ck(k.kappa2, param), s = sk(k.kappa2, param);
        g.m = {{{1.0, 0.0, 0.0}, {0.0, c, -k.kappa2 * s}, {0.0, s, c}}};
        break;
    }
    }
    return g;
}

} // namespace cklh
