// cklh/ktrig.hpp — curvature-dependent trigonometric kernel.
//
// The functions below interpolate smoothly between circular (kappa > 0),
// parabolic (kappa = 0) and hyperbolic (kappa < 0) trigonometry:
//
//   ck(kappa, u) = cos(sqrt(kappa) u)   | 1      | cosh(sqrt(-kappa) u)
//   sk(kappa, u) = sin(sqrt(kappa) u)   | u      | sinh(sqrt(-kappa) u)
//                  / sqrt(kappa)        |        | / sqrt(-kappa)
//   tk(kappa, u) = sk / ck
//   vk(kappa, u) = (1 - ck) / kappa     | u^2/2  | (1 - ck) / kappa
//
// All functions are total over kappa in R (not just {-1, 0, +1}) so that
// contraction sweeps kappa -> 0 stay continuous: below a switch threshold
// in z = kappa u^2 the functions are evaluated by truncated series in z,
// which removes the 0/0 in vk and the cancellation in 1 - ck.
#pragma once

#include <cmath>

#include "cklh/types.hpp"

namespace cklh {

/// Series/closed-form switch on z = kappa * u^2.  Keep centralized so every
/// caller changes branch at the same place.
inline constexpr double kSeriesSwitchThreshold = 1e-8;

/// Pole tolerance for tk (and 1/ck^2 in the derivative block): evaluation
/// with |ck(u)| below this raises DomainError, since downstream
/// superposition formulas consume half-argument tangents near poles.
inline constexpr double kTanPoleTolerance = 1e-13;

namespace detail {

inline void require_finite(double kappa, double u)
{
    if (!std::isfinite(kappa) || !std::isfinite(u)) {
        throw DomainError("ktrig: non-finite argument");
    }
}

} // namespace detail

/**
 * @brief Curvature-dependent cosine.
 *
 * ck(kappa, u) = cos(sqrt(kappa) u)        for kappa > 0
 * ck(0, u)     = 1
 * ck(kappa, u) = cosh(sqrt(-kappa) u)      for kappa < 0
 *
 * Series for |kappa| u^2 < threshold (z = kappa u^2):
 *   ck = 1 - z/2! + z^2/4! - z^3/6!
 */
[[nodiscard]] inline double ck(double kappa, double u)
{
    detail::require_finite(kappa, u);
    const double z = kappa * u * u;

    if (std::fabs(z) < kSeriesSwitchThreshold) {
        const double z2 = z * z;
        return 1.0 - z / 2.0 + z2 / 24.0 - (z2 * z) / 720.0;
    }

    if (kappa > 0.0) {
        return std::cos(std::sqrt(kappa) * u);
    }
    return std::cosh(std::sqrt(-kappa) * u);
}

/**
 * @brief Curvature-dependent sine.
 *
 * sk(kappa, u) = sin(sqrt(kappa) u) / sqrt(kappa)      for kappa > 0
 * sk(0, u)     = u
 * sk(kappa, u) = sinh(sqrt(-kappa) u) / sqrt(-kappa)   for kappa < 0
 *
 * Series for |kappa| u^2 < threshold (z = kappa u^2):
 *   sk = u (1 - z/3! + z^2/5! - z^3/7!)
 */
[[nodiscard]] inline double sk(double kappa, double u)
{
    detail::require_finite(kappa, u);
    const double z = kappa * u * u;

    if (std::fabs(z) < kSeriesSwitchThreshold) {
        const double z2 = z * z;
        return u * (1.0 - z / 6.0 + z2 / 120.0 - (z2 * z) / 5040.0);
    }

    if (kappa > 0.0) {
        const double w = std::sqrt(kappa);
        return std::sin(w * u) / w;
    }
    const double w = std::sqrt(-kappa);
    return std::sinh(w * u) / w;
}

/**
 * @brief Curvature-dependent versed sine, vk(kappa, u) = (1 - ck) / kappa
 *        with vk(0, u) = u^2 / 2.
 *
 * Evaluated cancellation-free through the half-argument identity
 *   vk(u) = 2 sk(u/2)^2,
 * which is exact for every kappa; the series branch
 *   vk = u^2 (1/2! - z/4! + z^2/6! - z^3/8!),  z = kappa u^2,
 * covers |z| below the switch threshold.
 */
[[nodiscard]] inline double vk(double kappa, double u)
{
    detail::require_finite(kappa, u);
    const double z = kappa * u * u;

    if (std::fabs(z) < kSeriesSwitchThreshold) {
        const double z2 = z * z;
        return u * u * (0.5 - z / 24.0 + z2 / 720.0 - (z2 * z) / 40320.0);
    }

    const double sh = sk(kappa, 0.5 * u);
    return 2.0 * sh * sh;
}

/**
 * @brief Curvature-dependent tangent, tk = sk / ck.
 *
 * @throws DomainError at poles (|ck(kappa, u)| < kTanPoleTolerance).
 */
[[nodiscard]] inline double tk(double kappa, double u)
{
    const double c = ck(kappa, u);
    if (std::fabs(c) < kTanPoleTolerance) {
        throw DomainError("tk: tangent pole (ck(u) ~ 0)");
    }
    return sk(kappa, u) / c;
}

/// Exact derivatives of the four kernel functions at (kappa, u).
struct KTrigDerivatives {
    double dC; ///< d/du ck = -kappa * sk
    double dS; ///< d/du sk = ck
    double dT; ///< d/du tk = 1 / ck^2
    double dV; ///< d/du vk = sk
};

/**
 * @brief Closed-form derivative block:
 *   dC/du = -kappa sk,  dS/du = ck,  dT/du = 1/ck^2,  dV/du = sk.
 *
 * @throws DomainError when ck(u) is at a pole of the tangent (dT undefined).
 */
[[nodiscard]] inline KTrigDerivatives ck_derivatives(double kappa, double u)
{
    const double c = ck(kappa, u);
    const double s = sk(kappa, u);
    if (std::fabs(c) < kTanPoleTolerance) {
        throw DomainError("ck_derivatives: tangent pole (ck(u) ~ 0)");
    }
    return {-kappa * s, c, 1.0 / (c * c), s};
}

/**
 * @brief Recover u from a (ck, sk) pair on the connected component of the
 *        identity:
 *
 *   kappa > 0 : u = atan2(sqrt(kappa) s, c) / sqrt(kappa)   in (-pi/sqrt(kappa), pi/sqrt(kappa)]
 *   kappa = 0 : u = s
 *   kappa < 0 : u = asinh(sqrt(-kappa) s) / sqrt(-kappa)    (c >= 1 on the component)
 */
[[nodiscard]] inline double arc_from_cs(double kappa, double c, double s)
{
    if (!std::isfinite(kappa) || !std::isfinite(c) || !std::isfinite(s)) {
        throw DomainError("arc_from_cs: non-finite argument");
    }
    if (kappa > 0.0) {
        const double w = std::sqrt(kappa);
        double u = std::atan2(w * s, c) / w;
        if (u <= -M_PI / w) {
            u += 2.0 * M_PI / w; // report on (-pi/w, pi/w]
        }
        return u;
    }
    if (kappa < 0.0) {
        const double w = std::sqrt(-kappa);
        return std::asinh(w * s) / w;
    }
    return s;
}

/**
 * @brief Inverse tangent: u with tk(kappa, u) = t, principal branch.
 *
 *   kappa > 0 : u = atan(sqrt(kappa) t) / sqrt(kappa)
 *   kappa = 0 : u = t
 *   kappa < 0 : u = atanh(sqrt(-kappa) t) / sqrt(-kappa),  |t| < 1/sqrt(-kappa)
 */
[[nodiscard]] inline double inv_tk(double kappa, double t)
{
    if (!std::isfinite(kappa) || !std::isfinite(t)) {
        throw DomainError("inv_tk: non-finite argument");
    }
    if (kappa > 0.0) {
        const double w = std::sqrt(kappa);
        return std::atan(w * t) / w;
    }
    if (kappa < 0.0) {
        const double w = std::sqrt(-kappa);
        const double wt = w * t;
        if (std::fabs(wt) >= 1.0) {
            throw DomainError("inv_tk: |t| outside hyperbolic tangent range");
        }
        return std::atanh(wt) / w;
    }
    return t;
}

/**
 * @brief Wrap a coordinate on a compact direction to (-pi/sqrt(kappa), pi/sqrt(kappa)].
 *        Identity for kappa <= 0.  Intended at report time only; internal
 *        integration keeps the unwrapped lift.
 */
[[nodiscard]] inline double wrap_angle(double kappa, double u)
{
    if (kappa <= 0.0) {
        return u;
    }
    const double period = 2.0 * M_PI / std::sqrt(kappa);
    double w = std::remainder(u, period);
    if (w <= -0.5 * period) {
        w += period;
    }
    return w;
}

/// Result of a full identity scan at one (kappa, u, v) triple.
struct IdentityScanResult {
    double max_residual = 0.0; ///< largest |lhs - rhs| over evaluated identities
    int evaluated = 0;         ///< identities included at this point
    int skipped = 0;           ///< identities skipped by a domain guard
    bool half_tan_skipped = false; ///< vk/sk half-angle tangent form needed sk(u) != 0
};

namespace detail {

/// Tangent magnitudes above this are excluded from the identity scan:
/// T-identities amplify roundoff by |T|^2, so poles are approached only in
/// dedicated pole tests, never in residual scans.
inline constexpr double kScanTanGuard = 10.0;

/// Generic denominator guard for the rational/addition forms.
inline constexpr double kScanDenomGuard = 1e-6;

inline void fold(IdentityScanResult& r, double lhs, double rhs)
{
    const double res = std::fabs(lhs - rhs);
    if (res > r.max_residual) {
        r.max_residual = res;
    }
    ++r.evaluated;
}

/// tk without throwing: returns false when the pole guard trips.
inline bool guarded_tan(double kappa, double u, double& t)
{
    const double c = ck(kappa, u);
    if (std::fabs(c) < kTanPoleTolerance) {
        return false;
    }
    t = sk(kappa, u) / c;
    return std::fabs(t) <= kScanTanGuard;
}

} // namespace detail

/**
 * @brief Evaluate every fundamental identity of the kernel at (kappa, u, v)
 *        and return the largest absolute residual.
 *
 * Covered blocks:
 *   - Pythagorean        ck^2 + kappa sk^2 = 1
 *   - double argument    ck(2u), sk(2u), vk(2u) (two forms), tk(2u)
 *   - half argument      ck(u/2)^2, sk(u/2)^2, tk(u/2) (two forms)
 *   - rational in t = tk(u/2): ck, sk, vk, tk of u
 *   - addition           ck(u±v), sk(u±v), vk(u±v), tk(u±v)
 *   - sum-to-product     six product identities for ck, sk, vk
 *
 * Tangent-valued identities are skipped (and counted) when a pole guard or
 * denominator guard trips; the second half-angle tangent form vk/sk needs
 * sk(u) != 0 and sets half_tan_skipped instead of failing.
 */
[[nodiscard]] inline IdentityScanResult identity_residuals(double kappa, double u, double v)
{
    detail::require_finite(kappa, u);
    detail::require_finite(kappa, v);

    IdentityScanResult r;

    const double cu = ck(kappa, u), su = sk(kappa, u), vu = vk(kappa, u);
    const double cv = ck(kappa, v), sv = sk(kappa, v), vv = vk(kappa, v);

    // --- Pythagorean ------------------------------------------------------
    detail::fold(r, cu * cu + kappa * su * su, 1.0);
    detail::fold(r, cv * cv + kappa * sv * sv, 1.0);

    // --- double argument --------------------------------------------------
    detail::fold(r, ck(kappa, 2.0 * u), cu * cu - kappa * su * su);
    detail::fold(r, sk(kappa, 2.0 * u), 2.0 * su * cu);
    const double v2u = vk(kappa, 2.0 * u);
    detail::fold(r, v2u, 2.0 * su * su);
    detail::fold(r, v2u, 4.0 * vu - 2.0 * kappa * vu * vu);

    {
        double tu = 0.0, t2u = 0.0;
        if (detail::guarded_tan(kappa, u, tu) && detail::guarded_tan(kappa, 2.0 * u, t2u)
            && std::fabs(1.0 - kappa * tu * tu) > detail::kScanDenomGuard) {
            detail::fold(r, t2u, 2.0 * tu / (1.0 - kappa * tu * tu));
        } else {
            ++r.skipped;
        }
    }

    // --- half argument ----------------------------------------------------
    const double ch = ck(kappa, 0.5 * u), sh = sk(kappa, 0.5 * u);
    detail::fold(r, ch * ch, 0.5 * (1.0 + cu));
    detail::fold(r, ch * ch, 1.0 - 0.5 * kappa * vu);
    detail::fold(r, sh * sh, 0.5 * vu);
    {
        double th = 0.0;
        const bool th_ok = detail::guarded_tan(kappa, 0.5 * u, th);
        if (th_ok && std::fabs(1.0 + cu) > detail::kScanDenomGuard) {
            detail::fold(r, th, su / (1.0 + cu));
        } else {
            ++r.skipped;
        }
        if (th_ok && std::fabs(su) > kTanPoleTolerance) {
            detail::fold(r, th, vu / su);
        } else {
            r.half_tan_skipped = true;
            ++r.skipped;
        }

        // --- rational forms in t = tk(u/2) --------------------------------
        if (th_ok) {
            const double t2 = th * th;
            const double den_plus = 1.0 + kappa * t2;
            const double den_minus = 1.0 - kappa * t2;
            if (std::fabs(den_plus) > detail::kScanDenomGuard) {
                detail::fold(r, cu, (1.0 - kappa * t2) / den_plus);
                detail::fold(r, su, 2.0 * th / den_plus);
                detail::fold(r, vu, 2.0 * t2 / den_plus);
            } else {
                r.skipped += 3;
            }
            double tu = 0.0;
            if (detail::guarded_tan(kappa, u, tu)
                && std::fabs(den_minus) > detail::kScanDenomGuard) {
                detail::fold(r, tu, 2.0 * th / den_minus);
            } else {
                ++r.skipped;
            }
        } else {
            r.skipped += 4;
        }
    }

    // --- addition ---------------------------------------------------------
    const double cp = ck(kappa, u + v), cm = ck(kappa, u - v);
    const double sp = sk(kappa, u + v), sm = sk(kappa, u - v);
    const double vp = vk(kappa, u + v), vm = vk(kappa, u - v);

    detail::fold(r, cp, cu * cv - kappa * su * sv);
    detail::fold(r, cm, cu * cv + kappa * su * sv);
    detail::fold(r, sp, su * cv + cu * sv);
    detail::fold(r, sm, su * cv - cu * sv);
    detail::fold(r, vp, vu + vv - kappa * vu * vv + su * sv);
    detail::fold(r, vm, vu + vv - kappa * vu * vv - su * sv);
    {
        double tu = 0.0, tv = 0.0, tp = 0.0, tm = 0.0;
        const bool base_ok = detail::guarded_tan(kappa, u, tu) && detail::guarded_tan(kappa, v, tv);
        if (base_ok && detail::guarded_tan(kappa, u + v, tp)
            && std::fabs(1.0 - kappa * tu * tv) > detail::kScanDenomGuard) {
            detail::fold(r, tp, (tu + tv) / (1.0 - kappa * tu * tv));
        } else {
            ++r.skipped;
        }
        if (base_ok && detail::guarded_tan(kappa, u - v, tm)
            && std::fabs(1.0 + kappa * tu * tv) > detail::kScanDenomGuard) {
            detail::fold(r, tm, (tu - tv) / (1.0 + kappa * tu * tv));
        } else {
            ++r.skipped;
        }
    }

    // --- sum-to-product ---------------------------------------------------
    detail::fold(r, cp + cm, 2.0 * cu * cv);
    detail::fold(r, cp - cm, -2.0 * kappa * su * sv);
    detail::fold(r, sp + sm, 2.0 * su * cv);
    detail::fold(r, sp - sm, 2.0 * cu * sv);
    detail::fold(r, vp + vm, 2.0 * (vu + vv - kappa * vu * vv));
    detail::fold(r, vp - vm, 2.0 * su * sv);

    return r;
}

} // namespace cklh
