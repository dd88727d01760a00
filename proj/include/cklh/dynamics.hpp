// cklh/dynamics.hpp — time integration for the non-autonomous systems:
// embedded adaptive Runge–Kutta 5(4) (Dormand–Prince pair) with continuous
// (dense) output, domain-exit event location, blow-up detection, an optional
// forced fixed-step mode, time-dependent coefficient presets, and invariant
// drift monitoring on trajectory bundles.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "cklh/types.hpp"

namespace cklh {

using StateVector = std::vector<double>;

/// Right-hand side evaluator s' = f(t, s) writing into ds (pre-sized).
using SystemRHS = std::function<void(double, const StateVector&, StateVector&)>;

/// Domain predicate: false => the trajectory left the admissible region.
using DomainPredicate = std::function<bool(double, const StateVector&)>;

// ---------------------------------------------------------------------------
// Coefficient presets
// ---------------------------------------------------------------------------

/**
 * @brief Time-dependent scalar coefficient with analytic derivative where
 *        the preset is smooth: constant, polynomial, sinusoid
 *        (offset + amp * sin(omega t + phase)), or piecewise-linear table.
 */
class Coefficient {
  public:
    /// Default-constructed coefficients are the zero constant.
    Coefficient() = default;

    [[nodiscard]] static Coefficient constant(double c)
    {
        Coefficient f;
        f.kind_ = Kind::Constant;
        f.p_ = {c};
        return f;
    }

    /// c0 + c1 t + c2 t^2 + ...
    [[nodiscard]] static Coefficient polynomial(std::vector<double> coeffs)
    {
        Coefficient f;
        f.kind_ = Kind::Polynomial;
        f.p_ = std::move(coeffs);
        if (f.p_.empty()) {
            f.p_.push_back(0.0);
        }
        return f;
    }

    /// offset + amp * sin(omega t + phase)
    [[nodiscard]] static Coefficient sinusoid(double amp, double omega, double phase,
                                              double offset = 0.0)
    {
        Coefficient f;
        f.kind_ = Kind::Sinusoid;
        f.p_ = {amp, omega, phase, offset};
        return f;
    }

    /// Linear interpolation through (ts, vals); constant extrapolation.
    [[nodiscard]] static Coefficient piecewise_linear(std::vector<double> ts,
                                                      std::vector<double> vals)
    {
        if (ts.size() != vals.size() || ts.size() < 2) {
            throw DomainError("piecewise_linear: need matching knot/value lists (>= 2)");
        }
        Coefficient f;
        f.kind_ = Kind::PiecewiseLinear;
        f.knots_ = std::move(ts);
        f.p_ = std::move(vals);
        return f;
    }

    [[nodiscard]] double operator()(double t) const
    {
        switch (kind_) {
        case Kind::Constant:
            return p_[0];
        case Kind::Polynomial: {
            double acc = 0.0;
            for (std::size_t i = p_.size(); i-- > 0;) {
                acc = acc * t + p_[i];
            }
            return acc;
        }
        case Kind::Sinusoid:
            return p_[3] + p_[0] * std::sin(p_[1] * t + p_[2]);
        case Kind::PiecewiseLinear:
        default: {
            if (t <= knots_.front()) {
                return p_.front();
            }
            if (t >= knots_.back()) {
                return p_.back();
            }
            const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
            const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
            const double w = (t - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
            return (1.0 - w) * p_[i - 1] + w * p_[i];
        }
        }
    }

    /// Analytic time derivative (one-sided slope inside piecewise segments).
    [[nodiscard]] double derivative(double t) const
    {
        switch (kind_) {
        case Kind::Constant:
            return 0.0;
        case Kind::Polynomial: {
            double acc = 0.0;
            for (std::size_t i = p_.size(); i-- > 1;) {
                acc = acc * t + static_cast<double>(i) * p_[i];
            }
            return acc;
        }
        case Kind::Sinusoid:
            return p_[0] * p_[1] * std::cos(p_[1] * t + p_[2]);
        case Kind::PiecewiseLinear:
        default: {
            if (t <= knots_.front() || t >= knots_.back()) {
                return 0.0;
            }
            const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
            const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
            return (p_[i] - p_[i - 1]) / (knots_[i] - knots_[i - 1]);
        }
        }
    }

    /// True for presets with continuous derivatives (everything but tables).
    [[nodiscard]] bool is_smooth() const noexcept { return kind_ != Kind::PiecewiseLinear; }

  private:
    enum class Kind { Constant, Polynomial, Sinusoid, PiecewiseLinear };
    Kind kind_ = Kind::Constant;
    std::vector<double> p_ = {0.0};
    std::vector<double> knots_;
};

/// The (b1, b2, b3) coefficient triple; system-specific names Omega(t),
/// eta(t), a(t), b(t), c(t) map onto these slots.
struct CoefficientSet {
    Coefficient b1;
    Coefficient b2;
    Coefficient b3;
};

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

enum class TrajectoryStatus {
    Complete,   ///< reached t1
    DomainExit, ///< domain predicate failed; truncated at located exit time
    BlowUp      ///< step-size underflow or non-finite state; truncated
};

/// Dense-output coefficients of one accepted step (quartic interpolant).
struct DenseSegment {
    double t0 = 0.0;
    double h = 0.0;
    StateVector r1, r2, r3, r4, r5;
};

/// Integration result: accepted-step samples plus a continuous interpolant.
struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::vector<DenseSegment> segments; // empty in fixed-step mode
    TrajectoryStatus status = TrajectoryStatus::Complete;
    int steps = 0;
    int rejected = 0;
    double max_error_estimate = 0.0;

    [[nodiscard]] double t_begin() const { return times.front(); }
    [[nodiscard]] double t_end() const { return times.back(); }

    /// Evaluate the continuous extension at t (within the covered range).
    [[nodiscard]] StateVector sample(double t) const
    {
        if (segments.empty()) {
            throw DomainError("Trajectory::sample: no dense segments (fixed-step run?)");
        }
        if (t < t_begin() - 1e-12 || t > t_end() + 1e-12) {
            throw DomainError("Trajectory::sample: t outside covered range");
        }
        // Binary search for the owning segment.
        std::size_t lo = 0, hi = segments.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (segments[mid].t0 + segments[mid].h < t) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        const DenseSegment& s = segments[lo];
        const double theta = std::clamp((t - s.t0) / s.h, 0.0, 1.0);
        const std::size_t n = s.r1.size();
        StateVector out(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = s.r1[i]
                   + theta
                         * (s.r2[i]
                            + (1.0 - theta)
                                  * (s.r3[i]
                                     + theta * (s.r4[i] + (1.0 - theta) * s.r5[i])));
        }
        return out;
    }

    /// Uniform n-point sampling of the covered range (n >= 2).
    [[nodiscard]] std::vector<std::pair<double, StateVector>> sample_grid(int n) const
    {
        std::vector<std::pair<double, StateVector>> out;
        out.reserve(static_cast<std::size_t>(n));
        const double a = t_begin(), b = t_end();
        for (int i = 0; i < n; ++i) {
            const double t = a + (b - a) * static_cast<double>(i) / (n - 1);
            out.emplace_back(t, sample(t));
        }
        return out;
    }
};

struct IntegrateOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_initial = 0.0;  ///< 0 = automatic
    double h_max = 0.0;      ///< 0 = full window
    long max_steps = 2000000;
    double fixed_step = 0.0; ///< > 0 forces fixed-step order-5 mode (no dense output)
    DomainPredicate domain_ok; ///< optional admissibility predicate
};

namespace detail {

// Dormand–Prince RK5(4) tableau.
inline constexpr double kC[7] = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};
inline constexpr double kA21 = 1.0 / 5.0;
inline constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
inline constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
inline constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                        kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
inline constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                        kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
inline constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                        kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
// Error coefficients (5th-order minus embedded 4th-order weights).
inline constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                        kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;
// Dense-output weights.
inline constexpr double kD1 = -12715105075.0 / 11282082432.0;
inline constexpr double kD3 = 87487479700.0 / 32700410799.0;
inline constexpr double kD4 = -10690763975.0 / 1880347072.0;
inline constexpr double kD5 = 701980252875.0 / 199316789632.0;
inline constexpr double kD6 = -1453857185.0 / 822651844.0;
inline constexpr double kD7 = 69997945.0 / 29380423.0;

inline bool all_finite(const StateVector& v)
{
    for (double x : v) {
        if (!std::isfinite(x)) {
            return false;
        }
    }
    return true;
}

} // namespace detail

/**
 * @brief Integrate s' = rhs(t, s) from (t0, s0) to t1.
 *
 * Adaptive Dormand–Prince 5(4) with PI-free standard step control
 * (factor = min(5, max(0.2, 0.9 err^(-1/5)))), FSAL reuse, and a quartic
 * dense interpolant stored per accepted step.  If options.domain_ok is
 * given it is checked after every accepted step; on failure the exit time
 * is located by bisection on the dense interpolant to 1e-10 and the
 * trajectory is truncated with status DomainExit.  Step-size underflow or
 * non-finite values truncate with status BlowUp at the last valid state.
 * options.fixed_step > 0 forces plain fixed-step fifth-order sweeps
 * (order-verification mode; no dense output).
 */
[[nodiscard]] inline Trajectory integrate(const SystemRHS& rhs, const StateVector& s0, double t0,
                                          double t1, const IntegrateOptions& options = {})
{
    if (!(t1 > t0)) {
        throw DomainError("integrate: need t1 > t0");
    }
    if (!detail::all_finite(s0)) {
        throw DomainError("integrate: non-finite initial state");
    }

    const std::size_t n = s0.size();
    Trajectory traj;
    traj.times.push_back(t0);
    traj.states.push_back(s0);

    StateVector y = s0, ynew(n), ystage(n);
    StateVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    double t = t0;

    rhs(t, y, k1);
    if (!detail::all_finite(k1)) {
        traj.status = TrajectoryStatus::BlowUp;
        return traj;
    }

    // ---- forced fixed-step mode (order verification) ----------------------
    if (options.fixed_step > 0.0) {
        const double h_fix = options.fixed_step;
        while (t < t1 - 1e-14 * (t1 - t0)) {
            const double h = std::min(h_fix, t1 - t);
            for (std::size_t i = 0; i < n; ++i) {
                ystage[i] = y[i] + h * detail::kA21 * k1[i];
            }
            rhs(t + detail::kC[1] * h, ystage, k2);
            for (std::size_t i = 0; i < n; ++i) {
                ystage[i] = y[i] + h * (detail::kA31 * k1[i] + detail::kA32 * k2[i]);
            }
            rhs(t + detail::kC[2] * h, ystage, k3);
            for (std::size_t i = 0; i < n; ++i) {
                ystage[i] = y[i]
                          + h * (detail::kA41 * k1[i] + detail::kA42 * k2[i]
                                 + detail::kA43 * k3[i]);
            }
            rhs(t + detail::kC[3] * h, ystage, k4);
            for (std::size_t i = 0; i < n; ++i) {
                ystage[i] = y[i]
                          + h * (detail::kA51 * k1[i] + detail::kA52 * k2[i]
                                 + detail::kA53 * k3[i] + detail::kA54 * k4[i]);
            }
            rhs(t + detail::kC[4] * h, ystage, k5);
            for (std::size_t i = 0; i < n; ++i) {
                ystage[i] = y[i]
                          + h * (detail::kA61 * k1[i] + detail::kA62 * k2[i]
                                 + detail::kA63 * k3[i] + detail::kA64 * k4[i]
                                 + detail::kA65 * k5[i]);
            }
            rhs(t + detail::kC[5] * h, ystage, k6);
            for (std::size_t i = 0; i < n; ++i) {
                ynew[i] = y[i]
                        + h * (detail::kB1 * k1[i] + detail::kB3 * k3[i] + detail::kB4 * k4[i]
                               + detail::kB5 * k5[i] + detail::kB6 * k6[i]);
            }
            t += h;
            y = ynew;
            rhs(t, y, k1);
            ++traj.steps;
            traj.times.push_back(t);
            traj.states.push_back(y);
            if (!detail::all_finite(y)) {
                traj.status = TrajectoryStatus::BlowUp;
                return traj;
            }
        }
        return traj;
    }

    // ---- adaptive mode -----------------------------------------------------
    const double h_max = (options.h_max > 0.0) ? options.h_max : (t1 - t0);
    const double h_floor = 1e-14 * std::max(1.0, std::fabs(t1 - t0));

    double h = options.h_initial;
    if (h <= 0.0) {
        // Standard starting-step heuristic from the error-per-step model.
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = options.atol + options.rtol * std::fabs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / static_cast<double>(n));
        d1 = std::sqrt(d1 / static_cast<double>(n));
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * (d0 / d1);
        h0 = std::min(h0, h_max);
        StateVector y1(n), f1(n);
        for (std::size_t i = 0; i < n; ++i) {
            y1[i] = y[i] + h0 * k1[i];
        }
        rhs(t + h0, y1, f1);
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = options.atol + options.rtol * std::fabs(y[i]);
            const double df = (f1[i] - k1[i]) / sc;
            d2 += df * df;
        }
        d2 = std::sqrt(d2 / static_cast<double>(n)) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                        : std::pow(0.01 / dm, 1.0 / 5.0);
        h = std::min({100.0 * h0, h1, h_max});
    }

    long step_count = 0;
    while (t < t1 - 1e-14 * (t1 - t0)) {
        if (++step_count > options.max_steps) {
            traj.status = TrajectoryStatus::BlowUp;
            return traj;
        }
        h = std::min(h, t1 - t);
        if (h < h_floor) {
            traj.status = TrajectoryStatus::BlowUp;
            return traj;
        }

        for (std::size_t i = 0; i < n; ++i) {
            ystage[i] = y[i] + h * detail::kA21 * k1[i];
        }
        rhs(t + detail::kC[1] * h, ystage, k2);
        for (std::size_t i = 0; i < n; ++i) {
            ystage[i] = y[i] + h * (detail::kA31 * k1[i] + detail::kA32 * k2[i]);
        }
        rhs(t + detail::kC[2] * h, ystage, k3);
        for (std::size_t i = 0; i < n; ++i) {
            ystage[i] = y[i]
                      + h * (detail::kA41 * k1[i] + detail::kA42 * k2[i] + detail::kA43 * k3[i]);
        }
        rhs(t + detail::kC[3] * h, ystage, k4);
        for (std::size_t i = 0; i < n; ++i) {
            ystage[i] = y[i]
                      + h * (detail::kA51 * k1[i] + detail::kA52 * k2[i] + detail::kA53 * k3[i]
                             + detail::kA54 * k4[i]);
        }
        rhs(t + detail::kC[4] * h, ystage, k5);
        for (std::size_t i = 0; i < n; ++i) {
            ystage[i] = y[i]
                      + h * (detail::kA61 * k1[i] + detail::kA62 * k2[i] + detail::kA63 * k3[i]
                             + detail::kA64 * k4[i] + detail::kA65 * k5[i]);
        }
        rhs(t + detail::kC[5] * h, ystage, k6);
        for (std::size_t i = 0; i < n; ++i) {
            ynew[i] = y[i]
                    + h * (detail::kB1 * k1[i] + detail::kB3 * k3[i] + detail::kB4 * k4[i]
                           + detail::kB5 * k5[i] + detail::kB6 * k6[i]);
        }
        rhs(t + h, ynew, k7); // FSAL stage

        if (!detail::all_finite(ynew) || !detail::all_finite(k7)) {
            h *= 0.5; // treat as a hard rejection
            ++traj.rejected;
            continue;
        }

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc =
                options.atol + options.rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            const double e = h
                           * (detail::kE1 * k1[i] + detail::kE3 * k3[i] + detail::kE4 * k4[i]
                              + detail::kE5 * k5[i] + detail::kE6 * k6[i] + detail::kE7 * k7[i]);
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / static_cast<double>(n));

        const double factor = std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-30),
                                                                          -0.2)));
        if (err > 1.0) {
            h *= factor;
            ++traj.rejected;
            continue;
        }

        // Accepted: build the dense segment.
        DenseSegment seg;
        seg.t0 = t;
        seg.h = h;
        seg.r1 = y;
        seg.r2.resize(n);
        seg.r3.resize(n);
        seg.r4.resize(n);
        seg.r5.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ydiff = ynew[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            seg.r2[i] = ydiff;
            seg.r3[i] = bspl;
            seg.r4[i] = ydiff - h * k7[i] - bspl;
            seg.r5[i] = h
                      * (detail::kD1 * k1[i] + detail::kD3 * k3[i] + detail::kD4 * k4[i]
                         + detail::kD5 * k5[i] + detail::kD6 * k6[i] + detail::kD7 * k7[i]);
        }
        traj.segments.push_back(std::move(seg));
        traj.max_error_estimate = std::max(traj.max_error_estimate, err);

        t += h;
        y = ynew;
        k1 = k7; // FSAL
        ++traj.steps;
        traj.times.push_back(t);
        traj.states.push_back(y);

        if (options.domain_ok && !options.domain_ok(t, y)) {
            // Locate the exit time by bisection on the dense interpolant.
            double lo = traj.segments.back().t0, hi = t;
            while (hi - lo > 1e-10) {
                const double mid = 0.5 * (lo + hi);
                if (options.domain_ok(mid, traj.sample(mid))) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            traj.times.back() = lo;
            traj.states.back() = traj.sample(lo);
            traj.segments.back().h = std::max(lo - traj.segments.back().t0, 1e-300);
            traj.status = TrajectoryStatus::DomainExit;
            return traj;
        }

        h = std::min(h * factor, h_max);
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Invariant monitoring
// ---------------------------------------------------------------------------

/// Invariant evaluated on synchronized states of a 1–3 trajectory bundle.
using BundleInvariant = std::function<double(const std::vector<StateVector>&)>;

struct InvariantReport {
    std::string name;
    std::vector<double> times;
    std::vector<double> values; ///< NaN at excluded samples
    double drift = 0.0;         ///< max |F(t) - F(t_first_valid)|
    int excluded = 0;           ///< samples where the invariant domain failed
    double tolerance = 0.0;
    bool pass = false;
};

/**
 * @brief Evaluate an invariant on a bundle of trajectories over a common
 *        uniform grid (resampled through each trajectory's dense output)
 *        and report the drift max|F(t) - F(t0)|.
 *
 * Samples where the invariant raises DomainError are excluded and counted.
 */
[[nodiscard]] inline InvariantReport monitor(const std::string& name,
                                             const std::vector<const Trajectory*>& bundle,
                                             const BundleInvariant& invariant, double tolerance,
                                             int samples = 200)
{
    if (bundle.empty()) {
        throw DomainError("monitor: empty bundle");
    }
    double a = bundle[0]->t_begin(), b = bundle[0]->t_end();
    for (const Trajectory* tr : bundle) {
        a = std::max(a, tr->t_begin());
        b = std::min(b, tr->t_end());
    }
    if (!(b > a)) {
        throw DomainError("monitor: trajectories do not overlap in time");
    }

    InvariantReport rep;
    rep.name = name;
    rep.tolerance = tolerance;

    bool have_ref = false;
    double ref = 0.0;
    std::vector<StateVector> slice(bundle.size());
    for (int i = 0; i < samples; ++i) {
        const double t = a + (b - a) * static_cast<double>(i) / (samples - 1);
        rep.times.push_back(t);
        try {
            for (std::size_t j = 0; j < bundle.size(); ++j) {
                slice[j] = bundle[j]->sample(t);
            }
            const double v = invariant(slice);
            if (!std::isfinite(v)) {
                throw DomainError("monitor: non-finite invariant value");
            }
            rep.values.push_back(v);
            if (!have_ref) {
                ref = v;
                have_ref = true;
            }
            rep.drift = std::max(rep.drift, std::fabs(v - ref));
        } catch (const DomainError&) {
            rep.values.push_back(std::nan(""));
            ++rep.excluded;
        }
    }
    rep.pass = have_ref && rep.drift <= tolerance;
    return rep;
}

} // namespace cklh
