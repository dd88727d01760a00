// Tests for the time-dependent coefficients and the adaptive integrator:
// preset evaluation and derivatives, closed-form flow values frozen from a
// high-precision reference, dense output, status handling (domain exit and
// finite-time blow-up), fixed-step mode, and the bundle invariant monitor.
#include <catch2/catch_amalgamated.hpp>

#include "cklh/cklh.hpp"
#include "oracle_values.hpp"

#include <cmath>

using namespace cklh;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

IntegrateOptions tight()
{
    IntegrateOptions io;
    io.rtol = 1e-12;
    io.atol = 1e-14;
    return io;
}

/// One-component flow of the coefficient combination on a single curvature
/// label: x' = b1 + b2 sk(x) + 2 b3 vk(x).
SystemRHS scalar_flow(double kappa, CoefficientSet coeffs)
{
    return [kappa, coeffs](double t, const StateVector& s, StateVector& ds) {
        ds[0] = coeffs.b1(t) + coeffs.b2(t) * sk(kappa, s[0]) + 2.0 * coeffs.b3(t) * vk(kappa, s[0]);
    };
}

} // namespace

TEST_CASE("coefficient presets evaluate and differentiate", "[dynamics]")
{
    const Coefficient zero;
    CHECK(zero(3.7) == 0.0);
    CHECK(zero.derivative(3.7) == 0.0);
    CHECK(zero.is_smooth());

    const Coefficient c = Coefficient::constant(2.5);
    CHECK(c(0.0) == 2.5);
    CHECK(c(11.0) == 2.5);
    CHECK(c.derivative(4.0) == 0.0);

    const Coefficient p = Coefficient::polynomial({1.0, 2.0, 3.0});
    CHECK_THAT(p(0.5), WithinRel(1.0 + 2.0 * 0.5 + 3.0 * 0.25, 1e-15));
    CHECK_THAT(p.derivative(0.5), WithinRel(2.0 + 6.0 * 0.5, 1e-15));

    const Coefficient s = Coefficient::sinusoid(0.3, 2.0, 0.4, 0.1);
    CHECK_THAT(s(1.2), WithinRel(0.1 + 0.3 * std::sin(2.0 * 1.2 + 0.4), 1e-15));
    CHECK_THAT(s.derivative(1.2), WithinRel(0.6 * std::cos(2.0 * 1.2 + 0.4), 1e-15));
    CHECK(s.is_smooth());

    const Coefficient pl = Coefficient::piecewise_linear({0.0, 1.0, 2.0}, {0.0, 2.0, 1.0});
    CHECK_THAT(pl(0.5), WithinRel(1.0, 1e-15));
    CHECK_THAT(pl(1.5), WithinRel(1.5, 1e-15));
    CHECK(pl(-3.0) == 0.0); // constant extrapolation
    CHECK(pl(9.0) == 1.0);
    CHECK_THAT(pl.derivative(0.5), WithinRel(2.0, 1e-15));
    CHECK_FALSE(pl.is_smooth());

    CHECK_THROWS_AS(Coefficient::piecewise_linear({0.0}, {1.0}), DomainError);
    CHECK_THROWS_AS(Coefficient::piecewise_linear({0.0, 1.0}, {1.0}), DomainError);
}

TEST_CASE("integrator reproduces the exponential to tolerance", "[dynamics]")
{
    const SystemRHS rhs = [](double, const StateVector& s, StateVector& ds) { ds[0] = s[0]; };
    const Trajectory tr = integrate(rhs, {1.0}, 0.0, 1.0, tight());
    REQUIRE(tr.status == TrajectoryStatus::Complete);
    CHECK_THAT(tr.states.back()[0], WithinAbs(std::exp(1.0), 1e-10));
    CHECK(tr.steps > 0);
    CHECK(tr.max_error_estimate <= 1.0);

    // Dense output holds the same accuracy in the interior.
    CHECK_THAT(tr.sample(0.5)[0], WithinAbs(std::exp(0.5), 1e-9));
    const auto grid = tr.sample_grid(11);
    CHECK(grid.size() == 11);
    CHECK_THAT(grid[3].first, WithinAbs(0.3, 1e-12));
    CHECK_THAT(grid[3].second[0], WithinAbs(std::exp(0.3), 1e-9));
}

TEST_CASE("closed-form coefficient flows match the frozen references", "[dynamics]")
{
    // b = (0, 1, 0): the half-angle tangent grows exponentially.
    {
        const CoefficientSet b{Coefficient::constant(0.0), Coefficient::constant(1.0),
                               Coefficient::constant(0.0)};
        const Trajectory tr = integrate(scalar_flow(1.0, b), {1.0}, 0.0, 0.7, tight());
        CHECK_THAT(tr.states.back()[0], WithinAbs(oracle::flow_sin_x0_1_t07, 1e-10));
        const Trajectory trh = integrate(scalar_flow(-1.0, b), {1.0}, 0.0, 0.7, tight());
        CHECK_THAT(trh.states.back()[0], WithinAbs(oracle::flow_b2_km1_x0_1_t07, 1e-10));
    }
    // b = (0, 0, 1): the reciprocal half-angle tangent decreases linearly.
    {
        const CoefficientSet b{Coefficient::constant(0.0), Coefficient::constant(0.0),
                               Coefficient::constant(1.0)};
        const Trajectory tr = integrate(scalar_flow(1.0, b), {1.0}, 0.0, 0.2, tight());
        CHECK_THAT(tr.states.back()[0], WithinAbs(oracle::flow_b3_k1_x0_1_t02, 1e-10));
    }
}

TEST_CASE("integration is deterministic", "[dynamics]")
{
    const SystemRHS rhs = [](double t, const StateVector& s, StateVector& ds) {
        ds[0] = std::sin(t) - 0.3 * s[0];
    };
    const Trajectory a = integrate(rhs, {0.4}, 0.0, 5.0, tight());
    const Trajectory b = integrate(rhs, {0.4}, 0.0, 5.0, tight());
    REQUIRE(a.times.size() == b.times.size());
    CHECK(a.states.back()[0] == b.states.back()[0]);
    CHECK(a.steps == b.steps);
    CHECK(a.rejected == b.rejected);
}

TEST_CASE("domain exit truncates the trajectory at the crossing", "[dynamics]")
{
    IntegrateOptions io = tight();
    io.domain_ok = [](double, const StateVector& s) { return s[0] < 2.0; };
    const SystemRHS rhs = [](double, const StateVector& s, StateVector& ds) { ds[0] = s[0]; };
    const Trajectory tr = integrate(rhs, {1.0}, 0.0, 3.0, io);
    CHECK(tr.status == TrajectoryStatus::DomainExit);
    CHECK_THAT(tr.t_end(), WithinAbs(std::log(2.0), 1e-6));
    CHECK(tr.states.back()[0] <= 2.0 + 1e-9);
}

TEST_CASE("finite-time blow-up is flagged, not thrown", "[dynamics]")
{
    // x' = 1 + x^2 escapes to infinity before t = pi/2.
    IntegrateOptions io;
    io.rtol = 1e-10;
    io.atol = 1e-12;
    const SystemRHS rhs = [](double, const StateVector& s, StateVector& ds) {
        ds[0] = 1.0 + s[0] * s[0];
    };
    const Trajectory tr = integrate(rhs, {0.0}, 0.0, 3.0, io);
    CHECK(tr.status == TrajectoryStatus::BlowUp);
    CHECK(tr.t_end() < M_PI / 2.0 + 1e-6);
    CHECK(tr.t_end() > 1.0); // made real progress before giving up
    CHECK(tr.times.size() == tr.states.size());
}

TEST_CASE("fixed-step mode has no dense output", "[dynamics]")
{
    IntegrateOptions io;
    io.fixed_step = 0.01;
    const SystemRHS rhs = [](double, const StateVector& s, StateVector& ds) { ds[0] = s[0]; };
    const Trajectory tr = integrate(rhs, {1.0}, 0.0, 1.0, io);
    CHECK(tr.status == TrajectoryStatus::Complete);
    CHECK(tr.segments.empty());
    CHECK_THAT(tr.states.back()[0], WithinAbs(std::exp(1.0), 1e-9));
    CHECK_THROWS_AS(tr.sample(0.5), DomainError);
}

TEST_CASE("invariant monitor reports drift over a bundle", "[dynamics]")
{
    // Two phase-shifted harmonic oscillators; the difference of their
    // energies is exactly conserved.
    const SystemRHS rhs = [](double, const StateVector& s, StateVector& ds) {
        ds[0] = s[1];
        ds[1] = -s[0];
    };
    const Trajectory a = integrate(rhs, {1.0, 0.0}, 0.0, 5.0, tight());
    const Trajectory b = integrate(rhs, {0.3, 0.7}, 0.0, 5.0, tight());
    const BundleInvariant energy_gap = [](const std::vector<StateVector>& ss) {
        const auto e = [](const StateVector& s) { return 0.5 * (s[0] * s[0] + s[1] * s[1]); };
        return e(ss[0]) - e(ss[1]);
    };
    const InvariantReport rep =
        monitor("energy-gap", {&a, &b}, energy_gap, 1e-9, 100);
    CHECK(rep.pass);
    CHECK(rep.drift <= 1e-9);
    CHECK(rep.times.size() == 100);
    CHECK(rep.values.size() == 100);
    CHECK(rep.excluded == 0);

    // An unrealistic tolerance turns the same run into a failure report.
    const InvariantReport tight_rep = monitor("energy-gap", {&a, &b}, energy_gap, 0.0, 50);
    CHECK_FALSE(tight_rep.pass);
}

TEST_CASE("monitor rejects empty and disjoint bundles", "[dynamics]")
{
    const SystemRHS rhs = [](double, const StateVector& s, StateVector& ds) { ds[0] = s[0]; };
    const Trajectory a = integrate(rhs, {1.0}, 0.0, 1.0, tight());
    const BundleInvariant first = [](const std::vector<StateVector>& ss) { return ss[0][0]; };
    CHECK_THROWS_AS(monitor("empty", {}, first, 1e-9), DomainError);
    const Trajectory b = integrate(rhs, {1.0}, 2.0, 3.0, tight());
    CHECK_THROWS_AS(monitor("disjoint", {&a, &b}, first, 1e-9), DomainError);
}
