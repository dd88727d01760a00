// cklh/verify.hpp — numerical property-check suites shared by the CLI
// `verify` command and the acceptance binary.
//
// Every check draws its random points from an mt19937_64 seeded by the pair
// (seed, check-id), so reports are deterministic for a given seed and
// independent of scheduling.  Checks run on a small worker pool capped by
// the CKLH_THREADS environment variable; results keep a stable order.
#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cklh/applications.hpp"
#include "cklh/class_i4.hpp"
#include "cklh/class_p2.hpp"
#include "cklh/conformal.hpp"
#include "cklh/dynamics.hpp"
#include "cklh/geometry.hpp"
#include "cklh/ktrig.hpp"
#include "cklh/symplectic.hpp"
#include "cklh/tables.hpp"
#include "cklh/types.hpp"

namespace cklh {

/// Outcome of one named property check.
struct CheckResult {
    std::string suite;
    std::string name;
    int samples = 0;       ///< number of evaluation points folded in
    double residual = 0.0; ///< worst observed residual (suite-specific meaning)
    double threshold = 0.0;
    bool pass = false;
    std::string note;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    int samples = 100;
};

namespace detail {

[[nodiscard]] inline std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Per-check RNG derived from (seed, check-id).
[[nodiscard]] inline std::mt19937_64 check_rng(std::uint64_t seed, const std::string& check_id)
{
    const std::uint64_t h = fnv1a(check_id);
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h & 0xffffffffu),
                      static_cast<std::uint32_t>(h >> 32)};
    return std::mt19937_64(seq);
}

[[nodiscard]] inline int worker_cap()
{
    const unsigned hw = std::thread::hardware_concurrency();
    int cap = hw > 0 ? static_cast<int>(hw) : 1;
    if (const char* env = std::getenv("CKLH_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) {
            cap = static_cast<int>(std::min<long>(cap, v));
        }
    }
    return cap;
}

/// Run independent check jobs on a bounded pool; results keep job order.
[[nodiscard]] inline std::vector<CheckResult>
run_jobs(const std::vector<std::function<CheckResult()>>& jobs)
{
    std::vector<CheckResult> out(jobs.size());
    const int n = static_cast<int>(std::min<std::size_t>(
        static_cast<std::size_t>(worker_cap()), jobs.size()));
    if (n <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            out[i] = jobs[i]();
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) {
                return;
            }
            out[i] = jobs[i]();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        pool.emplace_back(work);
    }
    for (auto& th : pool) {
        th.join();
    }
    return out;
}

[[nodiscard]] inline std::string fmt(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

[[nodiscard]] inline std::string fmt(const KappaSignature& k)
{
    return "(" + fmt(k.kappa1) + "," + fmt(k.kappa2) + ")";
}

[[nodiscard]] inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

[[nodiscard]] inline double vnorm(const TangentVector& v) { return std::hypot(v.vx, v.vy); }

/// Relative deviation of two vectors, floored at absolute scale 1.
[[nodiscard]] inline double rel_dev(const TangentVector& a, const TangentVector& b)
{
    const TangentVector d{a.vx - b.vx, a.vy - b.vy};
    return vnorm(d) / std::max({1.0, vnorm(a), vnorm(b)});
}

/// Ordinary least-squares slope of log10(r) against log10(eps).
[[nodiscard]] inline double loglog_slope(const std::vector<double>& eps,
                                         const std::vector<double>& r)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double x = std::log10(eps[i]);
        const double y = std::log10(std::max(r[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// The nine normalized curvature signatures, row-major over k1 then k2.
[[nodiscard]] inline std::vector<KappaSignature> nine_signatures()
{
    std::vector<KappaSignature> out;
    for (double k1 : {1.0, 0.0, -1.0}) {
        for (double k2 : {1.0, 0.0, -1.0}) {
            out.push_back({k1, k2});
        }
    }
    return out;
}

[[nodiscard]] inline std::vector<double> i4_kappa_presets()
{
    return {-1.0, -0.5, 0.0, 0.5, 1.0};
}

/// Reference application bundles with safe sampling boxes.
struct AppCase {
    ApplicationBundle bundle;
    double u_lo, u_hi, v_lo, v_hi;
};

[[nodiscard]] inline std::vector<AppCase> app_cases()
{
    std::vector<AppCase> out;
    out.push_back({sc_riccati_bundle(0.8), -1.0, 1.0, 0.2, 0.9});
    out.push_back({diffusion_bundle(-0.6), -0.8, 0.8, 0.3, 1.0});
    out.push_back(
        {ks_neg_bundle(0.9, ModelParams::kummer_schwarz(ModelClass::NegC, 1.2)), 0.4, 1.3, -1.0,
         1.0});
    out.push_back(
        {ermakov_neg_bundle(-0.7, ModelParams::ermakov(ModelClass::NegC, 1.1)), 0.7, 1.5, -1.0,
         1.0});
    out.push_back({ks_pos_bundle({0.8, -0.5}, ModelParams::kummer_schwarz(ModelClass::PosC, 1.3)),
                   0.4, 1.2, -1.0, 1.0});
    out.push_back({ermakov_pos_bundle({-0.4, 0.9}, ModelParams::ermakov(ModelClass::PosC, 1.05)),
                   0.8, 1.6, -1.0, 1.0});
    return out;
}

/// Mean-zero sinusoidal coefficient presets keeping the i4 flow bounded on
/// [0, 5] for every |kappa| <= 1.
[[nodiscard]] inline CoefficientSet i4_run_coeffs()
{
    return {Coefficient::sinusoid(0.2, 2.1, 0.0, 0.0), Coefficient::sinusoid(0.15, 1.7, 0.3, 0.0),
            Coefficient::sinusoid(0.12, 2.3, 1.0, 0.0)};
}

/// Mean-zero presets keeping the p2 flow clear of the C(y) poles on [0, 5].
[[nodiscard]] inline CoefficientSet p2_run_coeffs()
{
    return {Coefficient::sinusoid(0.3, 1.1, 0.0, 0.0), Coefficient::sinusoid(0.08, 1.3, 0.4, 0.0),
            Coefficient::sinusoid(0.07, 0.9, 1.1, 0.0)};
}

} // namespace detail

// ---------------------------------------------------------------------------
// identities
// ---------------------------------------------------------------------------

/// kappa-trigonometric identity scan on a 10x10x7 (u, v, kappa) grid
/// including kappa = 0 and +-1e-9.  Threshold 1e-12.
[[nodiscard]] inline std::vector<CheckResult> run_identities_suite(const VerifyOptions&)
{
    const std::vector<double> kappas = {1.0, 0.5, 1e-9, 0.0, -1e-9, -0.5, -1.0};
    std::vector<std::function<CheckResult()>> jobs;
    for (double kappa : kappas) {
        jobs.emplace_back([kappa] {
            CheckResult r;
            r.suite = "identities";
            r.name = "ktrig-identities kappa=" + detail::fmt(kappa);
            r.threshold = 1e-12;
            for (int i = 0; i < 10; ++i) {
                for (int j = 0; j < 10; ++j) {
                    const double u = -2.2 + 0.5 * i;
                    const double v = -2.2 + 0.5 * j;
                    const IdentityScanResult scan = identity_residuals(kappa, u, v);
                    r.residual = std::max(r.residual, scan.max_residual);
                    r.samples += scan.evaluated;
                }
            }
            r.pass = r.residual <= r.threshold;
            return r;
        });
    }
    return detail::run_jobs(jobs);
}

// ---------------------------------------------------------------------------
// brackets
// ---------------------------------------------------------------------------

namespace detail {

/// Max relative deviation between the numeric bracket of two planar fields
/// and an expected combination, over random points from a box.
template <typename FieldAt, typename ExpectedAt>
[[nodiscard]] inline CheckResult bracket_check(const std::string& suite, const std::string& name,
                                               const VerifyOptions& opt, double x_lo, double x_hi,
                                               double y_lo, double y_hi, int n_pairs,
                                               const FieldAt& field, const ExpectedAt& expected)
{
    CheckResult r;
    r.suite = suite;
    r.name = name;
    r.threshold = 1e-6;
    auto rng = check_rng(opt.seed, name);
    for (int s = 0; s < opt.samples; ++s) {
        const double x = uniform(rng, x_lo, x_hi);
        const double y = uniform(rng, y_lo, y_hi);
        for (int p = 0; p < n_pairs; ++p) {
            const PlanarField A = field(p, 0);
            const PlanarField B = field(p, 1);
            const TangentVector num = lie_bracket_numeric(A, B, x, y);
            const TangentVector exp = expected(p, x, y);
            r.residual = std::max(r.residual, rel_dev(num, exp));
            ++r.samples;
        }
    }
    r.pass = r.residual <= r.threshold;
    return r;
}

/// Closure constants of an sl(2)-type field triple:
///   [X1,X2] = X1 - (c12_3) X3,  [X1,X3] = (c13_2) X2,  [X2,X3] = X3.
struct TripleClosure {
    double c12_3; ///< coefficient of X3 in [X1,X2] (with sign)
    double c13_2; ///< coefficient of X2 in [X1,X3]
};

template <typename Triple>
[[nodiscard]] inline CheckResult closure_check(const std::string& suite, const std::string& name,
                                               const VerifyOptions& opt, double x_lo, double x_hi,
                                               double y_lo, double y_hi, const Triple& triple,
                                               const TripleClosure& c)
{
    CheckResult r;
    r.suite = suite;
    r.name = name;
    r.threshold = 1e-6;
    auto rng = check_rng(opt.seed, name);
    const auto field = [&triple](int i) {
        return PlanarField([&triple, i](double x, double y) { return triple(x, y)[static_cast<std::size_t>(i)]; });
    };
    for (int s = 0; s < opt.samples; ++s) {
        const double x = uniform(rng, x_lo, x_hi);
        const double y = uniform(rng, y_lo, y_hi);
        const auto X = triple(x, y);
        const struct {
            int a, b;
            TangentVector expect;
        } cases[3] = {
            {0, 1, {X[0].vx + c.c12_3 * X[2].vx, X[0].vy + c.c12_3 * X[2].vy}},
            {0, 2, {c.c13_2 * X[1].vx, c.c13_2 * X[1].vy}},
            {1, 2, {X[2].vx, X[2].vy}},
        };
        for (const auto& cs : cases) {
            const TangentVector num = lie_bracket_numeric(field(cs.a), field(cs.b), x, y);
            r.residual = std::max(r.residual, rel_dev(num, cs.expect));
            ++r.samples;
        }
    }
    r.pass = r.residual <= r.threshold;
    return r;
}

} // namespace detail

/// Commutator table of the conformal algebra (2D over the nine signatures,
/// plus the 1D variants) and closure of the i4/p2 field triples, compared
/// against central-difference Lie brackets.  Relative threshold 1e-6.
[[nodiscard]] inline std::vector<CheckResult> run_brackets_suite(const VerifyOptions& opt)
{
    std::vector<std::function<CheckResult()>> jobs;

    for (const KappaSignature& k : detail::nine_signatures()) {
        jobs.emplace_back([k, opt] {
            const std::string name = "cck-brackets k=" + detail::fmt(k);
            std::vector<std::pair<ConformalGenerator, ConformalGenerator>> pairs;
            for (int a = 0; a < 6; ++a) {
                for (int b = a + 1; b < 6; ++b) {
                    pairs.emplace_back(static_cast<ConformalGenerator>(a),
                                       static_cast<ConformalGenerator>(b));
                }
            }
            return detail::bracket_check(
                "brackets", name, opt, -0.7, 0.7, -0.6, 0.6, static_cast<int>(pairs.size()),
                [&k, &pairs](int p, int side) {
                    const ConformalGenerator g =
                        side == 0 ? pairs[static_cast<std::size_t>(p)].first
                                  : pairs[static_cast<std::size_t>(p)].second;
                    return PlanarField(
                        [k, g](double x, double y) { return conf_field(k, g, x, y); });
                },
                [&k, &pairs](int p, double x, double y) {
                    const auto c = cck_bracket_expansion(k, pairs[static_cast<std::size_t>(p)].first,
                                                         pairs[static_cast<std::size_t>(p)].second);
                    TangentVector out{0.0, 0.0};
                    for (int g = 0; g < 6; ++g) {
                        if (c[static_cast<std::size_t>(g)] != 0.0) {
                            out = out
                                + c[static_cast<std::size_t>(g)]
                                      * conf_field(k, static_cast<ConformalGenerator>(g), x, y);
                        }
                    }
                    return out;
                });
        });
    }

    for (double kappa : {1.0, 0.0, -1.0}) {
        jobs.emplace_back([kappa, opt] {
            CheckResult r;
            r.suite = "brackets";
            r.name = "cck1-brackets kappa=" + detail::fmt(kappa);
            r.threshold = 1e-6;
            auto rng = detail::check_rng(opt.seed, r.name);
            const std::pair<ConformalGenerator1D, ConformalGenerator1D> pairs[3] = {
                {ConformalGenerator1D::P1, ConformalGenerator1D::G1},
                {ConformalGenerator1D::P1, ConformalGenerator1D::D},
                {ConformalGenerator1D::G1, ConformalGenerator1D::D},
            };
            for (int s = 0; s < opt.samples; ++s) {
                const double x = detail::uniform(rng, -0.7, 0.7);
                for (const auto& [a, b] : pairs) {
                    const auto A = [kappa, a = a](double u) { return conf_field_1d(kappa, a, u); };
                    const auto B = [kappa, b = b](double u) { return conf_field_1d(kappa, b, u); };
                    const double num = lie_bracket_numeric_1d(A, B, x);
                    const auto c = cck1_bracket_expansion(kappa, a, b);
                    double exp = 0.0;
                    for (int g = 0; g < 3; ++g) {
                        exp += c[static_cast<std::size_t>(g)]
                               * conf_field_1d(kappa, static_cast<ConformalGenerator1D>(g), x);
                    }
                    r.residual = std::max(r.residual, std::fabs(num - exp)
                                                          / std::max({1.0, std::fabs(num),
                                                                      std::fabs(exp)}));
                    ++r.samples;
                }
            }
            r.pass = r.residual <= r.threshold;
            return r;
        });
    }

    for (double kappa : detail::i4_kappa_presets()) {
        jobs.emplace_back([kappa, opt] {
            return detail::closure_check(
                "brackets", "i4-closure kappa=" + detail::fmt(kappa), opt, -1.2, 1.2, -1.2, 1.2,
                [kappa](double x, double y) { return i4_fields(kappa, {x, y}); },
                detail::TripleClosure{-0.5 * kappa, 2.0});
        });
    }

    for (const KappaSignature& k : detail::nine_signatures()) {
        jobs.emplace_back([k, opt] {
            return detail::closure_check(
                "brackets", "p2-closure-timelike k=" + detail::fmt(k), opt, -1.1, 1.1, -0.8, 0.8,
                [k](double x, double y) { return p2_fields(k, {x, y}, P2Variant::TimeLike); },
                detail::TripleClosure{-0.5 * k.kappa1, 2.0});
        });
        jobs.emplace_back([k, opt] {
            return detail::closure_check(
                "brackets", "p2-closure-spacelike k=" + detail::fmt(k), opt, -1.1, 1.1, -0.8, 0.8,
                [k](double x, double y) { return p2_fields(k, {x, y}, P2Variant::SpaceLike); },
                detail::TripleClosure{-0.5 * k.kappa1, 2.0 * k.kappa2});
        });
    }

    return detail::run_jobs(jobs);
}

// ---------------------------------------------------------------------------
// poisson (sl2 bracket pattern + Casimir constancy)
// ---------------------------------------------------------------------------

namespace detail {

/// Random point in a box subject to a predicate (deterministic rejection).
template <typename Ok>
[[nodiscard]] inline std::array<double, 2> sample_point(std::mt19937_64& rng, double x_lo,
                                                        double x_hi, double y_lo, double y_hi,
                                                        const Ok& ok)
{
    for (int tries = 0; tries < 1000; ++tries) {
        const double x = uniform(rng, x_lo, x_hi);
        const double y = uniform(rng, y_lo, y_hi);
        if (ok(x, y)) {
            return {x, y};
        }
    }
    throw DomainError("verify: sampling box rejected 1000 consecutive points");
}

/// Poisson-bracket pattern residual of an sl(2) Hamiltonian triple:
///   {h1,h2} = -h1 + (kappa/2) h3,  {h1,h3} = -2 h2,  {h2,h3} = -h3.
[[nodiscard]] inline double sl2_pattern_residual(const SymplecticWeight& w,
                                                 const std::array<ScalarField, 3>& h, double kappa,
                                                 double x, double y)
{
    const double h1 = h[0].value(x, y), h2 = h[1].value(x, y), h3 = h[2].value(x, y);
    const double p12 = poisson(w, h[0], h[1], x, y);
    const double p13 = poisson(w, h[0], h[2], x, y);
    const double p23 = poisson(w, h[1], h[2], x, y);
    return std::max({std::fabs(p12 - (-h1 + 0.5 * kappa * h3)), std::fabs(p13 + 2.0 * h2),
                     std::fabs(p23 + h3)});
}

template <typename Pt>
[[nodiscard]] inline CheckResult poisson_check(const std::string& name, const VerifyOptions& opt,
                                               const SymplecticWeight& w,
                                               const std::array<ScalarField, 3>& h, double kappa,
                                               const Pt& draw)
{
    CheckResult r;
    r.suite = "poisson";
    r.name = name;
    r.threshold = 1e-8;
    auto rng = check_rng(opt.seed, name);
    for (int s = 0; s < opt.samples; ++s) {
        const auto p = draw(rng);
        r.residual = std::max(r.residual, sl2_pattern_residual(w, h, kappa, p[0], p[1]));
        ++r.samples;
    }
    r.pass = r.residual <= r.threshold;
    return r;
}

template <typename Pt>
[[nodiscard]] inline CheckResult casimir_check(const std::string& name, const VerifyOptions& opt,
                                               const std::array<ScalarField, 3>& h, double kappa,
                                               double expected, const Pt& draw)
{
    CheckResult r;
    r.suite = "poisson";
    r.name = name;
    r.threshold = 1e-10;
    auto rng = check_rng(opt.seed, name);
    for (int s = 0; s < opt.samples; ++s) {
        const auto p = draw(rng);
        const double c = casimir(kappa, h[0].value(p[0], p[1]), h[1].value(p[0], p[1]),
                                 h[2].value(p[0], p[1]));
        r.residual = std::max(r.residual, std::fabs(c - expected));
        ++r.samples;
    }
    r.pass = r.residual <= r.threshold;
    return r;
}

/// Sampler for i4 points away from the degenerate diagonal.
[[nodiscard]] inline auto i4_draw()
{
    return [](std::mt19937_64& rng) {
        return sample_point(rng, -1.3, 1.3, -1.3, 1.3,
                            [](double x, double y) { return std::fabs(x - y) > 0.15; });
    };
}

/// Sampler for p2 points with y bounded away from 0 and the C(y) poles.
[[nodiscard]] inline auto p2_draw()
{
    return [](std::mt19937_64& rng) {
        return sample_point(rng, -1.1, 1.1, 0.25, 0.85, [](double, double) { return true; });
    };
}

[[nodiscard]] inline auto box_draw(double u_lo, double u_hi, double v_lo, double v_hi)
{
    return [u_lo, u_hi, v_lo, v_hi](std::mt19937_64& rng) {
        return sample_point(rng, u_lo, u_hi, v_lo, v_hi, [](double, double) { return true; });
    };
}

} // namespace detail

/// sl(2) Poisson pattern and Casimir constancy for the i4 and p2 triples and
/// all six application bundles.  Pattern threshold 1e-8; Casimir 1e-10.
[[nodiscard]] inline std::vector<CheckResult> run_poisson_suite(const VerifyOptions& opt)
{
    std::vector<std::function<CheckResult()>> jobs;

    for (double kappa : detail::i4_kappa_presets()) {
        jobs.emplace_back([kappa, opt] {
            return detail::poisson_check("i4-poisson kappa=" + detail::fmt(kappa), opt,
                                         i4_symplectic(kappa), i4_hamiltonians(kappa), kappa,
                                         detail::i4_draw());
        });
    }
    for (const KappaSignature& k : detail::nine_signatures()) {
        jobs.emplace_back([k, opt] {
            return detail::poisson_check("p2-poisson k=" + detail::fmt(k), opt, p2_symplectic(k),
                                         p2_hamiltonians(k), k.kappa1, detail::p2_draw());
        });
    }
    for (const detail::AppCase& ac : detail::app_cases()) {
        jobs.emplace_back([ac, opt] {
            return detail::poisson_check("app-poisson " + ac.bundle.name, opt, ac.bundle.weight,
                                         ac.bundle.hamiltonians, ac.bundle.casimir_kappa,
                                         detail::box_draw(ac.u_lo, ac.u_hi, ac.v_lo, ac.v_hi));
        });
    }

    for (double kappa : detail::i4_kappa_presets()) {
        jobs.emplace_back([kappa, opt] {
            return detail::casimir_check("i4-casimir kappa=" + detail::fmt(kappa), opt,
                                         i4_hamiltonians(kappa), kappa, -0.25, detail::i4_draw());
        });
    }
    for (const KappaSignature& k : detail::nine_signatures()) {
        jobs.emplace_back([k, opt] {
            return detail::casimir_check("p2-casimir k=" + detail::fmt(k), opt, p2_hamiltonians(k),
                                         k.kappa1, k.kappa2, detail::p2_draw());
        });
    }
    for (const detail::AppCase& ac : detail::app_cases()) {
        jobs.emplace_back([ac, opt] {
            return detail::casimir_check("app-casimir " + ac.bundle.name, opt,
                                         ac.bundle.hamiltonians, ac.bundle.casimir_kappa,
                                         ac.bundle.casimir_value,
                                         detail::box_draw(ac.u_lo, ac.u_hi, ac.v_lo, ac.v_hi));
        });
    }

    return detail::run_jobs(jobs);
}

// ---------------------------------------------------------------------------
// hamiltonian (i_X omega = dh pairing)
// ---------------------------------------------------------------------------

namespace detail {

template <typename Triple, typename Pt>
[[nodiscard]] inline CheckResult pairing_check(const std::string& name, const VerifyOptions& opt,
                                               const SymplecticWeight& w,
                                               const std::array<ScalarField, 3>& h,
                                               const Triple& fields, const Pt& draw)
{
    CheckResult r;
    r.suite = "hamiltonian";
    r.name = name;
    r.threshold = 1e-8;
    auto rng = check_rng(opt.seed, name);
    for (int s = 0; s < opt.samples; ++s) {
        const auto p = draw(rng);
        const auto X = fields(p[0], p[1]);
        for (int i = 0; i < 3; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            r.residual = std::max(
                r.residual,
                pairing_residual(w, h[idx],
                                 [&X, idx](double, double) { return X[idx]; }, p[0], p[1]));
            ++r.samples;
        }
    }
    r.pass = r.residual <= r.threshold;
    return r;
}

} // namespace detail

/// Pairing i_X omega = dh for every shipped (field, Hamiltonian, weight)
/// triple: i4, p2 (time-like), and the six applications.  Threshold 1e-8.
[[nodiscard]] inline std::vector<CheckResult> run_hamiltonian_suite(const VerifyOptions& opt)
{
    std::vector<std::function<CheckResult()>> jobs;
    for (double kappa : detail::i4_kappa_presets()) {
        jobs.emplace_back([kappa, opt] {
            return detail::pairing_check(
                "i4-pairing kappa=" + detail::fmt(kappa), opt, i4_symplectic(kappa),
                i4_hamiltonians(kappa),
                [kappa](double x, double y) { return i4_fields(kappa, {x, y}); },
                detail::i4_draw());
        });
    }
    for (const KappaSignature& k : detail::nine_signatures()) {
        jobs.emplace_back([k, opt] {
            return detail::pairing_check(
                "p2-pairing k=" + detail::fmt(k), opt, p2_symplectic(k), p2_hamiltonians(k),
                [k](double x, double y) { return p2_fields(k, {x, y}, P2Variant::TimeLike); },
                detail::p2_draw());
        });
    }
    for (const detail::AppCase& ac : detail::app_cases()) {
        jobs.emplace_back([ac, opt] {
            return detail::pairing_check("app-pairing " + ac.bundle.name, opt, ac.bundle.weight,
                                         ac.bundle.hamiltonians, ac.bundle.fields,
                                         detail::box_draw(ac.u_lo, ac.u_hi, ac.v_lo, ac.v_hi));
        });
    }
    return detail::run_jobs(jobs);
}

// ---------------------------------------------------------------------------
// killing (conformal Killing equation)
// ---------------------------------------------------------------------------

/// L_X g = mu_X g for the six generators; full check on the six kappa2 != 0
/// spaces, restricted (g_xx only) on the kappa2 = 0 row.  Threshold 1e-7.
[[nodiscard]] inline std::vector<CheckResult> run_killing_suite(const VerifyOptions& opt)
{
    std::vector<std::function<CheckResult()>> jobs;
    for (const KappaSignature& k : detail::nine_signatures()) {
        jobs.emplace_back([k, opt] {
            const bool restricted = k.kappa2 == 0.0;
            CheckResult r;
            r.suite = "killing";
            r.name = (restricted ? std::string("killing-restricted k=") : std::string("killing k="))
                     + detail::fmt(k);
            r.threshold = 1e-7;
            if (restricted) {
                r.note = "degenerate metric: g_xx component only";
            }
            auto rng = detail::check_rng(opt.seed, r.name);
            for (int s = 0; s < opt.samples; ++s) {
                const double x = detail::uniform(rng, -0.6, 0.6);
                const double y = detail::uniform(rng, -0.5, 0.5);
                for (int g = 0; g < 6; ++g) {
                    const auto gen = static_cast<ConformalGenerator>(g);
                    const KillingResult kr = killing_residual(
                        k, [k, gen](double px, double py) { return conf_field(k, gen, px, py); },
                        [k, gen](double px, double py) { return conf_factor(k, gen, px, py); }, x,
                        y);
                    r.residual = std::max(r.residual, kr.residual);
                    ++r.samples;
                }
            }
            r.pass = r.residual <= r.threshold;
            return r;
        });
    }
    return detail::run_jobs(jobs);
}

// ---------------------------------------------------------------------------
// pushforward (application fields vs parent-class fields)
// ---------------------------------------------------------------------------

/// d(Phi) X_app = X_class o Phi for the six coordinate changes, at random
/// points of each application domain.  Threshold 1e-7.
[[nodiscard]] inline std::vector<CheckResult> run_pushforward_suite(const VerifyOptions& opt)
{
    std::vector<std::function<CheckResult()>> jobs;
    for (const detail::AppCase& ac : detail::app_cases()) {
        jobs.emplace_back([ac, opt] {
            CheckResult r;
            r.suite = "pushforward";
            r.name = "pushforward " + ac.bundle.name;
            r.threshold = 1e-7;
            auto rng = detail::check_rng(opt.seed, r.name);
            for (int s = 0; s < opt.samples; ++s) {
                const double u = detail::uniform(rng, ac.u_lo, ac.u_hi);
                const double v = detail::uniform(rng, ac.v_lo, ac.v_hi);
                r.residual = std::max(r.residual,
                                      pushforward_residual(ac.bundle.change, ac.bundle.fields,
                                                           ac.bundle.class_fields, u, v));
                ++r.samples;
            }
            r.pass = r.residual <= r.threshold;
            return r;
        });
    }
    return detail::run_jobs(jobs);
}

// ---------------------------------------------------------------------------
// contraction (flat-limit chain)
// ---------------------------------------------------------------------------

/// One flat-limit sweep case: eps -> worst componentwise |curved - flat| over
/// fields, Hamiltonians, symplectic weights, and the pairwise invariant.
struct ContractionCase {
    std::string name;
    std::function<double(double)> deviation;
};

/// Curvature values swept by the contraction checks (and the CLI sweep).
[[nodiscard]] inline std::vector<double> contraction_epsilons()
{
    std::vector<double> eps;
    for (int j = 0; j <= 6; ++j) {
        eps.push_back(std::pow(10.0, -2 - j));
    }
    return eps;
}

/// The shared sweep roster: the one-label class against its flat limit, and
/// the two-label class along three one-parameter curvature paths.
[[nodiscard]] inline std::vector<ContractionCase> contraction_cases()
{
    std::vector<ContractionCase> cases;

    cases.push_back({"contraction i4", [](double eps) {
                         const std::array<I4State, 3> pts = {
                             {{0.8, 0.3}, {-0.4, 0.9}, {1.2, -0.7}}};
                         const I4State f1{0.9, 0.2}, f2{1.3, -0.5};
                         double d = 0.0;
                         for (const I4State& p : pts) {
                             const auto Xc = i4_fields(eps, p), X0 = i4_fields(0.0, p);
                             for (int i = 0; i < 3; ++i) {
                                 const auto idx = static_cast<std::size_t>(i);
                                 d = std::max({d, std::fabs(Xc[idx].vx - X0[idx].vx),
                                               std::fabs(Xc[idx].vy - X0[idx].vy)});
                             }
                             const auto hc = i4_hamiltonians(eps, p), h0 = i4_hamiltonians(0.0, p);
                             for (int i = 0; i < 3; ++i) {
                                 const auto idx = static_cast<std::size_t>(i);
                                 d = std::max(d, std::fabs(hc[idx] - h0[idx]));
                             }
                             d = std::max(d, std::fabs(i4_symplectic(eps).at(p.x, p.y)
                                                       - i4_symplectic(0.0).at(p.x, p.y)));
                         }
                         d = std::max(d, std::fabs(i4_F2(eps, f1, f2) - i4_F2(0.0, f1, f2)));
                         return d;
                     }});

    struct P2Case {
        std::string name;
        std::function<KappaSignature(double)> curved;
        KappaSignature flat;
    };
    const std::vector<P2Case> p2_cases = {
        {"contraction p2 kappa2=+1", [](double e) { return KappaSignature{e, 1.0}; }, {0.0, 1.0}},
        {"contraction p2 kappa2=-1", [](double e) { return KappaSignature{e, -1.0}; },
         {0.0, -1.0}},
        {"contraction p2 kappa2->0", [](double e) { return KappaSignature{0.0, e}; }, {0.0, 0.0}},
    };
    for (const P2Case& pc : p2_cases) {
        cases.push_back({pc.name, [pc](double eps) {
                             const std::array<P2State, 3> pts = {
                                 {{0.5, 0.7}, {-0.8, 0.4}, {0.2, 1.1}}};
                             const P2State f1{0.4, 0.8}, f2{-0.3, 1.2};
                             const KappaSignature kc = pc.curved(eps);
                             double d = 0.0;
                             for (const P2State& p : pts) {
                                 const auto Xc = p2_fields(kc, p, P2Variant::TimeLike);
                                 const auto X0 = p2_fields(pc.flat, p, P2Variant::TimeLike);
                                 for (int i = 0; i < 3; ++i) {
                                     const auto idx = static_cast<std::size_t>(i);
                                     d = std::max({d, std::fabs(Xc[idx].vx - X0[idx].vx),
                                                   std::fabs(Xc[idx].vy - X0[idx].vy)});
                                 }
                                 const auto hc = p2_hamiltonians(kc, p);
                                 const auto h0 = p2_hamiltonians(pc.flat, p);
                                 for (int i = 0; i < 3; ++i) {
                                     const auto idx = static_cast<std::size_t>(i);
                                     d = std::max(d, std::fabs(hc[idx] - h0[idx]));
                                 }
                                 d = std::max(d, std::fabs(p2_symplectic(kc).at(p.x, p.y)
                                                           - p2_symplectic(pc.flat).at(p.x, p.y)));
                             }
                             d = std::max(d,
                                          std::fabs(p2_F2(kc, f1, f2) - p2_F2(pc.flat, f1, f2)));
                             return d;
                         }});
    }

    return cases;
}

namespace detail {

/// Contraction check: d(eps) = |curved(eps) - flat| must shrink linearly,
/// with calibration constant C fixed at the largest eps.
[[nodiscard]] inline CheckResult contraction_check(const std::string& name,
                                                   const std::function<double(double)>& deviation)
{
    CheckResult r;
    r.suite = "contraction";
    r.name = name;
    r.threshold = 0.1; // |slope - 1|
    const std::vector<double> eps = contraction_epsilons();
    std::vector<double> dev;
    for (double e : eps) {
        dev.push_back(deviation(e));
        ++r.samples;
    }
    const double slope = loglog_slope(eps, dev);
    const double c_lin = 1.5 * dev[0] / eps[0];
    bool linear = true;
    for (std::size_t j = 0; j < eps.size(); ++j) {
        if (dev[j] > c_lin * eps[j]) {
            linear = false;
        }
    }
    r.residual = std::fabs(slope - 1.0);
    r.note = "slope=" + fmt(slope) + " C=" + fmt(c_lin) + (linear ? "" : " linear-bound-violated");
    r.pass = linear && r.residual <= r.threshold;
    return r;
}

} // namespace detail

/// |curved - flat| = O(kappa) for fields, Hamiltonians, symplectic weights,
/// and pairwise invariants of both classes, kappa in {1e-2..1e-8}; the
/// log-log slope must lie in [0.9, 1.1].
[[nodiscard]] inline std::vector<CheckResult> run_contraction_suite(const VerifyOptions&)
{
    std::vector<std::function<CheckResult()>> jobs;
    for (const ContractionCase& c : contraction_cases()) {
        jobs.emplace_back([c] { return detail::contraction_check(c.name, c.deviation); });
    }
    return detail::run_jobs(jobs);
}

// ---------------------------------------------------------------------------
// conservation (invariant transport under nonautonomous flows)
// ---------------------------------------------------------------------------

/// Drift of the pairwise/triple invariants along integrated trajectories
/// with sinusoidal coefficients over t in [0, 5]; threshold 1e-7 at
/// integration tolerance rtol = 1e-10.
[[nodiscard]] inline std::vector<CheckResult> run_conservation_checks(const VerifyOptions&)
{
    std::vector<std::function<CheckResult()>> jobs;

    for (double kappa : detail::i4_kappa_presets()) {
        jobs.emplace_back([kappa] {
            CheckResult r;
            r.suite = "conservation";
            r.name = "conservation i4 kappa=" + detail::fmt(kappa);
            r.threshold = 1e-7;
            const CoefficientSet coeffs = detail::i4_run_coeffs();
            const SystemRHS sys = i4_system(kappa, coeffs);
            IntegrateOptions io;
            io.rtol = 1e-10;
            io.atol = 1e-12;
            const Trajectory t1 = integrate(sys, {0.9, 0.2}, 0.0, 5.0, io);
            const Trajectory t2 = integrate(sys, {1.3, 0.5}, 0.0, 5.0, io);
            const Trajectory t3 = integrate(sys, {0.4, -0.3}, 0.0, 5.0, io);
            const std::vector<const Trajectory*> bundle = {&t1, &t2, &t3};
            const auto at = [](const StateVector& s) { return I4State{s[0], s[1]}; };
            const std::vector<std::pair<std::string, BundleInvariant>> invs = {
                {"F2", [kappa, at](const std::vector<StateVector>& s) {
                     return i4_F2(kappa, at(s[0]), at(s[1]));
                 }},
                {"F2_13", [kappa, at](const std::vector<StateVector>& s) {
                     return i4_F2_13(kappa, at(s[1]), at(s[2]));
                 }},
                {"F2_23", [kappa, at](const std::vector<StateVector>& s) {
                     return i4_F2_23(kappa, at(s[0]), at(s[2]));
                 }},
                {"F3", [kappa, at](const std::vector<StateVector>& s) {
                     return i4_F3(kappa, at(s[0]), at(s[1]), at(s[2]));
                 }},
            };
            for (const auto& [iname, inv] : invs) {
                const InvariantReport rep = monitor(iname, bundle, inv, r.threshold);
                r.residual = std::max(r.residual, rep.drift);
                r.samples += static_cast<int>(rep.times.size()) - rep.excluded;
                if (rep.excluded > 0) {
                    r.note += iname + ":" + detail::fmt(rep.excluded) + " excluded ";
                }
            }
            r.pass = r.residual <= r.threshold;
            return r;
        });
    }

    for (const KappaSignature& k : detail::nine_signatures()) {
        jobs.emplace_back([k] {
            CheckResult r;
            r.suite = "conservation";
            r.name = "conservation p2 k=" + detail::fmt(k);
            r.threshold = 1e-7;
            const CoefficientSet coeffs = detail::p2_run_coeffs();
            const SystemRHS sys = p2_system(k, coeffs);
            IntegrateOptions io;
            io.rtol = 1e-10;
            io.atol = 1e-12;
            const Trajectory t1 = integrate(sys, {0.3, 0.45}, 0.0, 5.0, io);
            const Trajectory t2 = integrate(sys, {-0.2, 0.7}, 0.0, 5.0, io);
            const Trajectory t3 = integrate(sys, {0.5, 0.3}, 0.0, 5.0, io);
            const std::vector<const Trajectory*> bundle = {&t1, &t2, &t3};
            const auto at = [](const StateVector& s) { return P2State{s[0], s[1]}; };
            const std::vector<std::pair<std::string, BundleInvariant>> invs = {
                {"F2", [k, at](const std::vector<StateVector>& s) {
                     return p2_F2(k, at(s[0]), at(s[1]));
                 }},
                {"F2_13", [k, at](const std::vector<StateVector>& s) {
                     return p2_F2_13(k, at(s[1]), at(s[2]));
                 }},
                {"F2_23", [k, at](const std::vector<StateVector>& s) {
                     return p2_F2_23(k, at(s[0]), at(s[2]));
                 }},
                {"F3", [k, at](const std::vector<StateVector>& s) {
                     return p2_F3(k, at(s[0]), at(s[1]), at(s[2]));
                 }},
            };
            for (const auto& [iname, inv] : invs) {
                const InvariantReport rep = monitor(iname, bundle, inv, r.threshold);
                r.residual = std::max(r.residual, rep.drift);
                r.samples += static_cast<int>(rep.times.size()) - rep.excluded;
                if (rep.excluded > 0) {
                    r.note += iname + ":" + detail::fmt(rep.excluded) + " excluded ";
                }
            }
            r.pass = r.residual <= r.threshold;
            return r;
        });
    }

    for (double kappa : detail::i4_kappa_presets()) {
        jobs.emplace_back([kappa] {
            CheckResult r;
            r.suite = "conservation";
            r.name = "conservation milne-pinney kappa=" + detail::fmt(kappa);
            r.threshold = 1e-7;
            const ModelParams params = ModelParams::ermakov(ModelClass::NegC, 0.8);
            const Coefficient Omega = Coefficient::sinusoid(0.1, 0.9, 0.5, 0.25);
            const SystemRHS sys = ermakov_system(ModelClass::NegC, {kappa, 0.0}, params, Omega);
            IntegrateOptions io;
            io.rtol = 1e-10;
            io.atol = 1e-12;
            io.domain_ok = [](double, const StateVector& s) { return s[0] > 0.05; };
            const Trajectory t1 = integrate(sys, {1.0, 0.8}, 0.0, 5.0, io);
            const Trajectory t2 = integrate(sys, {1.4, 0.6}, 0.0, 5.0, io);
            if (t1.status != TrajectoryStatus::Complete
                || t2.status != TrajectoryStatus::Complete) {
                r.note = "trajectory left the admissible domain";
                r.pass = false;
                r.residual = std::numeric_limits<double>::infinity();
                return r;
            }
            const InvariantReport rep = monitor(
                "milne-pinney", {&t1, &t2},
                [kappa, params](const std::vector<StateVector>& s) {
                    return milne_pinney_invariant(kappa, params, s[0][0], s[0][1], s[1][0],
                                                  s[1][1]);
                },
                r.threshold);
            r.residual = rep.drift;
            r.samples = static_cast<int>(rep.times.size()) - rep.excluded;
            if (rep.excluded > 0) {
                r.note = detail::fmt(rep.excluded) + " samples excluded";
            }
            r.pass = r.residual <= r.threshold;
            return r;
        });
    }

    return detail::run_jobs(jobs);
}

// ---------------------------------------------------------------------------
// superposition (reconstruction vs hidden integrated solution)
// ---------------------------------------------------------------------------

namespace detail {

struct SuperposeOutcome {
    double max_dev = 0.0;
    int valid = 0;
    int gaps = 0;
};

/// Track a reconstruction along a time grid: candidates(t, prev) returns the
/// admissible branch reconstructions at time t; the one closest to the
/// previous accepted point is compared against the hidden solution.
template <typename Candidates, typename Hidden>
[[nodiscard]] inline SuperposeOutcome track_reconstruction(double t0, double t1, int n,
                                                           const std::array<double, 2>& start,
                                                           const Candidates& candidates,
                                                           const Hidden& hidden)
{
    SuperposeOutcome out;
    std::array<double, 2> prev = start;
    for (int i = 0; i < n; ++i) {
        const double t = t0 + (t1 - t0) * static_cast<double>(i) / (n - 1);
        const std::vector<std::array<double, 2>> cand = candidates(t);
        if (cand.empty()) {
            ++out.gaps;
            continue;
        }
        std::array<double, 2> best = cand.front();
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& c : cand) {
            const double d = std::max(std::fabs(c[0] - prev[0]), std::fabs(c[1] - prev[1]));
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        const std::array<double, 2> ref = hidden(t);
        out.max_dev = std::max(out.max_dev,
                               std::max(std::fabs(best[0] - ref[0]), std::fabs(best[1] - ref[1])));
        ++out.valid;
        prev = best;
    }
    return out;
}

[[nodiscard]] inline IntegrateOptions tight_io()
{
    IntegrateOptions io;
    io.rtol = 1e-12;
    io.atol = 1e-14;
    return io;
}

} // namespace detail

/// Superposition-rule round trips: reconstruct a hidden solution from
/// particular solutions plus constants, against direct integration.
/// Threshold 1e-6 over the valid window (admissible branch data).
[[nodiscard]] inline std::vector<CheckResult> run_superposition_checks(const VerifyOptions&)
{
    std::vector<std::function<CheckResult()>> jobs;
    constexpr int kGrid = 60;

    // Curved (and flat) i4 rule.
    for (double kappa : {1.0, 0.5, 0.0, -0.5, -1.0}) {
        jobs.emplace_back([kappa] {
            CheckResult r;
            r.suite = "superposition";
            r.name = "superpose i4 kappa=" + detail::fmt(kappa);
            r.threshold = 1e-6;
            const CoefficientSet coeffs = detail::i4_run_coeffs();
            const SystemRHS sys = i4_system(kappa, coeffs);
            const IntegrateOptions io = detail::tight_io();
            const Trajectory h1 = integrate(sys, {1.1, 0.35}, 0.0, 5.0, io);
            const Trajectory p2t = integrate(sys, {0.7, -0.15}, 0.0, 5.0, io);
            const Trajectory p3t = integrate(sys, {1.6, 0.8}, 0.0, 5.0, io);
            const I4State s1_0{1.1, 0.35};
            const double mu1 = -i4_F2(kappa, s1_0, {0.7, -0.15});
            const double mu2 = -i4_F2(kappa, s1_0, {1.6, 0.8});
            const auto cand = [&](double t) {
                std::vector<std::array<double, 2>> out;
                const StateVector a = p2t.sample(t), b = p3t.sample(t);
                for (Branch br : {Branch::Plus, Branch::Minus}) {
                    try {
                        const I4State s =
                            i4_superpose(kappa, {a[0], a[1]}, {b[0], b[1]}, mu1, mu2, br);
                        out.push_back({s.x, s.y});
                    } catch (const DomainError&) {
                    }
                }
                return out;
            };
            const auto hidden = [&](double t) {
                const StateVector s = h1.sample(t);
                return std::array<double, 2>{s[0], s[1]};
            };
            const auto outc = detail::track_reconstruction(0.0, 5.0, kGrid, {1.1, 0.35}, cand,
                                                           hidden);
            r.residual = outc.max_dev;
            r.samples = outc.valid;
            if (outc.gaps > 0) {
                r.note = detail::fmt(outc.gaps) + " gap samples (no admissible branch)";
            }
            r.pass = outc.valid >= 10 && r.residual <= r.threshold;
            return r;
        });
    }

    // 1D Riccati-type rule (flat and curved).
    for (double kappa : {0.0, 1.0, -1.0}) {
        jobs.emplace_back([kappa] {
            CheckResult r;
            r.suite = "superposition";
            r.name = "superpose riccati kappa=" + detail::fmt(kappa);
            r.threshold = 1e-6;
            const CoefficientSet coeffs = detail::i4_run_coeffs();
            const SystemRHS sys = [kappa, coeffs](double t, const StateVector& s,
                                                  StateVector& ds) {
                const double b1 = coeffs.b1(t), b2 = coeffs.b2(t), b3 = coeffs.b3(t);
                for (std::size_t i = 0; i < s.size(); ++i) {
                    ds[i] = b1 + b2 * sk(kappa, s[i]) + 2.0 * b3 * vk(kappa, s[i]);
                }
            };
            const IntegrateOptions io = detail::tight_io();
            // Components: hidden x~, particulars x1, x2, x3.
            const Trajectory traj = integrate(sys, {0.4, 0.0, 0.8, 1.5}, 0.0, 5.0, io);
            const auto half_tan = [kappa](double x) { return tk(kappa, 0.5 * x); };
            const double T0 = half_tan(0.4), T1 = half_tan(0.0), T2 = half_tan(0.8),
                         T3 = half_tan(1.5);
            const double mu1 = ((T3 - T2) * (T0 - T1)) / ((T2 - T1) * (T3 - T0));
            for (int i = 0; i < kGrid; ++i) {
                const double t = 5.0 * static_cast<double>(i) / (kGrid - 1);
                const StateVector s = traj.sample(t);
                try {
                    const double rec = riccati_superpose(kappa, s[1], s[2], s[3], mu1);
                    r.residual = std::max(r.residual, std::fabs(rec - s[0]));
                    ++r.samples;
                } catch (const DomainError&) {
                }
            }
            r.pass = r.samples >= 10 && r.residual <= r.threshold;
            return r;
        });
    }

    // Flat p2 rule (kappa1 = 0, kappa2 = +-1).
    for (double kappa2 : {1.0, -1.0}) {
        jobs.emplace_back([kappa2] {
            CheckResult r;
            r.suite = "superposition";
            r.name = "superpose p2-flat kappa2=" + detail::fmt(kappa2);
            r.threshold = 1e-6;
            const KappaSignature k{0.0, kappa2};
            const CoefficientSet coeffs = detail::p2_run_coeffs();
            const SystemRHS sys = p2_system(k, coeffs);
            const IntegrateOptions io = detail::tight_io();
            const Trajectory h1 = integrate(sys, {0.25, 0.8}, 0.0, 5.0, io);
            const Trajectory q2 = integrate(sys, {-0.3, 0.55}, 0.0, 5.0, io);
            const Trajectory q3 = integrate(sys, {0.6, 1.25}, 0.0, 5.0, io);
            const P2State s1_0{0.25, 0.8};
            const double mu1 = p2_F2(k, s1_0, {-0.3, 0.55});
            const double mu2 = p2_F2(k, s1_0, {0.6, 1.25});
            const auto cand = [&](double t) {
                std::vector<std::array<double, 2>> out;
                const StateVector a = q2.sample(t), b = q3.sample(t);
                for (Branch by : {Branch::Plus, Branch::Minus}) {
                    for (Branch bx : {Branch::Plus, Branch::Minus}) {
                        try {
                            const P2State s = p2_superpose_flat(kappa2, {a[0], a[1]}, {b[0], b[1]},
                                                                mu1, mu2, {by, bx});
                            out.push_back({s.x, s.y});
                        } catch (const DomainError&) {
                        }
                    }
                }
                return out;
            };
            const auto hidden = [&](double t) {
                const StateVector s = h1.sample(t);
                return std::array<double, 2>{s[0], s[1]};
            };
            const auto outc = detail::track_reconstruction(0.0, 5.0, kGrid, {0.25, 0.8}, cand,
                                                           hidden);
            r.residual = outc.max_dev;
            r.samples = outc.valid;
            if (outc.gaps > 0) {
                r.note = detail::fmt(outc.gaps) + " gap samples (no admissible branch)";
            }
            r.pass = outc.valid >= 10 && r.residual <= r.threshold;
            return r;
        });
    }

    // Non-relativistic p2 rule (kappa2 = 0, curved kappa1).
    for (double kappa1 : {1.0, -1.0}) {
        jobs.emplace_back([kappa1] {
            CheckResult r;
            r.suite = "superposition";
            r.name = "superpose p2-nonrel kappa1=" + detail::fmt(kappa1);
            r.threshold = 1e-6;
            const KappaSignature k{kappa1, 0.0};
            const CoefficientSet coeffs = detail::p2_run_coeffs();
            const SystemRHS sys = p2_system(k, coeffs);
            const IntegrateOptions io = detail::tight_io();
            const Trajectory h1 = integrate(sys, {0.3, 0.9}, 0.0, 5.0, io);
            const Trajectory q2 = integrate(sys, {0.8, 0.6}, 0.0, 5.0, io);
            const Trajectory q3 = integrate(sys, {-0.2, 1.2}, 0.0, 5.0, io);
            const P2State s1_0{0.3, 0.9};
            const double mu1 = p2_F2(k, s1_0, {0.8, 0.6});
            const double mu2 = p2_F2(k, s1_0, {-0.2, 1.2});
            const auto cand = [&](double t) {
                std::vector<std::array<double, 2>> out;
                const StateVector a = q2.sample(t), b = q3.sample(t);
                for (Branch br : {Branch::Plus, Branch::Minus}) {
                    try {
                        const P2State s =
                            p2_superpose_nonrel(kappa1, {a[0], a[1]}, {b[0], b[1]}, mu1, mu2, br);
                        out.push_back({s.x, s.y});
                    } catch (const DomainError&) {
                    }
                }
                return out;
            };
            const auto hidden = [&](double t) {
                const StateVector s = h1.sample(t);
                return std::array<double, 2>{s[0], s[1]};
            };
            const auto outc = detail::track_reconstruction(0.0, 5.0, kGrid, {0.3, 0.9}, cand,
                                                           hidden);
            r.residual = outc.max_dev;
            r.samples = outc.valid;
            if (outc.gaps > 0) {
                r.note = detail::fmt(outc.gaps) + " gap samples (no admissible branch)";
            }
            r.pass = outc.valid >= 10 && r.residual <= r.threshold;
            return r;
        });
    }

    return detail::run_jobs(jobs);
}

// ---------------------------------------------------------------------------
// perturbation (order of accuracy of the small-curvature expansions)
// ---------------------------------------------------------------------------

/// ||exact_rhs(kappa) - perturbed_rhs(kappa)|| must scale like kappa^2:
/// log-log slope in [1.8, 2.2] over kappa in {1e-1.5 .. 1e-3.5}.
[[nodiscard]] inline std::vector<CheckResult> run_perturbation_checks(const VerifyOptions&)
{
    const auto slope_check = [](const std::string& name,
                                const std::function<double(double)>& residual_at) {
        CheckResult r;
        r.suite = "perturbation";
        r.name = name;
        r.threshold = 0.2; // |slope - 2|
        std::vector<double> eps, res;
        for (int j = 0; j < 5; ++j) {
            eps.push_back(std::pow(10.0, -1.5 - 0.5 * j));
            res.push_back(residual_at(eps.back()));
            ++r.samples;
        }
        const double slope = detail::loglog_slope(eps, res);
        r.residual = std::fabs(slope - 2.0);
        r.note = "slope=" + detail::fmt(slope);
        r.pass = r.residual <= r.threshold;
        return r;
    };

    std::vector<std::function<CheckResult()>> jobs;
    jobs.emplace_back([slope_check] {
        const CoefficientSet coeffs = {Coefficient::constant(0.4), Coefficient::constant(0.7),
                                       Coefficient::constant(0.3)};
        return slope_check("perturbation i4", [&coeffs](double eps) {
            const I4State s{0.9, 0.4};
            const TangentVector a = i4_rhs(eps, coeffs, 0.3, s);
            const TangentVector b = i4_perturbed_rhs(eps, coeffs, 0.3, s);
            return std::max(std::fabs(a.vx - b.vx), std::fabs(a.vy - b.vy));
        });
    });
    jobs.emplace_back([slope_check] {
        const CoefficientSet coeffs = {Coefficient::constant(0.4), Coefficient::constant(0.7),
                                       Coefficient::constant(0.3)};
        return slope_check("perturbation p2", [&coeffs](double eps) {
            const P2State s{0.6, 0.8};
            const KappaSignature k{eps, eps};
            const TangentVector a = p2_rhs(k, coeffs, 0.3, s);
            const TangentVector b = p2_perturbed_rhs(k, coeffs, 0.3, s);
            return std::max(std::fabs(a.vx - b.vx), std::fabs(a.vy - b.vy));
        });
    });
    jobs.emplace_back([slope_check] {
        const ModelParams params = ModelParams::ermakov(ModelClass::NegC, std::sqrt(2.0));
        const Coefficient Omega = Coefficient::constant(0.6);
        return slope_check("perturbation ermakov", [&params, &Omega](double eps) {
            const TangentVector a =
                ermakov_rhs(ModelClass::NegC, {eps, 0.0}, params, Omega, 0.3, 1.1, 0.7);
            const TangentVector b = ermakov_perturbed_rhs(eps, params, Omega, 0.3, 1.1, 0.7);
            return std::max(std::fabs(a.vx - b.vx), std::fabs(a.vy - b.vy));
        });
    });
    return detail::run_jobs(jobs);
}

// ---------------------------------------------------------------------------
// reduction (second-order scalar form of the flat complex Riccati system)
// ---------------------------------------------------------------------------

/// xi = y^{-1/2} along integrated flat-p2 trajectories must satisfy the
/// reduced second-order equation; finite-difference residual <= 1e-5.
[[nodiscard]] inline std::vector<CheckResult> run_reduction_checks(const VerifyOptions&)
{
    std::vector<std::function<CheckResult()>> jobs;
    for (double kappa2 : {-1.0, 0.0, 1.0}) {
        jobs.emplace_back([kappa2] {
            CheckResult r;
            r.suite = "reduction";
            r.name = "reduction kappa2=" + detail::fmt(kappa2);
            r.threshold = 1e-5;
            const CoefficientSet coeffs = {Coefficient::sinusoid(0.3, 1.2, 0.2, 0.1),
                                           Coefficient::sinusoid(0.2, 0.9, 0.8, 0.0),
                                           Coefficient::sinusoid(0.1, 1.1, 0.5, 0.35)};
            const SystemRHS sys = p2_system({0.0, kappa2}, coeffs);
            IntegrateOptions io;
            io.rtol = 1e-12;
            io.atol = 1e-14;
            const Trajectory traj = integrate(sys, {0.1, 0.5}, 0.0, 1.0, io);
            r.residual = complex_riccati_reduction_residual(kappa2, coeffs, traj);
            r.samples = 50;
            r.pass = r.residual <= r.threshold;
            return r;
        });
    }
    return detail::run_jobs(jobs);
}

// ---------------------------------------------------------------------------
// tables (quoted closed forms vs general-curvature formulas)
// ---------------------------------------------------------------------------

/// Every quoted table row must agree with the general implementation to
/// 1e-12 at in-domain sample points.
[[nodiscard]] inline std::vector<CheckResult> run_table_checks(const VerifyOptions&)
{
    struct TablePoint {
        std::string which;
        double x, y;
    };
    const std::vector<TablePoint> points = {
        {"table1", 0.3, 0.7},  {"table1", 1.1, -0.4}, {"table2", 1.0, 2.0},
        {"table2", 0.45, -0.8}, {"table3", 0.3, 0.7},  {"table3", -0.6, 0.35},
    };
    std::vector<std::function<CheckResult()>> jobs;
    for (const TablePoint& tp : points) {
        jobs.emplace_back([tp] {
            CheckResult r;
            r.suite = "tables";
            r.name = "tables " + tp.which + " at (" + detail::fmt(tp.x) + "," + detail::fmt(tp.y)
                     + ")";
            r.threshold = kTableAgreementTolerance;
            int evaluated = 0;
            for (const TableRow& row : table_rows(tp.which)) {
                const TableEvaluation ev = evaluate_row(row, tp.x, tp.y);
                if (ev.skipped) {
                    r.note += row.label + ": " + ev.note + "; ";
                    continue;
                }
                r.residual = std::max(r.residual, ev.max_mismatch);
                ++evaluated;
            }
            r.samples = evaluated;
            r.pass = evaluated > 0 && r.residual <= r.threshold;
            return r;
        });
    }
    return detail::run_jobs(jobs);
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

/// Names accepted by the CLI `verify` command.
[[nodiscard]] inline std::vector<std::string> verify_suite_names()
{
    return {"identities", "brackets",    "poisson",    "hamiltonian",
            "killing",    "pushforward", "contraction"};
}

/// Run one named suite (CLI names only).
[[nodiscard]] inline std::vector<CheckResult> run_suite(const std::string& name,
                                                        const VerifyOptions& opt)
{
    if (name == "identities") {
        return run_identities_suite(opt);
    }
    if (name == "brackets") {
        return run_brackets_suite(opt);
    }
    if (name == "poisson") {
        return run_poisson_suite(opt);
    }
    if (name == "hamiltonian") {
        return run_hamiltonian_suite(opt);
    }
    if (name == "killing") {
        return run_killing_suite(opt);
    }
    if (name == "pushforward") {
        return run_pushforward_suite(opt);
    }
    if (name == "contraction") {
        return run_contraction_suite(opt);
    }
    throw DomainError("unknown verification suite: " + name);
}

} // namespace cklh
