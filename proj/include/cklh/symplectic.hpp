// cklh/symplectic.hpp — generic machinery for 2D symplectic forms
// omega = W(x, y) dx ^ dy: Hamiltonian vector fields, Poisson brackets,
// and the residuals used to verify shipped (X, h, omega) triples.
//
// Sign convention (pinned by the canonical sl(2) realization test):
//   inner-product condition i_X omega = dh  =>  X = (d_y h / W, -d_x h / W)
//   Poisson bracket {f, g} = (d_x f d_y g - d_y f d_x g) / W.
#pragma once

#include <cmath>
#include <functional>

#include "cklh/conformal.hpp"
#include "cklh/types.hpp"

namespace cklh {

/// Symplectic degeneracy guard: |W| below this raises an error.
inline constexpr double kSymplecticDegeneracyTolerance = 1e-13;

/// Gradient of a scalar field, components (d/dx, d/dy).
struct Gradient2 {
    double dx = 0.0;
    double dy = 0.0;
};

/// Scalar field with an optional exact gradient; when the gradient is
/// absent, consumers fall back to central finite differences.
struct ScalarField {
    PlanarScalar value;
    std::function<Gradient2(double, double)> gradient; // may be empty

    [[nodiscard]] Gradient2 grad(double x, double y) const
    {
        if (gradient) {
            return gradient(x, y);
        }
        const double h = kBracketStepScale * std::max(1.0, std::hypot(x, y));
        return {(value(x + h, y) - value(x - h, y)) / (2.0 * h),
                (value(x, y + h) - value(x, y - h)) / (2.0 * h)};
    }
};

/// Coefficient of omega = W dx ^ dy as a positional evaluator.
struct SymplecticWeight {
    PlanarScalar W;

    [[nodiscard]] double at(double x, double y) const
    {
        const double w = W(x, y);
        if (!(std::fabs(w) >= kSymplecticDegeneracyTolerance)) {
            throw SymplecticDegeneracyError("symplectic weight vanished at evaluation point");
        }
        return w;
    }
};

/**
 * @brief Hamiltonian vector field of h for omega = W dx ^ dy:
 *        X = (d_y h / W, -d_x h / W), so that i_X omega = dh.
 *
 * @throws SymplecticDegeneracyError when |W| < tolerance at the point.
 */
[[nodiscard]] inline TangentVector ham_vector_field(const SymplecticWeight& w,
                                                    const ScalarField& h, double x, double y)
{
    const double wv = w.at(x, y);
    const Gradient2 g = h.grad(x, y);
    return {g.dy / wv, -g.dx / wv};
}

/**
 * @brief Poisson bracket {f, g} = (d_x f d_y g - d_y f d_x g) / W.
 */
[[nodiscard]] inline double poisson(const SymplecticWeight& w, const ScalarField& f,
                                    const ScalarField& g, double x, double y)
{
    const double wv = w.at(x, y);
    const Gradient2 df = f.grad(x, y);
    const Gradient2 dg = g.grad(x, y);
    return (df.dx * dg.dy - df.dy * dg.dx) / wv;
}

/**
 * @brief Residual of the invariance condition L_X omega = 0, which in 2D is
 *        the divergence form d_x(W X^x) + d_y(W X^y) = 0; evaluated by
 *        central differences.
 */
[[nodiscard]] inline double invariance_residual(const SymplecticWeight& w, const PlanarField& X,
                                                double x, double y)
{
    (void)w.at(x, y); // degeneracy guard at the base point
    const double h = kBracketStepScale * std::max(1.0, std::hypot(x, y));
    const auto flux_x = [&](double a, double b) { return w.W(a, b) * X(a, b).vx; };
    const auto flux_y = [&](double a, double b) { return w.W(a, b) * X(a, b).vy; };
    return (flux_x(x + h, y) - flux_x(x - h, y)) / (2.0 * h)
         + (flux_y(x, y + h) - flux_y(x, y - h)) / (2.0 * h);
}

/**
 * @brief Componentwise residual of i_X omega = dh for a *given* field X:
 *        max(| -W X^y - d_x h |, | W X^x - d_y h |).
 *
 * Used to verify shipped class/application fields against their shipped
 * Hamiltonians and weights.
 */
[[nodiscard]] inline double pairing_residual(const SymplecticWeight& w, const ScalarField& h,
                                             const PlanarField& X, double x, double y)
{
    const double wv = w.at(x, y);
    const Gradient2 g = h.grad(x, y);
    const TangentVector v = X(x, y);
    return std::max(std::fabs(-wv * v.vy - g.dx), std::fabs(wv * v.vx - g.dy));
}

} // namespace cklh
