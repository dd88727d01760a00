// cklh/types.hpp — shared small types and error taxonomy.
#pragma once

#include <stdexcept>
#include <string>

namespace cklh {

/// Base class for all domain violations raised by the library (pole of a
/// tangent, degenerate chart, symplectic degeneracy, ...).  Deriving from
/// std::domain_error keeps the catch-site conventional.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A chart inversion was requested at a point where the chart is singular
/// (e.g. polar coordinates at the origin).
struct DegenerateChartError : DomainError {
    using DomainError::DomainError;
};

/// The symplectic weight W vanished (or nearly so) at the evaluation point.
struct SymplecticDegeneracyError : DomainError {
    using DomainError::DomainError;
};

/// A superposition reconstruction has negative discriminant: no real
/// solution exists for the requested constants at this time.
struct NoRealSolutionError : DomainError {
    using DomainError::DomainError;
};

/// A superposition input configuration is degenerate (near-coincident
/// particular solutions or a vanishing reconstruction denominator).
struct DegenerateConfigurationError : DomainError {
    using DomainError::DomainError;
};

/// Curvature/signature pair (kappa1, kappa2).  One-dimensional spaces use
/// only kappa1; the product kappa1*kappa2 labels the second 1D subspace of
/// the 2D geometry.
struct KappaSignature {
    double kappa1 = 0.0;
    double kappa2 = 0.0;

    /// Label of the second trigonometry family appearing in the metric.
    [[nodiscard]] double k12() const noexcept { return kappa1 * kappa2; }
};

/// Tangent vector (or state derivative) in the active 2D chart.
struct TangentVector {
    double vx = 0.0;
    double vy = 0.0;
};

[[nodiscard]] inline TangentVector operator+(TangentVector a, TangentVector b) noexcept
{
    return {a.vx + b.vx, a.vy + b.vy};
}

[[nodiscard]] inline TangentVector operator-(TangentVector a, TangentVector b) noexcept
{
    return {a.vx - b.vx, a.vy - b.vy};
}

[[nodiscard]] inline TangentVector operator*(double s, TangentVector v) noexcept
{
    return {s * v.vx, s * v.vy};
}

} // namespace cklh
