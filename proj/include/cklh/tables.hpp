// cklh/tables.hpp — hand-quoted closed-form rows of the three reference
// tables, for dual-path comparison against the general-curvature formulas:
//
//   table 1: the two flat classes (p2 on the Euclidean plane, i4 on the
//            product of two lines),
//   table 2: the curved i4 class at kappa = +1, 0, -1,
//   table 3: the curved p2 class on the nine CK spaces.
//
// Each row stores the quoted fields, Hamiltonians, and symplectic weight as
// literal trigonometric/hyperbolic/polynomial expressions; evaluate_row
// recomputes the same ten scalars from the general implementations and
// reports the worst mismatch.  Rows are skipped (with a note) at points
// outside their domain.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "cklh/applications.hpp" // FieldTriple
#include "cklh/class_i4.hpp"
#include "cklh/class_p2.hpp"
#include "cklh/ktrig.hpp"
#include "cklh/types.hpp"

namespace cklh {

/// Agreement requirement between quoted and general evaluations.
inline constexpr double kTableAgreementTolerance = 1e-12;

/// One quoted table row.
struct TableRow {
    enum class Parent { I4, P2 };
    std::string table;  ///< "table1" | "table2" | "table3"
    std::string label;  ///< human-readable row name
    Parent parent = Parent::I4;
    KappaSignature k;   ///< curvature labels (I4 rows use kappa1 only)
    std::function<bool(double, double)> domain_ok;
    FieldTriple quoted_fields;
    std::function<std::array<double, 3>(double, double)> quoted_h;
    std::function<double(double, double)> quoted_weight;
};

/// Result of evaluating one row at a point: the ten scalar slots are
/// (X1x, X1y, X2x, X2y, X3x, X3y, h1, h2, h3, W).
struct TableEvaluation {
    std::string table;
    std::string label;
    bool skipped = false;
    std::string note;
    std::array<double, 10> quoted{};
    std::array<double, 10> general{};
    double max_mismatch = 0.0;
    [[nodiscard]] bool pass() const
    {
        return !skipped && max_mismatch <= kTableAgreementTolerance;
    }
};

namespace detail {

[[nodiscard]] inline std::array<double, 10> pack_row(const std::array<TangentVector, 3>& X,
                                                     const std::array<double, 3>& h, double w)
{
    return {X[0].vx, X[0].vy, X[1].vx, X[1].vy, X[2].vx, X[2].vy, h[0], h[1], h[2], w};
}

[[nodiscard]] inline std::function<bool(double, double)> i4_row_domain(double kappa)
{
    return [kappa](double x, double y) {
        const double d = 0.5 * (x - y);
        return std::fabs(sk(kappa, d)) > kTanPoleTolerance
            && std::fabs(ck(kappa, d)) > kTanPoleTolerance;
    };
}

[[nodiscard]] inline std::function<bool(double, double)> p2_row_domain(const KappaSignature& k)
{
    const double k12 = k.k12();
    return [k12](double, double y) {
        return std::fabs(sk(k12, y)) > kTanPoleTolerance
            && std::fabs(ck(k12, y)) > kTanPoleTolerance;
    };
}

} // namespace detail

/// Evaluate one row at (x, y): quoted forms vs general-curvature formulas.
[[nodiscard]] inline TableEvaluation evaluate_row(const TableRow& row, double x, double y)
{
    TableEvaluation ev;
    ev.table = row.table;
    ev.label = row.label;
    if (!row.domain_ok(x, y)) {
        ev.skipped = true;
        ev.note = "outside row domain";
        return ev;
    }
    try {
        ev.quoted = detail::pack_row(row.quoted_fields(x, y), row.quoted_h(x, y),
                                     row.quoted_weight(x, y));
        if (row.parent == TableRow::Parent::I4) {
            const double kappa = row.k.kappa1;
            ev.general = detail::pack_row(i4_fields(kappa, {x, y}), i4_hamiltonians(kappa, {x, y}),
                                          i4_symplectic(kappa).at(x, y));
        } else {
            ev.general = detail::pack_row(p2_fields(row.k, {x, y}, P2Variant::TimeLike),
                                          p2_hamiltonians(row.k, {x, y}),
                                          p2_symplectic(row.k).at(x, y));
        }
    } catch (const DomainError& e) {
        ev.skipped = true;
        ev.note = e.what();
        return ev;
    }
    for (int i = 0; i < 10; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        ev.max_mismatch = std::max(ev.max_mismatch, std::fabs(ev.quoted[idx] - ev.general[idx]));
    }
    return ev;
}

/// The two flat class rows.
[[nodiscard]] inline std::vector<TableRow> table1_rows()
{
    std::vector<TableRow> rows;
    {
        TableRow r;
        r.table = "table1";
        r.label = "class p2, Euclidean plane";
        r.parent = TableRow::Parent::P2;
        r.k = {0.0, 1.0};
        r.domain_ok = detail::p2_row_domain(r.k);
        r.quoted_fields = [](double x, double y) {
            return std::array<TangentVector, 3>{
                {{1.0, 0.0}, {x, y}, {x * x - y * y, 2.0 * x * y}}};
        };
        r.quoted_h = [](double x, double y) {
            return std::array<double, 3>{-1.0 / y, -x / y, -(x * x + y * y) / y};
        };
        r.quoted_weight = [](double, double y) { return 1.0 / (y * y); };
        rows.push_back(std::move(r));
    }
    {
        TableRow r;
        r.table = "table1";
        r.label = "class i4, product of two lines";
        r.parent = TableRow::Parent::I4;
        r.k = {0.0, 0.0};
        r.domain_ok = detail::i4_row_domain(0.0);
        r.quoted_fields = [](double x, double y) {
            return std::array<TangentVector, 3>{{{1.0, 1.0}, {x, y}, {x * x, y * y}}};
        };
        r.quoted_h = [](double x, double y) {
            const double d = x - y;
            return std::array<double, 3>{1.0 / d, 0.5 * (x + y) / d, x * y / d};
        };
        r.quoted_weight = [](double x, double y) { return 1.0 / ((x - y) * (x - y)); };
        rows.push_back(std::move(r));
    }
    return rows;
}

/// The curved i4 class at kappa = +1, 0, -1.
[[nodiscard]] inline std::vector<TableRow> table2_rows()
{
    std::vector<TableRow> rows;
    {
        TableRow r;
        r.table = "table2";
        r.label = "i4, kappa = +1 (circular)";
        r.parent = TableRow::Parent::I4;
        r.k = {1.0, 0.0};
        r.domain_ok = detail::i4_row_domain(1.0);
        r.quoted_fields = [](double x, double y) {
            return std::array<TangentVector, 3>{{{1.0, 1.0},
                                                 {std::sin(x), std::sin(y)},
                                                 {2.0 * (1.0 - std::cos(x)),
                                                  2.0 * (1.0 - std::cos(y))}}};
        };
        r.quoted_h = [](double x, double y) {
            const double d = 0.5 * (x - y);
            return std::array<double, 3>{1.0 / (2.0 * std::tan(d)),
                                         std::sin(0.5 * (x + y)) / (2.0 * std::sin(d)),
                                         2.0 * std::sin(0.5 * x) * std::sin(0.5 * y)
                                             / std::sin(d)};
        };
        r.quoted_weight = [](double x, double y) {
            const double s = std::sin(0.5 * (x - y));
            return 1.0 / (4.0 * s * s);
        };
        rows.push_back(std::move(r));
    }
    {
        TableRow r;
        r.table = "table2";
        r.label = "i4, kappa = 0 (flat)";
        r.parent = TableRow::Parent::I4;
        r.k = {0.0, 0.0};
        r.domain_ok = detail::i4_row_domain(0.0);
        r.quoted_fields = [](double x, double y) {
            return std::array<TangentVector, 3>{{{1.0, 1.0}, {x, y}, {x * x, y * y}}};
        };
        r.quoted_h = [](double x, double y) {
            const double d = x - y;
            return std::array<double, 3>{1.0 / d, 0.5 * (x + y) / d, x * y / d};
        };
        r.quoted_weight = [](double x, double y) { return 1.0 / ((x - y) * (x - y)); };
        rows.push_back(std::move(r));
    }
    {
        TableRow r;
        r.table = "table2";
        r.label = "i4, kappa = -1 (hyperbolic)";
        r.parent = TableRow::Parent::I4;
        r.k = {-1.0, 0.0};
        r.domain_ok = detail::i4_row_domain(-1.0);
        r.quoted_fields = [](double x, double y) {
            return std::array<TangentVector, 3>{{{1.0, 1.0},
                                                 {std::sinh(x), std::sinh(y)},
                                                 {2.0 * (std::cosh(x) - 1.0),
                                                  2.0 * (std::cosh(y) - 1.0)}}};
        };
        r.quoted_h = [](double x, double y) {
            const double d = 0.5 * (x - y);
            return std::array<double, 3>{1.0 / (2.0 * std::tanh(d)),
                                         std::sinh(0.5 * (x + y)) / (2.0 * std::sinh(d)),
                                         2.0 * std::sinh(0.5 * x) * std::sinh(0.5 * y)
                                             / std::sinh(d)};
        };
        r.quoted_weight = [](double x, double y) {
            const double s = std::sinh(0.5 * (x - y));
            return 1.0 / (4.0 * s * s);
        };
        rows.push_back(std::move(r));
    }
    return rows;
}

/// The curved p2 class on the nine CK spaces (time-like fields; y != 0).
[[nodiscard]] inline std::vector<TableRow> table3_rows()
{
    std::vector<TableRow> rows;
    const auto add = [&rows](const char* label, double k1, double k2, FieldTriple f,
                             std::function<std::array<double, 3>(double, double)> h,
                             std::function<double(double, double)> w) {
        TableRow r;
        r.table = "table3";
        r.label = label;
        r.parent = TableRow::Parent::P2;
        r.k = {k1, k2};
        r.domain_ok = detail::p2_row_domain(r.k);
        r.quoted_fields = std::move(f);
        r.quoted_h = std::move(h);
        r.quoted_weight = std::move(w);
        rows.push_back(std::move(r));
    };

    add(
        "sphere (+1,+1)", 1.0, 1.0,
        [](double x, double y) {
            return std::array<TangentVector, 3>{
                {{1.0, 0.0},
                 {std::sin(x) / std::cos(y), std::cos(x) * std::sin(y)},
                 {2.0 * (std::cos(y) - std::cos(x)) / std::cos(y),
                  2.0 * std::sin(x) * std::sin(y)}}};
        },
        [](double x, double y) {
            return std::array<double, 3>{-1.0 / std::sin(y), -std::sin(x) / std::tan(y),
                                         2.0 * (std::cos(x) * std::cos(y) - 1.0) / std::sin(y)};
        },
        [](double, double y) {
            const double s = std::sin(y);
            return std::cos(y) / (s * s);
        });

    add(
        "Euclidean (0,+1)", 0.0, 1.0,
        [](double x, double y) {
            return std::array<TangentVector, 3>{
                {{1.0, 0.0}, {x, y}, {x * x - y * y, 2.0 * x * y}}};
        },
        [](double x, double y) {
            return std::array<double, 3>{-1.0 / y, -x / y, -(x * x + y * y) / y};
        },
        [](double, double y) { return 1.0 / (y * y); });

    add(
        "hyperbolic (-1,+1)", -1.0, 1.0,
        [](double x, double y) {
            return std::array<TangentVector, 3>{
                {{1.0, 0.0},
                 {std::sinh(x) / std::cosh(y), std::cosh(x) * std::sinh(y)},
                 {2.0 * (std::cosh(x) - std::cosh(y)) / std::cosh(y),
                  2.0 * std::sinh(x) * std::sinh(y)}}};
        },
        [](double x, double y) {
            return std::array<double, 3>{-1.0 / std::sinh(y), -std::sinh(x) / std::tanh(y),
                                         2.0 * (1.0 - std::cosh(x) * std::cosh(y))
                                             / std::sinh(y)};
        },
        [](double, double y) {
            const double s = std::sinh(y);
            return std::cosh(y) / (s * s);
        });

    add(
        "oscillating NH (+1,0)", 1.0, 0.0,
        [](double x, double y) {
            return std::array<TangentVector, 3>{{{1.0, 0.0},
                                                 {std::sin(x), y * std::cos(x)},
                                                 {2.0 * (1.0 - std::cos(x)),
                                                  2.0 * y * std::sin(x)}}};
        },
        [](double x, double y) {
            return std::array<double, 3>{-1.0 / y, -std::sin(x) / y,
                                         2.0 * (std::cos(x) - 1.0) / y};
        },
        [](double, double y) { return 1.0 / (y * y); });

    add(
        "Galilean (0,0)", 0.0, 0.0,
        [](double x, double y) {
            return std::array<TangentVector, 3>{{{1.0, 0.0}, {x, y}, {x * x, 2.0 * x * y}}};
        },
        [](double x, double y) {
            return std::array<double, 3>{-1.0 / y, -x / y, -x * x / y};
        },
        [](double, double y) { return 1.0 / (y * y); });

    add(
        "expanding NH (-1,0)", -1.0, 0.0,
        [](double x, double y) {
            return std::array<TangentVector, 3>{{{1.0, 0.0},
                                                 {std::sinh(x), y * std::cosh(x)},
                                                 {2.0 * (std::cosh(x) - 1.0),
                                                  2.0 * y * std::sinh(x)}}};
        },
        [](double x, double y) {
            return std::array<double, 3>{-1.0 / y, -std::sinh(x) / y,
                                         2.0 * (1.0 - std::cosh(x)) / y};
        },
        [](double, double y) { return 1.0 / (y * y); });

    add(
        "anti-de Sitter (+1,-1)", 1.0, -1.0,
        [](double x, double y) {
            return std::array<TangentVector, 3>{
                {{1.0, 0.0},
                 {std::sin(x) / std::cosh(y), std::cos(x) * std::sinh(y)},
                 {2.0 * (std::cosh(y) - std::cos(x)) / std::cosh(y),
                  2.0 * std::sin(x) * std::sinh(y)}}};
        },
        [](double x, double y) {
            return std::array<double, 3>{-1.0 / std::sinh(y), -std::sin(x) / std::tanh(y),
                                         2.0 * (std::cos(x) * std::cosh(y) - 1.0)
                                             / std::sinh(y)};
        },
        [](double, double y) {
            const double s = std::sinh(y);
            return std::cosh(y) / (s * s);
        });

    add(
        "Minkowskian (0,-1)", 0.0, -1.0,
        [](double x, double y) {
            return std::array<TangentVector, 3>{
                {{1.0, 0.0}, {x, y}, {x * x + y * y, 2.0 * x * y}}};
        },
        [](double x, double y) {
            return std::array<double, 3>{-1.0 / y, -x / y, -(x * x - y * y) / y};
        },
        [](double, double y) { return 1.0 / (y * y); });

    add(
        "de Sitter (-1,-1)", -1.0, -1.0,
        [](double x, double y) {
            return std::array<TangentVector, 3>{
                {{1.0, 0.0},
                 {std::sinh(x) / std::cos(y), std::cosh(x) * std::sin(y)},
                 {2.0 * (std::cosh(x) - std::cos(y)) / std::cos(y),
                  2.0 * std::sinh(x) * std::sin(y)}}};
        },
        [](double x, double y) {
            return std::array<double, 3>{-1.0 / std::sin(y), -std::sinh(x) / std::tan(y),
                                         2.0 * (1.0 - std::cosh(x) * std::cos(y))
                                             / std::sin(y)};
        },
        [](double, double y) {
            const double s = std::sin(y);
            return std::cos(y) / (s * s);
        });

    return rows;
}

/// All rows of one table by name ("table1" | "table2" | "table3").
[[nodiscard]] inline std::vector<TableRow> table_rows(const std::string& which)
{
    if (which == "table1") {
        return table1_rows();
    }
    if (which == "table2") {
        return table2_rows();
    }
    if (which == "table3") {
        return table3_rows();
    }
    throw DomainError("unknown table: " + which);
}

} // namespace cklh
