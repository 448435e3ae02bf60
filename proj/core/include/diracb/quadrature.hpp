#pragma once

#include <span>

#include "diracb/expr.hpp"

namespace diracb {

/// Gauss-Legendre nodes/weights on [-1,1] for the given point count.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int points);

/// Composite Gauss-Legendre integral of e over the box, `cells` subdivisions
/// per axis, fixed 12-point rule per cell.
Complex integrate_box(const ScalarExpr& e, const Box& box, int cells);

/// Doubles the cell count until successive values agree to tol (or the cap).
Complex integrate_adaptive(const ScalarExpr& e, const Box& box, double tol = 1e-10,
                           int max_cells = 4096);

/// Grid-sampled sup of |D^alpha e| over the box for all |alpha| <= order.
/// Default grid: 257 points per axis for dim <= 2, 33 for dim in {3,4}.
double seminorm(const ScalarExpr& e, const Box& box, int order, int grid_points = 0);

/// Per-order partial maxima: entry m is the sup over |alpha| == m; one grid pass.
std::vector<double> seminorm_profile(const ScalarExpr& e, const Box& box, int order,
                                     int grid_points = 0);

}  // namespace diracb
