#pragma once

#include <string>

#include "diracb/quadrature.hpp"
#include "diracb/section.hpp"

namespace diracb {

/// Smooth compactly supported density phi(x,y) realizing the fiberwise
/// integration distribution T_phi(F)(x) = int phi(x,y)F(x,y) dy.
struct DensityFamily {
    ScalarExpr phi;  // over R^{l+k}
    Box support;     // total support box (base axes first)
};

struct SweepRow {
    double parameter = 0.0;
    double error = 0.0;
    std::optional<double> bound;  // analytic bound when one applies
    std::optional<bool> satisfied;
};

struct ConvergenceReport {
    std::string name;
    std::vector<SweepRow> rows;  // ordered by parameter
    double fitted_rate = 0.0;    // least squares on log(error) vs log(parameter)
};

/// Riemann Dirac comb (L/n)^k sum_{t in I} delta_t with t_j = -L/2 + jL/n,
/// as a point-base section with fiber R^k.
DiracSection riemann_comb(double L, int n, int k);

/// Right-hand side of |int_D F - comb(F)| <= (k L^{k+1}/n)·p_{D,1}(F) with the
/// grid-sampled seminorm on D = [-L/2, L/2]^k.
double comb_bound(const ScalarExpr& F, double L, int n, int k);

/// Family comb Delta_{phi,n}: terms (L/n)^k phi(·,t)·delta_t over the base.
/// The fiber support of phi must lie inside [-L/2, L/2]^k.
DiracSection family_comb(GroupoidPtr groupoid, const DensityFamily& phi, double L, int n);

/// T_phi(F)(x) by fiberwise quadrature (the comparison oracle for combs).
Complex density_apply(const DensityFamily& phi, const ScalarExpr& F, std::span<const double> x,
                      int cells = 64);

/// Finite-difference Dirac stencil 1/(2t)^n sum_k (-1)^k C(n,k) delta_{y+(n-2k)t}
/// on the point base with fiber R.
DiracSection fd_stencil(int order, double step, double y);

/// Tensor product of 1-D stencils for the multi-index beta at y in R^k.
DiracSection fd_stencil_multi(std::span<const int> beta, double step, std::span<const double> y);

/// Mollification u * rho_t with rho_t(y) = t^{-k} rho(y/t)/Z: the exact closed
/// form phi(x,y) = sum_i f_i(x)·rho_t(y - y_i). rho must be compactly
/// supported (box required); Z is computed once by quadrature.
DensityFamily mollify(const DiracSection& u, const ScalarExpr& rho, const Box& rho_support,
                      double t);

/// One convergence experiment over a parameter grid. Exactly the fields for
/// the chosen kind must be set; anything inconsistent is rejected.
struct SweepDescriptor {
    enum class Kind { Comb, FamilyComb, Stencil, Mollify };
    Kind kind = Kind::Comb;

    // Comb: battery of functions over R^k, cube size L, grid counts n.
    // FamilyComb: groupoid + phi + battery over R^{l+k} + base sample points.
    // Stencil: 1-D derivative order + function over R + expansion point y.
    // Mollify: section + kernel rho with support box + battery over R^{l+k}.
    std::vector<ScalarExpr> battery;
    double L = 1.0;
    int dim = 1;
    std::vector<int> counts;        // comb/family n grid
    std::vector<double> steps;      // stencil t grid / mollifier scales
    GroupoidPtr groupoid;           // family/mollify
    std::optional<DensityFamily> phi;
    std::vector<Vec> base_points;   // family/mollify sample points
    int order = 1;                  // stencil
    double at = 0.0;                // stencil expansion point
    std::optional<DiracSection> section;  // mollify
    std::optional<ScalarExpr> kernel;     // mollify rho
    std::optional<Box> kernel_support;
};

/// Runs the experiment, one row per grid parameter: worst measured error over
/// the battery, the analytic bound where one applies, and the satisfied flag
/// (measured <= 1.05 x bound for the grid-sampled seminorm).
ConvergenceReport run_sweep(const SweepDescriptor& d);

/// Least-squares slope of log(error) against log(parameter); rows with error
/// below 1e-12 are discarded as floating-point floor.
double fit_log_slope(const std::vector<SweepRow>& rows);

enum class RateAxis {
    RefinementCount,  // parameter n grows, error ~ n^{-rate}
    StepSize,         // parameter t shrinks, error ~ t^{rate}
};

/// Convergence order with the sign convention of the sweep's parameter axis.
double fit_rate(const std::vector<SweepRow>& rows, RateAxis axis);

}  // namespace diracb
