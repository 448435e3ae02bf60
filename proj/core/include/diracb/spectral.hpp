#pragma once

#include "diracb/section.hpp"

namespace diracb {

/// Germ of a normalized weakly grouplike element at a base point: the witness
/// is a single-term section f·delta_h whose coefficient is exactly 1 on the
/// cube base±r_norm.
struct ArrowGerm {
    Vec base;
    DiracSection witness;
    double r_norm = 0.0;
};

struct GermBattery {
    std::vector<ScalarExpr> funcs;                            // over R^{l+k}
    std::vector<std::pair<ScalarExpr, ScalarExpr>> pairs;     // for grouplike tests
};

/// Witness f·delta_h with f a plateau == 1 on base±r_norm (0 outside 2·r_norm).
ArrowGerm make_arrow(GroupoidPtr G, std::span<const double> x, std::span<const double> h,
                     double r_norm);

/// Finite-radius, finite-battery surrogate for germ equality: for every radius
/// r the localized difference plateau(x,r,2r)·(w1-w2) stays below tol on the
/// battery near x. Throws on base-point mismatch.
bool germ_equal(const ArrowGerm& a, const ArrowGerm& b, std::span<const double> radii,
                std::span<const ScalarExpr> battery, double tol);

/// Delta_x(xi) = xi (x) xi and eps_x(xi) = 1, checked through localized pairings.
bool is_grouplike(const ArrowGerm& g, std::span<const std::pair<ScalarExpr, ScalarExpr>> battery,
                  double tol);

Vec germ_target(const ArrowGerm& g);

/// Source point, recovered algebraically: T_a(f) = eps(S(f·a)) applied to
/// probes normalized at the base must reproduce the probe values at the
/// candidate x·h; throws if the probe verification fails.
Vec germ_source(const ArrowGerm& g, double tol = 1e-9);

/// a|_y b|_x = (ab)|_y with the witness convolved and r_norm shrunk to the
/// largest sampled radius on which the coefficient still evaluates to 1.
ArrowGerm germ_compose(const ArrowGerm& a, const ArrowGerm& b, double tol = 1e-9);

/// a|_y^{-1} = S(a)|_x.
ArrowGerm germ_inverse(const ArrowGerm& g, double tol = 1e-9);

/// Theta(germ)(F) = witness(F)(base); F(x,h) for normalized witnesses.
Complex theta_character(const ArrowGerm& g, const ScalarExpr& F);

struct RoundTripSample {
    Arrow arrow;
    Vec second;  // group element for the composition check
};

struct RoundTripReport {
    int samples = 0;
    double max_target_dev = 0.0;
    double max_source_dev = 0.0;
    int compose_failures = 0;
    int inverse_failures = 0;
    int grouplike_failures = 0;
    int corrupted_accepted = 0;  // scaled witnesses that is_grouplike failed to reject
    bool passed(double tol) const {
        return max_target_dev <= tol && max_source_dev <= tol && compose_failures == 0 &&
               inverse_failures == 0 && grouplike_failures == 0 && corrupted_accepted == 0;
    }
};

/// Target/source/compose/inverse of make_arrow germs against the groupoid
/// structure maps, plus grouplike checks and corrupted-witness rejection.
RoundTripReport reconstruct_round_trip(GroupoidPtr G, std::span<const RoundTripSample> samples,
                                       const GermBattery& battery, double r_norm, double tol);

}  // namespace diracb
