#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "diracb/expr.hpp"

namespace diracb {

using Vec = std::vector<double>;

/// A Lie group in global parameters: callable multiplication/inverse plus the
/// same maps as expression tuples (multiply over R^{2k}: coords 0..k-1 the
/// left factor, k..2k-1 the right factor).
struct LieGroupDescriptor {
    std::string name;
    int param_dim = 0;
    std::function<Vec(std::span<const double>, std::span<const double>)> multiply;
    std::function<Vec(std::span<const double>)> invert;
    Vec identity;
    std::vector<ScalarExpr> multiply_expr;  // over R^{2k}
    std::vector<ScalarExpr> invert_expr;    // over R^{k}
    // Reduce parameters to the canonical representative (angle wrap etc.).
    std::function<Vec(std::span<const double>)> canonicalize;
};

struct Arrow {
    Vec base;   // x
    Vec group;  // h
};

/// Right action groupoid: base R^l, group H, arrows (x,h) with t(x,h)=x,
/// s(x,h)=x·h. Immutable; operations are pure.
class ActionGroupoid {
public:
    ActionGroupoid(std::string name, int base_dim, LieGroupDescriptor group,
                   std::vector<ScalarExpr> action_expr);

    const std::string& name() const { return name_; }
    int base_dim() const { return base_dim_; }
    int group_dim() const { return group_.param_dim; }
    int total_dim() const { return base_dim_ + group_.param_dim; }
    const LieGroupDescriptor& group() const { return group_; }
    const std::vector<ScalarExpr>& action_expr() const { return action_expr_; }

    Vec act(std::span<const double> x, std::span<const double> h) const;

    Vec target(const Arrow& g) const { return g.base; }
    Vec source(const Arrow& g) const { return act(g.base, g.group); }
    Arrow unit(std::span<const double> x) const;
    Arrow inverse(const Arrow& g) const;
    /// Requires |source(g1) - target(g2)|_inf <= tol.
    Arrow compose(const Arrow& g1, const Arrow& g2, double tol = 1e-9) const;

    /// (h f)(x) = f(x·h): substitute f through the action with h frozen.
    ScalarExpr pullback(const ScalarExpr& f, std::span<const double> h) const;
    /// Image of a base box under x -> x·h: bounding box of the mapped corners,
    /// padded 10% (exact for the affine catalog actions before padding).
    Box transform_box(const Box& box, std::span<const double> h) const;

    Vec canonical(std::span<const double> h) const;

private:
    std::string name_;
    int base_dim_;
    LieGroupDescriptor group_;
    std::vector<ScalarExpr> action_expr_;  // l components over R^{l+k}
};

using GroupoidPtr = std::shared_ptr<const ActionGroupoid>;

/// Built-in models, stable order.
const std::vector<GroupoidPtr>& groupoid_catalog();
GroupoidPtr find_groupoid(const std::string& name);

}  // namespace diracb
