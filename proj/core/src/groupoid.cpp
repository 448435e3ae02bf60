#include "diracb/groupoid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace diracb {

namespace {

Vec to_vec(std::span<const double> s) { return Vec(s.begin(), s.end()); }

double wrap_angle(double t) {
    const double two_pi = 2.0 * std::numbers::pi;
    double w = t - two_pi * std::floor((t + std::numbers::pi) / two_pi);
    if (w >= std::numbers::pi) w -= two_pi;  // land in [-pi, pi)
    return w;
}

LieGroupDescriptor translation_group(int k) {
    LieGroupDescriptor g;
    g.name = "R^" + std::to_string(k);
    g.param_dim = k;
    g.multiply = [k](std::span<const double> a, std::span<const double> b) {
        Vec r(k);
        for (int i = 0; i < k; ++i) r[i] = a[i] + b[i];
        return r;
    };
    g.invert = [k](std::span<const double> a) {
        Vec r(k);
        for (int i = 0; i < k; ++i) r[i] = -a[i];
        return r;
    };
    g.identity = Vec(k, 0.0);
    for (int i = 0; i < k; ++i)
        g.multiply_expr.push_back(coordinate(2 * k, i) + coordinate(2 * k, k + i));
    for (int i = 0; i < k; ++i) g.invert_expr.push_back(-coordinate(k, i));
    g.canonicalize = [](std::span<const double> a) { return to_vec(a); };
    return g;
}

LieGroupDescriptor affine_group() {
    // (a,b)·(a',b') = (aa', a'b + b'), acting by x·(a,b) = ax + b; a > 0.
    LieGroupDescriptor g;
    g.name = "Aff+(1)";
    g.param_dim = 2;
    g.multiply = [](std::span<const double> p, std::span<const double> q) {
        return Vec{p[0] * q[0], q[0] * p[1] + q[1]};
    };
    g.invert = [](std::span<const double> p) { return Vec{1.0 / p[0], -p[1] / p[0]}; };
    g.identity = {1.0, 0.0};
    {
        ScalarExpr a = coordinate(4, 0), b = coordinate(4, 1);
        ScalarExpr a2 = coordinate(4, 2), b2 = coordinate(4, 3);
        g.multiply_expr = {a * a2, a2 * b + b2};
    }
    {
        ScalarExpr a = coordinate(2, 0), b = coordinate(2, 1);
        g.invert_expr = {pow_i(a, -1), -(b * pow_i(a, -1))};
    }
    g.canonicalize = [](std::span<const double> p) { return to_vec(p); };
    return g;
}

LieGroupDescriptor rotation_group() {
    LieGroupDescriptor g;
    g.name = "SO(2)";
    g.param_dim = 1;
    g.multiply = [](std::span<const double> a, std::span<const double> b) {
        return Vec{wrap_angle(a[0] + b[0])};
    };
    g.invert = [](std::span<const double> a) { return Vec{wrap_angle(-a[0])}; };
    g.identity = {0.0};
    g.multiply_expr = {coordinate(2, 0) + coordinate(2, 1)};
    g.invert_expr = {-coordinate(1, 0)};
    g.canonicalize = [](std::span<const double> a) { return Vec{wrap_angle(a[0])}; };
    return g;
}

GroupoidPtr make_translation(int k) {
    const int l = k;
    std::vector<ScalarExpr> act;
    for (int i = 0; i < l; ++i)
        act.push_back(coordinate(l + k, i) + coordinate(l + k, l + i));
    return std::make_shared<const ActionGroupoid>("translation" + std::to_string(k), l,
                                                  translation_group(k), std::move(act));
}

GroupoidPtr make_bundle() {
    // Trivial action of R on R: a bundle of groups over the central base ring.
    std::vector<ScalarExpr> act = {coordinate(2, 0)};
    return std::make_shared<const ActionGroupoid>("bundle1", 1, translation_group(1),
                                                  std::move(act));
}

GroupoidPtr make_aff_point() {
    return std::make_shared<const ActionGroupoid>("aff_point", 0, affine_group(),
                                                  std::vector<ScalarExpr>{});
}

GroupoidPtr make_aff_line() {
    ScalarExpr x = coordinate(3, 0), a = coordinate(3, 1), b = coordinate(3, 2);
    std::vector<ScalarExpr> act = {a * x + b};
    return std::make_shared<const ActionGroupoid>("aff_line", 1, affine_group(), std::move(act));
}

GroupoidPtr make_rotation2() {
    ScalarExpr x = coordinate(3, 0), y = coordinate(3, 1), th = coordinate(3, 2);
    std::vector<ScalarExpr> act = {x * cos_of(th) - y * sin_of(th),
                                   x * sin_of(th) + y * cos_of(th)};
    return std::make_shared<const ActionGroupoid>("rotation2", 2, rotation_group(),
                                                  std::move(act));
}

GroupoidPtr make_point_fiber(int k) {
    // Point base with H = (R^k,+): Dirac(R^k) for combs and stencils.
    return std::make_shared<const ActionGroupoid>("point_r" + std::to_string(k), 0,
                                                  translation_group(k),
                                                  std::vector<ScalarExpr>{});
}

}  // namespace

ActionGroupoid::ActionGroupoid(std::string name, int base_dim, LieGroupDescriptor group,
                               std::vector<ScalarExpr> action_expr)
    : name_(std::move(name)),
      base_dim_(base_dim),
      group_(std::move(group)),
      action_expr_(std::move(action_expr)) {
    if (static_cast<int>(action_expr_.size()) != base_dim_)
        throw std::invalid_argument("ActionGroupoid: action arity mismatch");
    for (const auto& c : action_expr_)
        if (c.ambient_dim() != total_dim())
            throw std::invalid_argument("ActionGroupoid: action component dimension mismatch");
}

Vec ActionGroupoid::act(std::span<const double> x, std::span<const double> h) const {
    if (static_cast<int>(x.size()) != base_dim_ ||
        static_cast<int>(h.size()) != group_.param_dim)
        throw std::invalid_argument("ActionGroupoid::act: dimension mismatch");
    Vec p(x.begin(), x.end());
    p.insert(p.end(), h.begin(), h.end());
    Vec out(base_dim_);
    for (int i = 0; i < base_dim_; ++i) out[i] = action_expr_[i].eval(p).real();
    return out;
}

Arrow ActionGroupoid::unit(std::span<const double> x) const {
    return Arrow{to_vec(x), group_.identity};
}

Arrow ActionGroupoid::inverse(const Arrow& g) const {
    return Arrow{source(g), canonical(group_.invert(g.group))};
}

Arrow ActionGroupoid::compose(const Arrow& g1, const Arrow& g2, double tol) const {
    const Vec s = source(g1);
    double gap = 0.0;
    for (int i = 0; i < base_dim_; ++i) gap = std::max(gap, std::abs(s[i] - g2.base[i]));
    if (gap > tol) {
        std::ostringstream os;
        os << "ActionGroupoid::compose: arrows not composable (gap " << gap << " > tol " << tol
           << ")";
        throw std::invalid_argument(os.str());
    }
    return Arrow{g1.base, canonical(group_.multiply(g1.group, g2.group))};
}

ScalarExpr ActionGroupoid::pullback(const ScalarExpr& f, std::span<const double> h) const {
    if (f.ambient_dim() != base_dim_)
        throw std::invalid_argument("ActionGroupoid::pullback: function dimension mismatch");
    if (base_dim_ == 0) return f;
    // Freeze the group coordinates of the action at h.
    std::vector<ScalarExpr> frozen;
    frozen.reserve(total_dim());
    for (int i = 0; i < base_dim_; ++i) frozen.push_back(coordinate(base_dim_, i));
    for (int i = 0; i < group_.param_dim; ++i)
        frozen.push_back(constant(base_dim_, Complex(h[i], 0.0)));
    std::vector<ScalarExpr> map;
    map.reserve(base_dim_);
    for (int i = 0; i < base_dim_; ++i) map.push_back(substitute(action_expr_[i], frozen));
    return substitute(f, map);
}

Box ActionGroupoid::transform_box(const Box& box, std::span<const double> h) const {
    if (base_dim_ == 0) return Box{};
    std::vector<std::vector<double>> mapped;
    for (const auto& corner : box.corners()) mapped.push_back(act(corner, h));
    return Box::bounding(mapped).padded(0.10, 1e-12);
}

Vec ActionGroupoid::canonical(std::span<const double> h) const {
    return group_.canonicalize(h);
}

const std::vector<GroupoidPtr>& groupoid_catalog() {
    static const std::vector<GroupoidPtr> catalog = {
        make_translation(1), make_translation(2), make_bundle(),    make_aff_point(),
        make_aff_line(),     make_rotation2(),    make_point_fiber(1), make_point_fiber(2),
    };
    return catalog;
}

GroupoidPtr find_groupoid(const std::string& name) {
    for (const auto& g : groupoid_catalog())
        if (g->name() == name) return g;
    throw std::invalid_argument("unknown groupoid: " + name);
}

}  // namespace diracb
