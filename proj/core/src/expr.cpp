#include "diracb/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace diracb {

namespace {

// Exponent cutoff: exp(z) for z < -700 underflows; primitives treat that
// region as exact zero so guarded rationals never meet it.
constexpr double kExpCutoff = 700.0;

// Band-coordinate clamp thresholds matching the cutoff above.
// Bump partner: 1/(u^2-1) = -1/(4t(1-t)) < -700  <=>  t(1-t) < 1/2800.
const double kBumpClampT = 0.5 * (1.0 - std::sqrt(1.0 - 4.0 / (4.0 * kExpCutoff)));
// Plateau partner: exp(-1/s) with s the distance to a band end.
const double kPlateauClampT = 1.0 / kExpCutoff;

double poly_eval(const std::vector<double>& c, double t) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * t + c[i];
    return v;
}

std::vector<double> poly_add(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

std::vector<double> poly_scale(std::vector<double> a, double s) {
    for (double& c : a) c *= s;
    return a;
}

std::vector<double> poly_deriv(const std::vector<double>& a) {
    if (a.size() <= 1) return {0.0};
    std::vector<double> r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * double(i);
    return r;
}

NodePtr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

NodePtr const_node(Complex v) {
    ExprNode n;
    n.op = Op::Const;
    n.value = v;
    return make_node(std::move(n));
}

bool is_const(const NodePtr& n, Complex v) {
    return n->op == Op::Const && n->value == v;
}

bool is_zero_node(const NodePtr& n) { return is_const(n, Complex(0.0, 0.0)); }
bool is_one_node(const NodePtr& n) { return is_const(n, Complex(1.0, 0.0)); }

NodePtr add_nodes(std::vector<NodePtr> kids) {
    std::vector<NodePtr> flat;
    Complex c(0.0, 0.0);
    for (auto& k : kids) {
        if (k->op == Op::Const) {
            c += k->value;
        } else if (k->op == Op::Add) {
            for (auto& g : k->kids) {
                if (g->op == Op::Const)
                    c += g->value;
                else
                    flat.push_back(g);
            }
        } else {
            flat.push_back(std::move(k));
        }
    }
    if (c != Complex(0.0, 0.0) || flat.empty()) flat.push_back(const_node(c));
    if (flat.size() == 1) return flat[0];
    ExprNode n;
    n.op = Op::Add;
    n.kids = std::move(flat);
    return make_node(std::move(n));
}

NodePtr mul_nodes(std::vector<NodePtr> kids) {
    std::vector<NodePtr> flat;
    Complex c(1.0, 0.0);
    for (auto& k : kids) {
        if (k->op == Op::Const) {
            c *= k->value;
        } else if (k->op == Op::Mul) {
            for (auto& g : k->kids) {
                if (g->op == Op::Const)
                    c *= g->value;
                else
                    flat.push_back(g);
            }
        } else {
            flat.push_back(std::move(k));
        }
    }
    if (c == Complex(0.0, 0.0)) return const_node(c);
    if (c != Complex(1.0, 0.0) || flat.empty()) flat.insert(flat.begin(), const_node(c));
    if (flat.size() == 1) return flat[0];
    ExprNode n;
    n.op = Op::Mul;
    n.kids = std::move(flat);
    return make_node(std::move(n));
}

NodePtr neg_node(NodePtr k) {
    if (k->op == Op::Const) return const_node(-k->value);
    if (k->op == Op::Neg) return k->kids[0];
    ExprNode n;
    n.op = Op::Neg;
    n.kids.push_back(std::move(k));
    return make_node(std::move(n));
}

NodePtr unary_node(Op op, NodePtr k) {
    if (k->op == Op::Const) {
        switch (op) {
            case Op::Exp: return const_node(std::exp(k->value));
            case Op::Sin: return const_node(std::sin(k->value));
            case Op::Cos: return const_node(std::cos(k->value));
            default: break;
        }
    }
    ExprNode n;
    n.op = op;
    n.kids.push_back(std::move(k));
    return make_node(std::move(n));
}

NodePtr pow_node(NodePtr k, int e) {
    if (e == 0) return const_node(Complex(1.0, 0.0));
    if (e == 1) return k;
    if (k->op == Op::Const) {
        if (e > 0) return const_node(std::pow(k->value, e));
        if (k->value == Complex(0.0, 0.0)) return const_node(Complex(0.0, 0.0));
        return const_node(std::pow(k->value, e));
    }
    ExprNode n;
    n.op = Op::Pow;
    n.exponent = e;
    n.kids.push_back(std::move(k));
    return make_node(std::move(n));
}

NodePtr guard_node(NodePtr arg, double lo, double hi, double clamp_t, std::vector<double> num,
                   double den_scale, int den_a, int den_b) {
    ExprNode n;
    n.op = Op::Guard;
    n.kids.push_back(std::move(arg));
    n.lo = lo;
    n.hi = hi;
    n.clamp_t = clamp_t;
    n.num = std::move(num);
    n.den_scale = den_scale;
    n.den_a = den_a;
    n.den_b = den_b;
    return make_node(std::move(n));
}

double eval_real(const ExprNode* n, const double* p, int dim);

Complex eval_node(const ExprNode* n, const double* p, int dim) {
    switch (n->op) {
        case Op::Const: return n->value;
        case Op::Coord: return Complex(p[n->index], 0.0);
        case Op::Add: {
            Complex s(0.0, 0.0);
            for (auto& k : n->kids) s += eval_node(k.get(), p, dim);
            return s;
        }
        case Op::Mul: {
            Complex s(1.0, 0.0);
            for (auto& k : n->kids) {
                s *= eval_node(k.get(), p, dim);
                if (s == Complex(0.0, 0.0)) return s;
            }
            return s;
        }
        case Op::Neg: return -eval_node(n->kids[0].get(), p, dim);
        case Op::Pow: {
            Complex b = eval_node(n->kids[0].get(), p, dim);
            if (n->exponent < 0 && b == Complex(0.0, 0.0)) return Complex(0.0, 0.0);
            return std::pow(b, n->exponent);
        }
        case Op::Exp: return std::exp(eval_node(n->kids[0].get(), p, dim));
        case Op::Sin: return std::sin(eval_node(n->kids[0].get(), p, dim));
        case Op::Cos: return std::cos(eval_node(n->kids[0].get(), p, dim));
        case Op::Bump:
        case Op::Plateau:
        case Op::Guard: return Complex(eval_real(n, p, dim), 0.0);
    }
    return Complex(0.0, 0.0);
}

// exp(-1/s) continued by 0, with the underflow clamp.
double ramp(double s) {
    if (s <= 1.0 / kExpCutoff) return 0.0;
    return std::exp(-1.0 / s);
}

double eval_real(const ExprNode* n, const double* p, int dim) {
    const double y = eval_node(n->kids[0].get(), p, dim).real();
    switch (n->op) {
        case Op::Bump: {
            const double u = (y - n->center) / n->radius;
            const double w = 1.0 - u * u;  // positive inside the support
            if (w <= 1.0 / kExpCutoff) return 0.0;
            return std::exp(-1.0 / w);
        }
        case Op::Plateau: {
            const double d = std::abs(y - n->center);
            if (d <= n->inner) return 1.0;
            if (d >= n->outer) return 0.0;
            const double s = (n->outer - d) / (n->outer - n->inner);  // 1 at inner, 0 at outer
            const double a = ramp(s);
            const double b = ramp(1.0 - s);
            if (a == 0.0) return 0.0;
            if (b == 0.0) return 1.0;
            return a / (a + b);
        }
        case Op::Guard: {
            const double w = n->hi - n->lo;
            const double t = (y - n->lo) / w;
            if (t <= n->clamp_t || t >= 1.0 - n->clamp_t) return 0.0;
            const double q =
                n->den_scale * std::pow(t, n->den_a) * std::pow(1.0 - t, n->den_b);
            return poly_eval(n->num, t) / q;
        }
        default: break;
    }
    return 0.0;
}

NodePtr derive_node(const NodePtr& n, int i);

NodePtr derive_kid(const NodePtr& n, int i) { return derive_node(n->kids[0], i); }

NodePtr derive_node(const NodePtr& n, int i) {
    switch (n->op) {
        case Op::Const: return const_node(Complex(0.0, 0.0));
        case Op::Coord: return const_node(Complex(n->index == i ? 1.0 : 0.0, 0.0));
        case Op::Add: {
            std::vector<NodePtr> parts;
            parts.reserve(n->kids.size());
            for (auto& k : n->kids) parts.push_back(derive_node(k, i));
            return add_nodes(std::move(parts));
        }
        case Op::Mul: {
            std::vector<NodePtr> parts;
            for (std::size_t j = 0; j < n->kids.size(); ++j) {
                NodePtr dj = derive_node(n->kids[j], i);
                if (is_zero_node(dj)) continue;
                std::vector<NodePtr> fac;
                fac.reserve(n->kids.size());
                for (std::size_t m = 0; m < n->kids.size(); ++m)
                    fac.push_back(m == j ? dj : n->kids[m]);
                parts.push_back(mul_nodes(std::move(fac)));
            }
            return add_nodes(std::move(parts));
        }
        case Op::Neg: return neg_node(derive_kid(n, i));
        case Op::Pow: {
            NodePtr d = derive_kid(n, i);
            if (is_zero_node(d)) return d;
            return mul_nodes({const_node(Complex(double(n->exponent), 0.0)),
                              pow_node(n->kids[0], n->exponent - 1), std::move(d)});
        }
        case Op::Exp: {
            NodePtr d = derive_kid(n, i);
            if (is_zero_node(d)) return d;
            return mul_nodes({n, std::move(d)});
        }
        case Op::Sin: {
            NodePtr d = derive_kid(n, i);
            if (is_zero_node(d)) return d;
            return mul_nodes({unary_node(Op::Cos, n->kids[0]), std::move(d)});
        }
        case Op::Cos: {
            NodePtr d = derive_kid(n, i);
            if (is_zero_node(d)) return d;
            return neg_node(mul_nodes({unary_node(Op::Sin, n->kids[0]), std::move(d)}));
        }
        case Op::Bump: {
            NodePtr d = derive_kid(n, i);
            if (is_zero_node(d)) return d;
            // dB/dy = B(y) * (-2u/(u^2-1)^2)/r; in the band coordinate t with
            // u = 2t-1: num = 2-4t, den = r*(4t(1-t))^2 = 16r t^2(1-t)^2.
            const double r = n->radius;
            NodePtr g = guard_node(n->kids[0], n->center - r, n->center + r, kBumpClampT,
                                   {2.0, -4.0}, 16.0 * r, 2, 2);
            return mul_nodes({std::move(g), n, std::move(d)});
        }
        case Op::Plateau: {
            NodePtr d = derive_kid(n, i);
            if (is_zero_node(d)) return d;
            // dP/dy = (G_left + G_right) * P * (1-P); on each transition band
            // sigma'(t) = R(t)*sigma(1-sigma) with R(t) = ((1-t)^2+t^2)/(t^2(1-t)^2).
            const double w = n->outer - n->inner;
            std::vector<double> rn = {1.0, -2.0, 2.0};
            NodePtr gl = guard_node(n->kids[0], n->center - n->outer, n->center - n->inner,
                                    kPlateauClampT, poly_scale(rn, 1.0 / w), 1.0, 2, 2);
            NodePtr gr = guard_node(n->kids[0], n->center + n->inner, n->center + n->outer,
                                    kPlateauClampT, poly_scale(rn, -1.0 / w), 1.0, 2, 2);
            NodePtr one_minus = add_nodes({const_node(Complex(1.0, 0.0)), neg_node(n)});
            return mul_nodes({add_nodes({std::move(gl), std::move(gr)}), n, std::move(one_minus),
                              std::move(d)});
        }
        case Op::Guard: {
            NodePtr d = derive_kid(n, i);
            if (is_zero_node(d)) return d;
            // With Q = c t^a (1-t)^b:
            // (P/Q)' = [P'·t(1-t) - P·(a(1-t) - b t)] / (c t^{a+1}(1-t)^{b+1}) / (hi-lo)
            std::vector<double> t_one_minus_t = {0.0, 1.0, -1.0};  // t - t^2
            // a(1-t) - b t = a - (a+b) t
            std::vector<double> lin = {double(n->den_a), -double(n->den_a) - double(n->den_b)};
            std::vector<double> pn =
                poly_add(poly_mul(poly_deriv(n->num), t_one_minus_t),
                         poly_scale(poly_mul(n->num, lin), -1.0));
            pn = poly_scale(std::move(pn), 1.0 / (n->hi - n->lo));
            NodePtr g = guard_node(n->kids[0], n->lo, n->hi, n->clamp_t, std::move(pn),
                                   n->den_scale, n->den_a + 1, n->den_b + 1);
            return mul_nodes({std::move(g), std::move(d)});
        }
    }
    return const_node(Complex(0.0, 0.0));
}

NodePtr substitute_node(const NodePtr& n, std::span<const ScalarExpr> map) {
    switch (n->op) {
        case Op::Const: return n;
        case Op::Coord: return map[n->index].root();
        case Op::Add:
        case Op::Mul: {
            std::vector<NodePtr> kids;
            kids.reserve(n->kids.size());
            for (auto& k : n->kids) kids.push_back(substitute_node(k, map));
            return n->op == Op::Add ? add_nodes(std::move(kids)) : mul_nodes(std::move(kids));
        }
        case Op::Neg: return neg_node(substitute_node(n->kids[0], map));
        case Op::Pow: return pow_node(substitute_node(n->kids[0], map), n->exponent);
        case Op::Exp:
        case Op::Sin:
        case Op::Cos: return unary_node(n->op, substitute_node(n->kids[0], map));
        case Op::Bump:
        case Op::Plateau:
        case Op::Guard: {
            ExprNode m = *n;
            m.kids = {substitute_node(n->kids[0], map)};
            return make_node(std::move(m));
        }
    }
    return n;
}

NodePtr conjugate_node(const NodePtr& n) {
    if (n->op == Op::Const) return const_node(std::conj(n->value));
    if (n->kids.empty()) return n;
    ExprNode m = *n;
    m.kids.clear();
    for (auto& k : n->kids) m.kids.push_back(conjugate_node(k));
    return make_node(std::move(m));
}

void count_nodes(const ExprNode* n, std::size_t& c) {
    ++c;
    for (auto& k : n->kids) count_nodes(k.get(), c);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void print_node(const ExprNode* n, std::string& out) {
    switch (n->op) {
        case Op::Const:
            if (n->value.imag() == 0.0) {
                out += fmt_double(n->value.real());
            } else {
                out += "(complex " + fmt_double(n->value.real()) + " " +
                       fmt_double(n->value.imag()) + ")";
            }
            return;
        case Op::Coord:
            out += "x" + std::to_string(n->index);
            return;
        case Op::Add:
        case Op::Mul: {
            out += n->op == Op::Add ? "(+" : "(*";
            for (auto& k : n->kids) {
                out += ' ';
                print_node(k.get(), out);
            }
            out += ')';
            return;
        }
        case Op::Neg:
            out += "(neg ";
            print_node(n->kids[0].get(), out);
            out += ')';
            return;
        case Op::Pow:
            out += "(pow ";
            print_node(n->kids[0].get(), out);
            out += ' ' + std::to_string(n->exponent) + ')';
            return;
        case Op::Exp:
        case Op::Sin:
        case Op::Cos:
            out += n->op == Op::Exp ? "(exp " : (n->op == Op::Sin ? "(sin " : "(cos ");
            print_node(n->kids[0].get(), out);
            out += ')';
            return;
        case Op::Bump:
            out += "(bump ";
            print_node(n->kids[0].get(), out);
            out += ' ' + fmt_double(n->center) + ' ' + fmt_double(n->radius) + ')';
            return;
        case Op::Plateau:
            out += "(plateau ";
            print_node(n->kids[0].get(), out);
            out += ' ' + fmt_double(n->center) + ' ' + fmt_double(n->inner) + ' ' +
                   fmt_double(n->outer) + ')';
            return;
        case Op::Guard: {
            out += "(guard ";
            print_node(n->kids[0].get(), out);
            out += ' ' + fmt_double(n->lo) + ' ' + fmt_double(n->hi) + ' ' + fmt_double(n->clamp_t);
            out += " (p";
            for (double c : n->num) out += ' ' + fmt_double(c);
            out += ") " + fmt_double(n->den_scale) + ' ' + std::to_string(n->den_a) + ' ' +
                   std::to_string(n->den_b) + ')';
            return;
        }
    }
}

}  // namespace

Box::Box(std::vector<std::array<double, 2>> a) : axes(std::move(a)) {
    for (auto& iv : axes) {
        if (!(iv[0] <= iv[1]) || !std::isfinite(iv[0]) || !std::isfinite(iv[1]))
            throw std::invalid_argument("Box: invalid interval");
    }
}

Box Box::cube(int dim, double lo, double hi) {
    std::vector<std::array<double, 2>> a(dim, {lo, hi});
    return Box(std::move(a));
}

Box Box::centered(std::span<const double> center, double half_width) {
    std::vector<std::array<double, 2>> a;
    a.reserve(center.size());
    for (double c : center) a.push_back({c - half_width, c + half_width});
    return Box(std::move(a));
}

bool Box::contains(std::span<const double> p) const {
    for (std::size_t i = 0; i < axes.size(); ++i)
        if (p[i] < axes[i][0] || p[i] > axes[i][1]) return false;
    return true;
}

std::vector<double> Box::center() const {
    std::vector<double> c(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) c[i] = 0.5 * (axes[i][0] + axes[i][1]);
    return c;
}

double Box::max_half_width() const {
    double m = 0.0;
    for (std::size_t i = 0; i < axes.size(); ++i) m = std::max(m, half_width(int(i)));
    return m;
}

std::vector<std::vector<double>> Box::corners() const {
    std::vector<std::vector<double>> out;
    const int d = dim();
    out.reserve(std::size_t(1) << d);
    for (std::size_t mask = 0; mask < (std::size_t(1) << d); ++mask) {
        std::vector<double> p(d);
        for (int i = 0; i < d; ++i) p[i] = axes[i][(mask >> i) & 1];
        out.push_back(std::move(p));
    }
    return out;
}

Box Box::padded(double rel, double abs) const {
    Box b = *this;
    for (auto& iv : b.axes) {
        const double pad = rel * 0.5 * (iv[1] - iv[0]) + abs;
        iv[0] -= pad;
        iv[1] += pad;
    }
    return b;
}

Box Box::hull(const Box& a, const Box& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("Box::hull: dimension mismatch");
    Box r = a;
    for (int i = 0; i < a.dim(); ++i) {
        r.axes[i][0] = std::min(a.axes[i][0], b.axes[i][0]);
        r.axes[i][1] = std::max(a.axes[i][1], b.axes[i][1]);
    }
    return r;
}

Box Box::bounding(const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw std::invalid_argument("Box::bounding: no points");
    const std::size_t d = points[0].size();
    std::vector<std::array<double, 2>> a(d);
    for (std::size_t i = 0; i < d; ++i) a[i] = {points[0][i], points[0][i]};
    for (const auto& p : points)
        for (std::size_t i = 0; i < d; ++i) {
            a[i][0] = std::min(a[i][0], p[i]);
            a[i][1] = std::max(a[i][1], p[i]);
        }
    return Box(std::move(a));
}

bool Box::subset_of(const Box& other, double slack) const {
    for (int i = 0; i < dim(); ++i)
        if (axes[i][0] < other.axes[i][0] - slack || axes[i][1] > other.axes[i][1] + slack)
            return false;
    return true;
}

bool ScalarExpr::is_zero() const { return root_ && is_zero_node(root_); }

bool ScalarExpr::is_constant() const { return root_ && root_->op == Op::Const; }

Complex ScalarExpr::constant_value() const {
    if (!is_constant()) throw std::logic_error("ScalarExpr: not a constant");
    return root_->value;
}

Complex ScalarExpr::eval(std::span<const double> p) const {
    if (static_cast<int>(p.size()) != dim_)
        throw std::invalid_argument("ScalarExpr::eval: point dimension mismatch");
    return eval_node(root_.get(), p.data(), dim_);
}

ScalarExpr ScalarExpr::derive(int coord) const {
    if (coord < 0 || coord >= dim_)
        throw std::invalid_argument("ScalarExpr::derive: coordinate out of range");
    return ScalarExpr(dim_, derive_node(root_, coord));
}

ScalarExpr ScalarExpr::multi_derive(std::span<const int> alpha) const {
    if (static_cast<int>(alpha.size()) != dim_)
        throw std::invalid_argument("ScalarExpr::multi_derive: multi-index length mismatch");
    ScalarExpr e = *this;
    for (int i = 0; i < dim_; ++i) {
        if (alpha[i] < 0) throw std::invalid_argument("ScalarExpr::multi_derive: negative order");
        for (int k = 0; k < alpha[i]; ++k) e = e.derive(i);
    }
    return e;
}

std::string ScalarExpr::to_string() const {
    std::string out;
    print_node(root_.get(), out);
    return out;
}

static void check_same_dim(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.ambient_dim() != b.ambient_dim())
        throw std::invalid_argument("ScalarExpr: ambient dimension mismatch");
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
    check_same_dim(a, b);
    return ScalarExpr(a.ambient_dim(), add_nodes({a.root(), b.root()}));
}

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
    check_same_dim(a, b);
    return ScalarExpr(a.ambient_dim(), mul_nodes({a.root(), b.root()}));
}

ScalarExpr operator-(const ScalarExpr& a) { return ScalarExpr(a.ambient_dim(), neg_node(a.root())); }

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return a + (-b); }

ScalarExpr constant(int dim, Complex v) { return ScalarExpr(dim, const_node(v)); }

ScalarExpr coordinate(int dim, int index) {
    if (index < 0 || index >= dim)
        throw std::invalid_argument("coordinate: index out of range");
    ExprNode n;
    n.op = Op::Coord;
    n.index = index;
    return ScalarExpr(dim, make_node(std::move(n)));
}

ScalarExpr pow_i(const ScalarExpr& e, int n) { return ScalarExpr(e.ambient_dim(), pow_node(e.root(), n)); }
ScalarExpr exp_of(const ScalarExpr& e) { return ScalarExpr(e.ambient_dim(), unary_node(Op::Exp, e.root())); }
ScalarExpr sin_of(const ScalarExpr& e) { return ScalarExpr(e.ambient_dim(), unary_node(Op::Sin, e.root())); }
ScalarExpr cos_of(const ScalarExpr& e) { return ScalarExpr(e.ambient_dim(), unary_node(Op::Cos, e.root())); }

ScalarExpr bump1d(int dim, int coord, double center, double radius) {
    if (radius <= 0.0) throw std::invalid_argument("bump1d: radius must be positive");
    ExprNode n;
    n.op = Op::Bump;
    n.kids.push_back(coordinate(dim, coord).root());
    n.center = center;
    n.radius = radius;
    return ScalarExpr(dim, make_node(std::move(n)));
}

ScalarExpr plateau1d(int dim, int coord, double center, double r_in, double r_out) {
    if (!(0.0 < r_in && r_in < r_out))
        throw std::invalid_argument("plateau1d: need 0 < r_in < r_out");
    ExprNode n;
    n.op = Op::Plateau;
    n.kids.push_back(coordinate(dim, coord).root());
    n.center = center;
    n.inner = r_in;
    n.outer = r_out;
    return ScalarExpr(dim, make_node(std::move(n)));
}

ScalarExpr bump(int dim, std::span<const double> center, double radius) {
    if (static_cast<int>(center.size()) != dim)
        throw std::invalid_argument("bump: center dimension mismatch");
    if (dim == 0) return constant(0, Complex(1.0, 0.0));
    std::vector<NodePtr> f;
    for (int i = 0; i < dim; ++i) f.push_back(bump1d(dim, i, center[i], radius).root());
    return ScalarExpr(dim, mul_nodes(std::move(f)));
}

ScalarExpr plateau(int dim, std::span<const double> center, double r_in, double r_out) {
    if (static_cast<int>(center.size()) != dim)
        throw std::invalid_argument("plateau: center dimension mismatch");
    if (dim == 0) return constant(0, Complex(1.0, 0.0));
    std::vector<NodePtr> f;
    for (int i = 0; i < dim; ++i) f.push_back(plateau1d(dim, i, center[i], r_in, r_out).root());
    return ScalarExpr(dim, mul_nodes(std::move(f)));
}

ScalarExpr plateau_on(const Box& box, double margin) {
    const int d = box.dim();
    if (d == 0) return constant(0, Complex(1.0, 0.0));
    if (margin <= 0.0) throw std::invalid_argument("plateau_on: margin must be positive");
    std::vector<NodePtr> f;
    const auto c = box.center();
    for (int i = 0; i < d; ++i) {
        const double r_in = box.half_width(i) + 0.25 * margin;
        f.push_back(plateau1d(d, i, c[i], r_in, r_in + margin).root());
    }
    return ScalarExpr(d, mul_nodes(std::move(f)));
}

ScalarExpr substitute(const ScalarExpr& e, std::span<const ScalarExpr> map) {
    if (static_cast<int>(map.size()) != e.ambient_dim())
        throw std::invalid_argument("substitute: map arity mismatch");
    int target = e.ambient_dim() == 0 ? 0 : map[0].ambient_dim();
    for (const auto& m : map)
        if (m.ambient_dim() != target)
            throw std::invalid_argument("substitute: inconsistent target dimension");
    if (e.ambient_dim() == 0) return ScalarExpr(0, e.root());
    return ScalarExpr(target, substitute_node(e.root(), map));
}

ScalarExpr shift_coords(const ScalarExpr& e, int offset, int new_dim) {
    std::vector<ScalarExpr> map;
    map.reserve(e.ambient_dim());
    for (int i = 0; i < e.ambient_dim(); ++i) map.push_back(coordinate(new_dim, i + offset));
    if (e.ambient_dim() == 0) return ScalarExpr(new_dim, e.root());
    return substitute(e, map);
}

ScalarExpr conjugate(const ScalarExpr& e) { return ScalarExpr(e.ambient_dim(), conjugate_node(e.root())); }

namespace {

// Per-axis interval tracking for structurally evident supports. A nullopt
// interval means the factor does not constrain that axis.
using AxisIv = std::vector<std::optional<std::array<double, 2>>>;

std::optional<AxisIv> support_node(const ExprNode* n, int dim) {
    auto unconstrained = [&] { return AxisIv(std::size_t(dim)); };
    switch (n->op) {
        case Op::Const:
            if (n->value == Complex(0.0, 0.0)) {
                auto z = AxisIv(std::size_t(dim));
                for (auto& iv : z) iv = {{0.0, 0.0}};
                return z;
            }
            return unconstrained();
        case Op::Bump:
        case Op::Plateau:
        case Op::Guard: {
            if (n->kids[0]->op != Op::Coord) return unconstrained();
            auto r = AxisIv(std::size_t(dim));
            double lo, hi;
            if (n->op == Op::Bump) {
                lo = n->center - n->radius;
                hi = n->center + n->radius;
            } else if (n->op == Op::Plateau) {
                lo = n->center - n->outer;
                hi = n->center + n->outer;
            } else {
                lo = n->lo;
                hi = n->hi;
            }
            r[n->kids[0]->index] = {{lo, hi}};
            return r;
        }
        case Op::Mul: {
            auto r = AxisIv(std::size_t(dim));
            for (auto& k : n->kids) {
                auto s = support_node(k.get(), dim);
                if (!s) return std::nullopt;
                for (int i = 0; i < dim; ++i) {
                    if (!(*s)[i]) continue;
                    if (!r[i]) {
                        r[i] = (*s)[i];
                    } else {
                        (*r[i])[0] = std::max((*r[i])[0], (*(*s)[i])[0]);
                        (*r[i])[1] = std::min((*r[i])[1], (*(*s)[i])[1]);
                        if ((*r[i])[0] > (*r[i])[1]) *r[i] = {{0.0, 0.0}};
                    }
                }
            }
            return r;
        }
        case Op::Add: {
            auto r = AxisIv(std::size_t(dim));
            bool first = true;
            for (auto& k : n->kids) {
                auto s = support_node(k.get(), dim);
                if (!s) return std::nullopt;
                if (first) {
                    r = *s;
                    first = false;
                } else {
                    for (int i = 0; i < dim; ++i) {
                        if (!r[i] || !(*s)[i]) {
                            r[i] = std::nullopt;
                        } else {
                            (*r[i])[0] = std::min((*r[i])[0], (*(*s)[i])[0]);
                            (*r[i])[1] = std::max((*r[i])[1], (*(*s)[i])[1]);
                        }
                    }
                }
            }
            return r;
        }
        case Op::Neg: return support_node(n->kids[0].get(), dim);
        default: return unconstrained();
    }
}

}  // namespace

std::optional<Box> structural_support(const ScalarExpr& e) {
    if (e.ambient_dim() == 0) return Box{};
    auto s = support_node(e.root().get(), e.ambient_dim());
    if (!s) return std::nullopt;
    std::vector<std::array<double, 2>> axes;
    for (auto& iv : *s) {
        if (!iv) return std::nullopt;  // unbounded axis
        axes.push_back(*iv);
    }
    return Box(std::move(axes));
}

std::size_t node_count(const ScalarExpr& e) {
    std::size_t c = 0;
    count_nodes(e.root().get(), c);
    return c;
}

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;
    int dim;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    std::string token() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
               s[pos] != '(' && s[pos] != ')')
            ++pos;
        if (start == pos) throw std::invalid_argument("parse_expr: expected token");
        return s.substr(start, pos - start);
    }

    void expect(char c) {
        skip_ws();
        if (pos >= s.size() || s[pos] != c)
            throw std::invalid_argument(std::string("parse_expr: expected '") + c + "'");
        ++pos;
    }

    bool peek_close() {
        skip_ws();
        return pos < s.size() && s[pos] == ')';
    }

    double number() { return std::stod(token()); }

    std::vector<double> poly() {
        expect('(');
        std::string head = token();
        if (head != "p") throw std::invalid_argument("parse_expr: expected (p ...)");
        std::vector<double> c;
        while (!peek_close()) c.push_back(number());
        expect(')');
        return c;
    }

    NodePtr expr() {
        skip_ws();
        if (pos >= s.size()) throw std::invalid_argument("parse_expr: unexpected end");
        if (s[pos] != '(') {
            std::string t = token();
            if (t.size() > 1 && t[0] == 'x' &&
                std::all_of(t.begin() + 1, t.end(), [](char c) { return std::isdigit(c); })) {
                int idx = std::stoi(t.substr(1));
                return coordinate(dim, idx).root();
            }
            return const_node(Complex(std::stod(t), 0.0));
        }
        expect('(');
        std::string head = token();
        NodePtr out;
        if (head == "+" || head == "*") {
            std::vector<NodePtr> kids;
            while (!peek_close()) kids.push_back(expr());
            out = head == "+" ? add_nodes(std::move(kids)) : mul_nodes(std::move(kids));
        } else if (head == "neg") {
            out = neg_node(expr());
        } else if (head == "pow") {
            NodePtr k = expr();
            out = pow_node(std::move(k), int(number()));
        } else if (head == "exp" || head == "sin" || head == "cos") {
            Op op = head == "exp" ? Op::Exp : (head == "sin" ? Op::Sin : Op::Cos);
            out = unary_node(op, expr());
        } else if (head == "complex") {
            double re = number(), im = number();
            out = const_node(Complex(re, im));
        } else if (head == "bump") {
            NodePtr arg = expr();
            double c = number(), r = number();
            if (r <= 0.0) throw std::invalid_argument("parse_expr: bump radius must be positive");
            ExprNode n;
            n.op = Op::Bump;
            n.kids.push_back(std::move(arg));
            n.center = c;
            n.radius = r;
            out = make_node(std::move(n));
        } else if (head == "plateau") {
            NodePtr arg = expr();
            double c = number(), ri = number(), ro = number();
            if (!(0.0 < ri && ri < ro))
                throw std::invalid_argument("parse_expr: plateau needs 0 < r_in < r_out");
            ExprNode n;
            n.op = Op::Plateau;
            n.kids.push_back(std::move(arg));
            n.center = c;
            n.inner = ri;
            n.outer = ro;
            out = make_node(std::move(n));
        } else if (head == "guard") {
            NodePtr arg = expr();
            double lo = number(), hi = number(), clamp = number();
            std::vector<double> num = poly();
            double scale = number();
            int a = int(number()), b = int(number());
            out = guard_node(std::move(arg), lo, hi, clamp, std::move(num), scale, a, b);
        } else {
            throw std::invalid_argument("parse_expr: unknown operator '" + head + "'");
        }
        expect(')');
        return out;
    }
};

}  // namespace

ScalarExpr parse_expr(const std::string& text, int dim) {
    Parser p{text, 0, dim};
    NodePtr root = p.expr();
    p.skip_ws();
    if (p.pos != text.size()) throw std::invalid_argument("parse_expr: trailing input");
    return ScalarExpr(dim, std::move(root));
}

}  // namespace diracb
