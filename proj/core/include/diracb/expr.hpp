#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace diracb {

using Complex = std::complex<double>;

/// Closed axis-aligned box, one [lo,hi] interval per coordinate.
struct Box {
    std::vector<std::array<double, 2>> axes;

    Box() = default;
    explicit Box(std::vector<std::array<double, 2>> a);
    static Box cube(int dim, double lo, double hi);
    static Box centered(std::span<const double> center, double half_width);

    int dim() const { return static_cast<int>(axes.size()); }
    bool contains(std::span<const double> p) const;
    std::vector<double> center() const;
    double half_width(int axis) const { return 0.5 * (axes[axis][1] - axes[axis][0]); }
    double max_half_width() const;
    /// Every corner point of the box (2^dim of them; a single empty point for dim 0).
    std::vector<std::vector<double>> corners() const;
    Box padded(double rel, double abs = 0.0) const;
    /// Smallest box containing both.
    static Box hull(const Box& a, const Box& b);
    static Box bounding(const std::vector<std::vector<double>>& points);
    bool subset_of(const Box& other, double slack = 0.0) const;
};

enum class Op : std::uint8_t {
    Const,
    Coord,
    Add,
    Mul,
    Neg,
    Pow,
    Exp,
    Sin,
    Cos,
    Bump,     // exp(1/(u^2-1)) on |u|<1, u = (arg-center)/radius, else 0
    Plateau,  // 1 on [center±inner], 0 outside [center±outer], smooth ratio transition
    Guard,    // rational(t) on the open band arg in (lo,hi), t = (arg-lo)/(hi-lo); 0 outside
};

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    Op op;
    Complex value{};            // Const
    int index = 0;              // Coord
    int exponent = 0;           // Pow (may be negative; z==0 evaluates to 0 then)
    std::vector<NodePtr> kids;  // Add/Mul operands; unary/primitive argument in kids[0]
    // 1-D primitive parameters:
    double center = 0.0, radius = 0.0;  // Bump
    double inner = 0.0, outer = 0.0;    // Plateau (uses center too)
    double lo = 0.0, hi = 0.0;          // Guard band
    double clamp_t = 0.0;               // Guard: zero the value within clamp_t of a band end
    // Guard rational num(t) / (den_scale * t^den_a * (1-t)^den_b), t the band
    // coordinate. The factored denominator keeps repeated differentiation
    // numerically stable (no expanded high-multiplicity roots).
    std::vector<double> num;
    double den_scale = 1.0;
    int den_a = 0, den_b = 0;
};

/// Immutable smooth function on R^d as an expression tree. All operations are
/// pure; instances may be shared freely across threads.
class ScalarExpr {
public:
    ScalarExpr() = default;
    ScalarExpr(int dim, NodePtr root) : dim_(dim), root_(std::move(root)) {}

    int ambient_dim() const { return dim_; }
    const NodePtr& root() const { return root_; }
    bool is_zero() const;  // structurally the constant 0
    bool is_constant() const;
    Complex constant_value() const;

    Complex eval(std::span<const double> p) const;
    Complex eval(std::initializer_list<double> p) const {
        return eval(std::span<const double>(p.begin(), p.size()));
    }

    ScalarExpr derive(int coord) const;
    ScalarExpr multi_derive(std::span<const int> alpha) const;

    std::string to_string() const;

    // Pointwise algebra (dims must agree).
    friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator-(const ScalarExpr& a);
    friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);

private:
    int dim_ = 0;
    NodePtr root_;
};

// Constructors.
ScalarExpr constant(int dim, Complex v);
ScalarExpr coordinate(int dim, int index);
ScalarExpr pow_i(const ScalarExpr& e, int n);
ScalarExpr exp_of(const ScalarExpr& e);
ScalarExpr sin_of(const ScalarExpr& e);
ScalarExpr cos_of(const ScalarExpr& e);
ScalarExpr bump1d(int dim, int coord, double center, double radius);
ScalarExpr plateau1d(int dim, int coord, double center, double r_in, double r_out);

/// Product of per-coordinate bumps supported in the box center±radius.
ScalarExpr bump(int dim, std::span<const double> center, double radius);
/// Product of per-coordinate plateaus: exactly 1 on center±r_in, 0 outside center±r_out.
ScalarExpr plateau(int dim, std::span<const double> center, double r_in, double r_out);
/// Plateau that is exactly 1 on `box` (per-axis half widths; margin added outside).
ScalarExpr plateau_on(const Box& box, double margin);

/// Formal substitution: result(p) = e(map_0(p), ..., map_{d-1}(p)).
ScalarExpr substitute(const ScalarExpr& e, std::span<const ScalarExpr> map);
/// Same expression viewed on R^{new_dim}, coordinate i becoming i+offset.
ScalarExpr shift_coords(const ScalarExpr& e, int offset, int new_dim);
/// Complex-conjugated coefficients (valid for the real-argument grammar used here).
ScalarExpr conjugate(const ScalarExpr& e);

/// Declared support box when one is structurally evident (products/sums of
/// coordinate-aligned bumps/plateaus/guards); nullopt otherwise.
std::optional<Box> structural_support(const ScalarExpr& e);

/// Parse the canonical prefix text form, e.g. "(* x0 (bump x0 0 2))".
ScalarExpr parse_expr(const std::string& text, int dim);

std::size_t node_count(const ScalarExpr& e);

}  // namespace diracb
