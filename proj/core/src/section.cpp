#include "diracb/section.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diracb {

namespace {

bool atoms_close(const Vec& a, const Vec& b, double eps) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > eps) return false;
    return true;
}

bool atom_less(const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::optional<Box> box_intersect_or_first(const std::optional<Box>& a,
                                          const std::optional<Box>& b) {
    if (a && b) {
        Box r = *a;
        for (int i = 0; i < r.dim(); ++i) {
            r.axes[i][0] = std::max(r.axes[i][0], b->axes[i][0]);
            r.axes[i][1] = std::min(r.axes[i][1], b->axes[i][1]);
            if (r.axes[i][0] > r.axes[i][1]) r.axes[i] = {r.axes[i][0], r.axes[i][0]};
        }
        return r;
    }
    return a ? a : b;
}

std::optional<Box> box_union(const std::optional<Box>& a, const std::optional<Box>& b) {
    if (a && b) return Box::hull(*a, *b);
    return std::nullopt;
}

}  // namespace

DiracSection::DiracSection(GroupoidPtr groupoid, std::vector<SectionTerm> terms)
    : groupoid_(std::move(groupoid)) {
    if (!groupoid_) throw std::invalid_argument("DiracSection: null groupoid");
    const int l = groupoid_->base_dim();
    const int k = groupoid_->group_dim();
    for (auto& t : terms) {
        if (t.coef.expr.ambient_dim() != l)
            throw std::invalid_argument("DiracSection: coefficient dimension mismatch");
        if (static_cast<int>(t.atom.size()) != k)
            throw std::invalid_argument("DiracSection: atom dimension mismatch");
        t.atom = groupoid_->canonical(t.atom);
    }
    std::stable_sort(terms.begin(), terms.end(),
                     [](const SectionTerm& a, const SectionTerm& b) {
                         return atom_less(a.atom, b.atom);
                     });
    // Merge atoms within kAtomEps, drop structurally zero coefficients.
    for (auto& t : terms) {
        if (t.coef.expr.is_zero()) continue;
        if (!terms_.empty() && atoms_close(terms_.back().atom, t.atom, kAtomEps)) {
            terms_.back().coef.expr = terms_.back().coef.expr + t.coef.expr;
            terms_.back().coef.support =
                box_union(terms_.back().coef.support, t.coef.support);
        } else {
            terms_.push_back(std::move(t));
        }
    }
    std::erase_if(terms_, [](const SectionTerm& t) { return t.coef.expr.is_zero(); });
}

DiracSection DiracSection::zero(GroupoidPtr groupoid) {
    return DiracSection(std::move(groupoid), {});
}

DiracSection DiracSection::generator(GroupoidPtr groupoid, Coefficient f,
                                     std::span<const double> h) {
    std::vector<SectionTerm> t;
    t.push_back(SectionTerm{std::move(f), Vec(h.begin(), h.end())});
    return DiracSection(std::move(groupoid), std::move(t));
}

Complex DiracSection::apply(const ScalarExpr& F, std::span<const double> x) const {
    const int l = groupoid_->base_dim();
    if (static_cast<int>(x.size()) != l)
        throw std::invalid_argument("DiracSection::apply: base point dimension mismatch");
    if (F.ambient_dim() != groupoid_->total_dim())
        throw std::invalid_argument("DiracSection::apply: test function dimension mismatch");
    Complex out(0.0, 0.0);
    Vec p(groupoid_->total_dim());
    std::copy(x.begin(), x.end(), p.begin());
    for (const auto& t : terms_) {
        const Complex f = t.coef.expr.eval(x);
        if (f == Complex(0.0, 0.0)) continue;
        std::copy(t.atom.begin(), t.atom.end(), p.begin() + l);
        out += f * F.eval(p);
    }
    return out;
}

DiracSection operator+(const DiracSection& a, const DiracSection& b) {
    if (a.groupoid_ != b.groupoid_)
        throw std::invalid_argument("DiracSection: groupoid mismatch");
    std::vector<SectionTerm> terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return DiracSection(a.groupoid_, std::move(terms));
}

DiracSection operator-(const DiracSection& a, const DiracSection& b) {
    return a + b.scaled(Complex(-1.0, 0.0));
}

DiracSection DiracSection::scaled(Complex c) const {
    std::vector<SectionTerm> terms = terms_;
    const int l = groupoid_->base_dim();
    for (auto& t : terms) t.coef.expr = constant(l, c) * t.coef.expr;
    return DiracSection(groupoid_, std::move(terms));
}

DiracSection module_act(const Coefficient& f, const DiracSection& u) {
    const int l = u.groupoid()->base_dim();
    if (f.expr.ambient_dim() != l)
        throw std::invalid_argument("module_act: base function dimension mismatch");
    std::vector<SectionTerm> terms;
    for (const auto& t : u.terms()) {
        Coefficient c{f.expr * t.coef.expr, box_intersect_or_first(t.coef.support, f.support)};
        terms.push_back(SectionTerm{std::move(c), t.atom});
    }
    return DiracSection(u.groupoid(), std::move(terms));
}

DiracSection convolve(const DiracSection& u, const DiracSection& v) {
    if (u.groupoid() != v.groupoid())
        throw std::invalid_argument("convolve: groupoid mismatch");
    const auto& G = *u.groupoid();
    std::vector<SectionTerm> terms;
    for (const auto& a : u.terms()) {
        for (const auto& b : v.terms()) {
            ScalarExpr pulled = G.pullback(b.coef.expr, a.atom);
            std::optional<Box> pulled_box;
            if (b.coef.support) {
                // (h f)(x) = f(x·h) is supported where x·h lies in supp f, i.e.
                // the image of supp f under the inverse translation.
                pulled_box = G.transform_box(*b.coef.support, G.group().invert(a.atom));
            }
            Coefficient c{a.coef.expr * pulled,
                          box_intersect_or_first(a.coef.support, pulled_box)};
            terms.push_back(SectionTerm{std::move(c), G.group().multiply(a.atom, b.atom)});
        }
    }
    return DiracSection(u.groupoid(), std::move(terms));
}

Complex convolve_definitional(const DiracSection& u, const DiracSection& v, const ScalarExpr& F,
                              std::span<const double> x) {
    if (u.groupoid() != v.groupoid())
        throw std::invalid_argument("convolve_definitional: groupoid mismatch");
    const auto& G = *u.groupoid();
    const int l = G.base_dim();
    const int k = G.group_dim();
    const int d = l + k;
    if (F.ambient_dim() != d)
        throw std::invalid_argument("convolve_definitional: test function dimension mismatch");

    // Inner function g=(x,h) -> T''_{s(g)}(F o L_g) = sum_j f''_j(x·h) F(x, h·h'_j),
    // assembled symbolically over R^{l+k}.
    std::vector<ScalarExpr> inner_terms;
    for (const auto& b : v.terms()) {
        // f''_j o action, as a function of (x,h).
        ScalarExpr coef_part =
            l == 0 ? ScalarExpr(d, b.coef.expr.root()) : substitute(b.coef.expr, G.action_expr());

        // h -> h·h'_j via the group multiplication with the right factor frozen.
        std::vector<ScalarExpr> frozen;
        frozen.reserve(2 * k);
        for (int i = 0; i < k; ++i) frozen.push_back(coordinate(d, l + i));
        for (int i = 0; i < k; ++i) frozen.push_back(constant(d, Complex(b.atom[i], 0.0)));
        std::vector<ScalarExpr> arg;
        arg.reserve(d);
        for (int i = 0; i < l; ++i) arg.push_back(coordinate(d, i));
        for (int i = 0; i < k; ++i) arg.push_back(substitute(G.group().multiply_expr[i], frozen));
        inner_terms.push_back(coef_part * substitute(F, arg));
    }
    ScalarExpr inner = constant(d, Complex(0.0, 0.0));
    for (const auto& t : inner_terms) inner = inner + t;
    return u.apply(inner, x);
}

DiracSection antipode(const DiracSection& u) {
    const auto& G = *u.groupoid();
    std::vector<SectionTerm> terms;
    for (const auto& t : u.terms()) {
        Vec inv = G.group().invert(t.atom);
        ScalarExpr pulled = G.pullback(t.coef.expr, inv);
        std::optional<Box> box;
        if (t.coef.support) box = G.transform_box(*t.coef.support, t.atom);
        terms.push_back(SectionTerm{Coefficient{std::move(pulled), std::move(box)}, inv});
    }
    return DiracSection(u.groupoid(), std::move(terms));
}

TensorElement comultiply(const DiracSection& u, double margin) {
    const auto& G = u.groupoid();
    TensorElement w;
    for (const auto& t : u.terms()) {
        if (!t.coef.support)
            throw std::invalid_argument("comultiply: coefficient is missing its support box");
        ScalarExpr unit = plateau_on(*t.coef.support, margin);
        Coefficient local_unit{unit, t.coef.support->padded(0.0, 1.25 * margin)};
        w.pairs.emplace_back(DiracSection::generator(G, t.coef, t.atom),
                             DiracSection::generator(G, std::move(local_unit), t.atom));
    }
    return w;
}

Coefficient counit(const DiracSection& u) {
    const int l = u.groupoid()->base_dim();
    ScalarExpr sum = constant(l, Complex(0.0, 0.0));
    std::optional<Box> box;
    bool first = true;
    for (const auto& t : u.terms()) {
        sum = sum + t.coef.expr;
        box = first ? t.coef.support : box_union(box, t.coef.support);
        first = false;
    }
    if (u.terms().empty()) box = Box::cube(l, 0.0, 0.0);
    return Coefficient{std::move(sum), std::move(box)};
}

DiracSection embed(GroupoidPtr groupoid, Coefficient f) {
    Vec e = groupoid->group().identity;
    return DiracSection::generator(std::move(groupoid), std::move(f), e);
}

Complex pair_tensor(const ScalarExpr& F, const ScalarExpr& G, const TensorElement& w,
                    std::span<const double> x) {
    Complex out(0.0, 0.0);
    for (const auto& [left, right] : w.pairs) out += left.apply(F, x) * right.apply(G, x);
    return out;
}

Complex pair_tensor3(const ScalarExpr& F, const ScalarExpr& G, const ScalarExpr& H,
                     const TripleTensor& w, std::span<const double> x) {
    Complex out(0.0, 0.0);
    for (const auto& t : w.triples)
        out += t[0].apply(F, x) * t[1].apply(G, x) * t[2].apply(H, x);
    return out;
}

TensorElement tensor_flip(const TensorElement& w) {
    TensorElement r;
    for (const auto& [a, b] : w.pairs) r.pairs.emplace_back(b, a);
    return r;
}

TensorElement tensor_convolve(const TensorElement& a, const TensorElement& b) {
    TensorElement r;
    for (const auto& [a1, a2] : a.pairs)
        for (const auto& [b1, b2] : b.pairs)
            r.pairs.emplace_back(convolve(a1, b1), convolve(a2, b2));
    return r;
}

TripleTensor comultiply_left(const TensorElement& w, double margin) {
    TripleTensor r;
    for (const auto& [a, b] : w.pairs) {
        TensorElement da = comultiply(a, margin);
        for (const auto& [a1, a2] : da.pairs) r.triples.push_back({a1, a2, b});
    }
    return r;
}

TripleTensor comultiply_right(const TensorElement& w, double margin) {
    TripleTensor r;
    for (const auto& [a, b] : w.pairs) {
        TensorElement db = comultiply(b, margin);
        for (const auto& [b1, b2] : db.pairs) r.triples.push_back({a, b1, b2});
    }
    return r;
}

DiracSection conjugate_section(const DiracSection& u) {
    std::vector<SectionTerm> terms;
    for (const auto& t : u.terms())
        terms.push_back(SectionTerm{Coefficient{conjugate(t.coef.expr), t.coef.support}, t.atom});
    return DiracSection(u.groupoid(), std::move(terms));
}

double relative_gap(Complex a, Complex b) {
    return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

double max_deviation(const DiracSection& u, const DiracSection& v,
                     std::span<const Probe> battery) {
    double worst = 0.0;
    for (const auto& p : battery)
        worst = std::max(worst, relative_gap(u.apply(p.F, p.x), v.apply(p.F, p.x)));
    return worst;
}

bool approx_equal(const DiracSection& u, const DiracSection& v, std::span<const Probe> battery,
                  double tol) {
    return max_deviation(u, v, battery) <= tol;
}

double dual_seminorm(const DiracSection& u, std::span<const ScalarExpr> battery) {
    if (u.groupoid()->base_dim() != 0)
        throw std::invalid_argument("dual_seminorm: point-base section required");
    double m = 0.0;
    for (const auto& F : battery) m = std::max(m, std::abs(u.apply(F, {})));
    return m;
}

}  // namespace diracb
