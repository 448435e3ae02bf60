#include "diracb/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace diracb {

namespace {

const SectionTerm& single_term(const DiracSection& w) {
    if (w.terms().size() != 1)
        throw std::invalid_argument("ArrowGerm: witness must be a single-term section");
    return w.terms()[0];
}

// Deterministic probe points inside/near the cube base±r.
std::vector<Vec> local_points(const Vec& x, double r) {
    std::vector<Vec> pts;
    pts.push_back(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (double s : {-0.9, -0.45, 0.45, 0.9}) {
            Vec p = x;
            p[i] += s * r;
            pts.push_back(std::move(p));
        }
    }
    return pts;
}

// Largest radius <= r_start on which coef samples to exactly 1 (within fp).
double verified_radius(const ScalarExpr& coef, const Vec& x, double r_start) {
    if (x.empty()) {
        const double v = std::abs(coef.eval(std::span<const double>{}) - Complex(1.0, 0.0));
        if (v > 1e-12) throw std::invalid_argument("ArrowGerm: witness not normalized");
        return r_start;
    }
    auto flat_on = [&](double r) {
        Box cube = Box::centered(x, r);
        for (const auto& c : cube.corners())
            if (std::abs(coef.eval(c) - Complex(1.0, 0.0)) > 1e-12) return false;
        for (const auto& p : local_points(x, r))
            if (std::abs(coef.eval(p) - Complex(1.0, 0.0)) > 1e-12) return false;
        return true;
    };
    double r = r_start;
    for (int i = 0; i < 60; ++i) {
        if (flat_on(r)) return r;
        r *= 0.5;
        if (r < 1e-9 * r_start) break;
    }
    throw std::invalid_argument("ArrowGerm: coefficient is not identically 1 near the base");
}

}  // namespace

ArrowGerm make_arrow(GroupoidPtr G, std::span<const double> x, std::span<const double> h,
                     double r_norm) {
    if (r_norm <= 0.0) throw std::invalid_argument("make_arrow: r_norm must be positive");
    const int l = G->base_dim();
    if (static_cast<int>(x.size()) != l)
        throw std::invalid_argument("make_arrow: base point dimension mismatch");
    ScalarExpr f = plateau(l, x, r_norm, 2.0 * r_norm);
    Box box = l == 0 ? Box{} : Box::centered(x, 2.0 * r_norm);
    DiracSection w = DiracSection::generator(std::move(G), Coefficient{std::move(f), box}, h);
    return ArrowGerm{Vec(x.begin(), x.end()), std::move(w), r_norm};
}

bool germ_equal(const ArrowGerm& a, const ArrowGerm& b, std::span<const double> radii,
                std::span<const ScalarExpr> battery, double tol) {
    const auto& G = a.witness.groupoid();
    if (G != b.witness.groupoid()) throw std::invalid_argument("germ_equal: groupoid mismatch");
    const int l = G->base_dim();
    for (int i = 0; i < l; ++i)
        if (std::abs(a.base[i] - b.base[i]) > 1e-7)
            throw std::invalid_argument("germ_equal: base points differ");

    if (l == 0) {
        std::vector<Probe> probes;
        for (const auto& F : battery) probes.push_back(Probe{F, {}});
        return approx_equal(a.witness, b.witness, probes, tol);
    }

    DiracSection diff = a.witness - b.witness;
    for (double r : radii) {
        Coefficient loc{plateau(l, a.base, r, 2.0 * r), Box::centered(a.base, 2.0 * r)};
        DiracSection localized = module_act(loc, diff);
        DiracSection la = module_act(loc, a.witness);
        DiracSection lb = module_act(loc, b.witness);
        for (const auto& F : battery) {
            for (const auto& p : local_points(a.base, r)) {
                const double scale =
                    std::max(std::abs(la.apply(F, p)), std::abs(lb.apply(F, p)));
                if (std::abs(localized.apply(F, p)) > tol * (1.0 + scale)) return false;
            }
        }
    }
    return true;
}

bool is_grouplike(const ArrowGerm& g, std::span<const std::pair<ScalarExpr, ScalarExpr>> battery,
                  double tol) {
    const auto& G = g.witness.groupoid();
    const int l = G->base_dim();

    // Counit germ: eps_x = 1.
    Coefficient eps = counit(g.witness);
    if (std::abs(eps.expr.eval(g.base) - Complex(1.0, 0.0)) > tol) return false;

    DiracSection lw = l == 0 ? g.witness
                             : module_act(Coefficient{plateau(l, g.base, 0.5 * g.r_norm, g.r_norm),
                                                      Box::centered(g.base, g.r_norm)},
                                          g.witness);
    TensorElement delta = comultiply(lw);
    const auto points = l == 0 ? std::vector<Vec>{Vec{}} : local_points(g.base, 0.4 * g.r_norm);
    for (const auto& [F, Gf] : battery) {
        for (const auto& p : points) {
            const Complex lhs = pair_tensor(F, Gf, delta, p);
            const Complex rhs = lw.apply(F, p) * g.witness.apply(Gf, p);
            if (relative_gap(lhs, rhs) > tol) return false;
        }
    }
    return true;
}

Vec germ_target(const ArrowGerm& g) { return g.base; }

Vec germ_source(const ArrowGerm& g, double tol) {
    const auto& G = g.witness.groupoid();
    const int l = G->base_dim();
    const auto& term = single_term(g.witness);
    const Vec candidate = G->act(g.base, term.atom);

    // Probes normalized at the base: T_a(f)(candidate) must give back f(base).
    ScalarExpr p0 = plateau(l, g.base, g.r_norm, 2.0 * g.r_norm);
    Box pbox = l == 0 ? Box{} : Box::centered(g.base, 2.0 * g.r_norm);
    auto T_a = [&](const ScalarExpr& f) {
        return counit(antipode(module_act(Coefficient{f, pbox}, g.witness))).expr;
    };
    const Complex t0 = T_a(p0).eval(candidate);
    if (std::abs(t0 - Complex(1.0, 0.0)) > tol)
        throw std::runtime_error("germ_source: probe verification failed (witness not "
                                 "normalized on a large enough radius)");
    for (int i = 0; i < l; ++i) {
        ScalarExpr probe = coordinate(l, i) * p0;
        const Complex ti = T_a(probe).eval(candidate);
        if (std::abs(ti - Complex(g.base[i], 0.0)) > tol * (1.0 + std::abs(g.base[i])))
            throw std::runtime_error("germ_source: coordinate probe mismatch");
    }
    return candidate;
}

ArrowGerm germ_compose(const ArrowGerm& a, const ArrowGerm& b, double tol) {
    const auto& G = a.witness.groupoid();
    if (G != b.witness.groupoid())
        throw std::invalid_argument("germ_compose: groupoid mismatch");
    const Vec s = germ_source(a, tol);
    double gap = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        gap = std::max(gap, std::abs(s[i] - b.base[i]));
    if (gap > tol) throw std::invalid_argument("germ_compose: germs not composable");

    DiracSection w = convolve(a.witness, b.witness);
    const double r = verified_radius(single_term(w).coef.expr, a.base,
                                     std::min(a.r_norm, b.r_norm));
    return ArrowGerm{a.base, std::move(w), r};
}

ArrowGerm germ_inverse(const ArrowGerm& g, double tol) {
    const Vec s = germ_source(g, tol);
    DiracSection w = antipode(g.witness);
    const double r = verified_radius(single_term(w).coef.expr, s, g.r_norm);
    return ArrowGerm{s, std::move(w), r};
}

Complex theta_character(const ArrowGerm& g, const ScalarExpr& F) {
    return g.witness.apply(F, g.base);
}

namespace {

// Localization radii for comparing two germs: the plateau's outer radius 2r
// must stay inside both flat zones, so start from half the smaller r_norm.
std::vector<double> comparison_radii(const ArrowGerm& a, const ArrowGerm& b) {
    const double r = 0.5 * std::min(a.r_norm, b.r_norm);
    return {r, 0.5 * r, 0.25 * r};
}

}  // namespace

RoundTripReport reconstruct_round_trip(GroupoidPtr G, std::span<const RoundTripSample> samples,
                                       const GermBattery& battery, double r_norm, double tol) {
    RoundTripReport rep;
    for (const auto& s : samples) {
        ++rep.samples;
        ArrowGerm g = make_arrow(G, s.arrow.base, s.arrow.group, r_norm);

        const Vec t = germ_target(g);
        for (std::size_t i = 0; i < t.size(); ++i)
            rep.max_target_dev = std::max(rep.max_target_dev, std::abs(t[i] - s.arrow.base[i]));

        const Vec src = germ_source(g, tol);
        const Vec expected_src = G->source(s.arrow);
        for (std::size_t i = 0; i < src.size(); ++i)
            rep.max_source_dev = std::max(rep.max_source_dev, std::abs(src[i] - expected_src[i]));

        if (!is_grouplike(g, battery.pairs, tol)) ++rep.grouplike_failures;
        {
            ArrowGerm bad = g;
            bad.witness = g.witness.scaled(Complex(2.0, 0.0));
            if (is_grouplike(bad, battery.pairs, tol)) ++rep.corrupted_accepted;
        }

        // Composition against the groupoid multiplication.
        Arrow second{expected_src, s.second};
        ArrowGerm h = make_arrow(G, second.base, second.group, r_norm);
        ArrowGerm composed = germ_compose(g, h, 1e-6);
        Arrow product = G->compose(s.arrow, second, 1e-6);
        ArrowGerm direct = make_arrow(G, product.base, product.group, composed.r_norm);
        if (!germ_equal(composed, direct, comparison_radii(composed, direct), battery.funcs, tol))
            ++rep.compose_failures;

        // Inverse against the groupoid inverse.
        ArrowGerm inv = germ_inverse(g, tol);
        Arrow ainv = G->inverse(s.arrow);
        ArrowGerm direct_inv = make_arrow(G, ainv.base, ainv.group, inv.r_norm);
        if (!germ_equal(inv, direct_inv, comparison_radii(inv, direct_inv), battery.funcs, tol))
            ++rep.inverse_failures;
    }
    return rep;
}

}  // namespace diracb
