#include "diracb/grammar.hpp"

#include <cmath>
#include <numbers>

namespace diracb {

namespace {

bool compact_group(const ActionGroupoid& G) { return G.group().name == "SO(2)"; }
bool affine_group_params(const ActionGroupoid& G) { return G.group().name == "Aff+(1)"; }

}  // namespace

ScalarExpr random_poly(Rng& rng, int dim, int max_deg) {
    if (dim == 0) return constant(0, Complex(rng.uniform(-1.0, 1.0), 0.0));
    ScalarExpr out = constant(dim, Complex(rng.uniform(-1.0, 1.0), 0.0));
    const int terms = rng.uniform_int(1, 3);
    for (int t = 0; t < terms; ++t) {
        ScalarExpr mono = constant(dim, Complex(rng.uniform(-1.0, 1.0), 0.0));
        for (int i = 0; i < dim; ++i) {
            const int d = rng.uniform_int(0, max_deg);
            if (d > 0) mono = mono * pow_i(coordinate(dim, i), d);
        }
        out = out + mono;
    }
    return out;
}

Coefficient random_coefficient(Rng& rng, const ActionGroupoid& G, bool complex_coeffs) {
    const int l = G.base_dim();
    if (l == 0) {
        Complex c(rng.uniform(-2.0, 2.0), complex_coeffs ? rng.uniform(-2.0, 2.0) : 0.0);
        if (std::abs(c) < 0.1) c += Complex(0.5, 0.0);
        return Coefficient{constant(0, c), Box{}};
    }
    auto center = Vec(std::size_t(l));
    for (double& c : center) c = rng.uniform(-1.5, 1.5);
    const double radius = rng.uniform(1.0, 2.0);
    ScalarExpr f = random_poly(rng, l, 2);
    if (complex_coeffs)
        f = f + constant(l, Complex(0.0, rng.uniform(-1.0, 1.0))) * random_poly(rng, l, 1);
    ScalarExpr window = rng.chance(0.25) ? plateau(l, center, 0.5 * radius, radius)
                                         : bump(l, center, radius);
    return Coefficient{f * window, Box::centered(center, radius)};
}

Vec random_atom(Rng& rng, const ActionGroupoid& G) {
    const int k = G.group_dim();
    auto h = Vec(std::size_t(k));
    if (affine_group_params(G)) {
        h[0] = rng.uniform(0.6, 1.8);
        h[1] = rng.uniform(-1.5, 1.5);
    } else if (compact_group(G)) {
        h[0] = rng.uniform(-std::numbers::pi, std::numbers::pi);
    } else {
        for (double& v : h) v = rng.uniform(-2.0, 2.0);
    }
    return G.canonical(h);
}

DiracSection random_section(Rng& rng, GroupoidPtr G, int min_terms, int max_terms,
                            bool complex_coeffs) {
    const int n = rng.uniform_int(min_terms, max_terms);
    std::vector<SectionTerm> terms;
    for (int i = 0; i < n; ++i)
        terms.push_back(
            SectionTerm{random_coefficient(rng, *G, complex_coeffs), random_atom(rng, *G)});
    return DiracSection(std::move(G), std::move(terms));
}

ScalarExpr random_test_function(Rng& rng, const ActionGroupoid& G) {
    const int l = G.base_dim();
    const int k = G.group_dim();
    const int d = l + k;
    ScalarExpr out = random_poly(rng, d, 2);
    if (compact_group(G)) {
        // Functions on the circle must be periodic in the angle coordinate, so
        // the polynomial part involves the base coordinates only.
        ScalarExpr th = coordinate(d, l);
        ScalarExpr periodic = constant(d, Complex(rng.uniform(-1.0, 1.0), 0.0)) * sin_of(th) +
                              constant(d, Complex(rng.uniform(-1.0, 1.0), 0.0)) * cos_of(th) +
                              constant(d, Complex(rng.uniform(-0.5, 0.5), 0.0)) *
                                  sin_of(th + th) +
                              constant(d, Complex(rng.uniform(0.5, 1.5), 0.0));
        ScalarExpr base_part =
            l == 0 ? constant(d, Complex(1.0, 0.0)) : shift_coords(random_poly(rng, l, 2), 0, d);
        out = base_part * periodic;
    } else if (rng.chance(0.3)) {
        out = out * exp_of(constant(d, Complex(rng.uniform(-0.3, 0.3), 0.0)) *
                           coordinate(d, rng.uniform_int(0, d - 1)));
    }
    return out;
}

std::vector<std::pair<ScalarExpr, ScalarExpr>> random_pair_battery(Rng& rng,
                                                                   const ActionGroupoid& G,
                                                                   int count) {
    std::vector<std::pair<ScalarExpr, ScalarExpr>> out;
    const int d = G.total_dim();
    out.emplace_back(constant(d, Complex(1.0, 0.0)), constant(d, Complex(1.0, 0.0)));
    for (int i = 1; i < count; ++i)
        out.emplace_back(random_test_function(rng, G), random_test_function(rng, G));
    return out;
}

std::vector<Vec> sample_points(Rng& rng, const ActionGroupoid& G,
                               std::span<const DiracSection> sections, int count) {
    const int l = G.base_dim();
    std::vector<Vec> pts;
    if (l == 0) {
        pts.assign(std::size_t(count), Vec{});
        return pts;
    }
    std::optional<Box> box;
    for (const auto& u : sections)
        for (const auto& t : u.terms())
            if (t.coef.support)
                box = box ? Box::hull(*box, *t.coef.support) : *t.coef.support;
    Box region = box ? box->padded(0.3) : Box::cube(l, -2.0, 2.0);
    for (int i = 0; i < count; ++i) {
        auto p = Vec(std::size_t(l));
        for (int a = 0; a < l; ++a) p[a] = rng.uniform(region.axes[a][0], region.axes[a][1]);
        pts.push_back(std::move(p));
    }
    return pts;
}

std::vector<Probe> random_probe_battery(Rng& rng, const ActionGroupoid& G,
                                        std::span<const DiracSection> sections, int functions,
                                        int points) {
    std::vector<ScalarExpr> funcs;
    for (int i = 0; i < functions; ++i) funcs.push_back(random_test_function(rng, G));
    std::vector<Vec> pts = sample_points(rng, G, sections, points);
    std::vector<Probe> battery;
    battery.reserve(funcs.size() * pts.size());
    for (const auto& F : funcs)
        for (const auto& x : pts) battery.push_back(Probe{F, x});
    return battery;
}

GermBattery random_germ_battery(Rng& rng, const ActionGroupoid& G, int functions) {
    GermBattery b;
    const int d = G.total_dim();
    b.funcs.push_back(constant(d, Complex(1.0, 0.0)));
    for (int i = 1; i < functions; ++i) b.funcs.push_back(random_test_function(rng, G));
    b.pairs = random_pair_battery(rng, G, std::max(4, functions / 2));
    return b;
}

}  // namespace diracb
