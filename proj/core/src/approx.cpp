#include "diracb/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diracb {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

GroupoidPtr point_fiber(int k) { return find_groupoid("point_r" + std::to_string(k)); }

}  // namespace

DiracSection riemann_comb(double L, int n, int k) {
    if (L <= 0.0) throw std::invalid_argument("riemann_comb: L must be positive");
    if (n < 1) throw std::invalid_argument("riemann_comb: n must be >= 1");
    GroupoidPtr G = point_fiber(k);
    const double weight = std::pow(L / n, k);
    std::vector<SectionTerm> terms;
    auto idx = std::vector<int>(std::size_t(k), 0);
    while (true) {
        auto t = Vec(std::size_t(k));
        for (int i = 0; i < k; ++i) t[i] = -0.5 * L + idx[i] * L / n;
        terms.push_back(SectionTerm{Coefficient{constant(0, weight), Box{}}, std::move(t)});
        int ax = k - 1;
        while (ax >= 0 && ++idx[ax] == n) idx[ax--] = 0;
        if (ax < 0) break;
    }
    return DiracSection(std::move(G), std::move(terms));
}

double comb_bound(const ScalarExpr& F, double L, int n, int k) {
    if (F.ambient_dim() != k) throw std::invalid_argument("comb_bound: dimension mismatch");
    const Box D = Box::cube(k, -0.5 * L, 0.5 * L);
    return k * std::pow(L, k + 1) / n * seminorm(F, D, 1);
}

DiracSection family_comb(GroupoidPtr groupoid, const DensityFamily& phi, double L, int n) {
    const int l = groupoid->base_dim();
    const int k = groupoid->group_dim();
    if (phi.phi.ambient_dim() != l + k)
        throw std::invalid_argument("family_comb: density dimension mismatch");
    for (int i = 0; i < k; ++i)
        if (phi.support.axes[l + i][0] < -0.5 * L || phi.support.axes[l + i][1] > 0.5 * L)
            throw std::invalid_argument("family_comb: fiber support exceeds [-L/2, L/2]^k");

    Box base_box(std::vector<std::array<double, 2>>(phi.support.axes.begin(),
                                                    phi.support.axes.begin() + l));
    const double weight = std::pow(L / n, k);
    std::vector<SectionTerm> terms;
    auto idx = std::vector<int>(std::size_t(k), 0);
    while (true) {
        auto t = Vec(std::size_t(k));
        for (int i = 0; i < k; ++i) t[i] = -0.5 * L + idx[i] * L / n;
        // Freeze the fiber coordinates of phi at t.
        std::vector<ScalarExpr> map;
        map.reserve(l + k);
        for (int i = 0; i < l; ++i) map.push_back(coordinate(l, i));
        for (int i = 0; i < k; ++i) map.push_back(constant(l, Complex(t[i], 0.0)));
        ScalarExpr coef = constant(l, weight) * substitute(phi.phi, map);
        terms.push_back(SectionTerm{Coefficient{std::move(coef), base_box}, std::move(t)});
        int ax = k - 1;
        while (ax >= 0 && ++idx[ax] == n) idx[ax--] = 0;
        if (ax < 0) break;
    }
    return DiracSection(std::move(groupoid), std::move(terms));
}

Complex density_apply(const DensityFamily& phi, const ScalarExpr& F, std::span<const double> x,
                      int cells) {
    const int d = phi.phi.ambient_dim();
    const int l = static_cast<int>(x.size());
    const int k = d - l;
    if (F.ambient_dim() != d) throw std::invalid_argument("density_apply: dimension mismatch");
    std::vector<ScalarExpr> map;
    map.reserve(d);
    for (int i = 0; i < l; ++i) map.push_back(constant(k, Complex(x[i], 0.0)));
    for (int i = 0; i < k; ++i) map.push_back(coordinate(k, i));
    ScalarExpr integrand = substitute(phi.phi, map) * substitute(F, map);
    Box fiber_box(std::vector<std::array<double, 2>>(phi.support.axes.begin() + l,
                                                     phi.support.axes.end()));
    return integrate_box(integrand, fiber_box, cells);
}

DiracSection fd_stencil(int order, double step, double y) {
    if (order < 0) throw std::invalid_argument("fd_stencil: order must be >= 0");
    if (step <= 0.0) throw std::invalid_argument("fd_stencil: step must be positive");
    GroupoidPtr G = point_fiber(1);
    const double scale = std::pow(2.0 * step, -order);
    std::vector<SectionTerm> terms;
    for (int k = 0; k <= order; ++k) {
        const double w = scale * (k % 2 == 0 ? 1.0 : -1.0) * binomial(order, k);
        terms.push_back(
            SectionTerm{Coefficient{constant(0, w), Box{}}, Vec{y + (order - 2 * k) * step}});
    }
    return DiracSection(std::move(G), std::move(terms));
}

DiracSection fd_stencil_multi(std::span<const int> beta, double step,
                              std::span<const double> y) {
    const int k = static_cast<int>(beta.size());
    if (static_cast<int>(y.size()) != k)
        throw std::invalid_argument("fd_stencil_multi: beta/y length mismatch");
    GroupoidPtr G = point_fiber(k);
    std::vector<SectionTerm> terms;
    auto idx = std::vector<int>(std::size_t(k), 0);
    while (true) {
        double w = 1.0;
        auto atom = Vec(std::size_t(k));
        for (int i = 0; i < k; ++i) {
            const int b = beta[i], j = idx[i];
            w *= std::pow(2.0 * step, -b) * (j % 2 == 0 ? 1.0 : -1.0) * binomial(b, j);
            atom[i] = y[i] + (b - 2 * j) * step;
        }
        terms.push_back(SectionTerm{Coefficient{constant(0, w), Box{}}, std::move(atom)});
        int ax = k - 1;
        while (ax >= 0 && ++idx[ax] > beta[ax]) idx[ax--] = 0;
        if (ax < 0) break;
    }
    return DiracSection(std::move(G), std::move(terms));
}

DensityFamily mollify(const DiracSection& u, const ScalarExpr& rho, const Box& rho_support,
                      double t) {
    if (t <= 0.0) throw std::invalid_argument("mollify: scale must be positive");
    const int k = u.groupoid()->group_dim();
    const int l = u.groupoid()->base_dim();
    if (rho.ambient_dim() != k) throw std::invalid_argument("mollify: rho dimension mismatch");
    const double Z = integrate_adaptive(rho, rho_support, 1e-12).real();
    if (Z == 0.0) throw std::invalid_argument("mollify: rho has zero mass");
    const int d = l + k;

    ScalarExpr phi = constant(d, Complex(0.0, 0.0));
    std::optional<Box> total;
    const double norm = std::pow(t, -k) / Z;
    for (const auto& term : u.terms()) {
        // rho_t(y - y_i) = t^{-k} rho((y - y_i)/t) / Z, exact in closed form.
        std::vector<ScalarExpr> map;
        map.reserve(k);
        for (int i = 0; i < k; ++i) {
            map.push_back(constant(d, Complex(1.0 / t, 0.0)) *
                          (coordinate(d, l + i) + constant(d, Complex(-term.atom[i], 0.0))));
        }
        ScalarExpr shifted = (k == 0) ? constant(d, rho.eval(std::span<const double>{}))
                                      : substitute(rho, map);
        ScalarExpr coef = l == 0 ? ScalarExpr(d, term.coef.expr.root())
                                 : shift_coords(term.coef.expr, 0, d);
        phi = phi + constant(d, norm) * coef * shifted;

        std::vector<std::array<double, 2>> axes;
        if (term.coef.support) {
            axes.assign(term.coef.support->axes.begin(), term.coef.support->axes.end());
        } else {
            axes.assign(std::size_t(l), {0.0, 0.0});
        }
        for (int i = 0; i < k; ++i)
            axes.push_back({term.atom[i] + t * rho_support.axes[i][0],
                            term.atom[i] + t * rho_support.axes[i][1]});
        Box b{std::move(axes)};
        total = total ? Box::hull(*total, b) : b;
    }
    if (!total) total = Box::cube(d, 0.0, 0.0);
    return DensityFamily{std::move(phi), *total};
}

namespace {

ConvergenceReport sweep_comb(const SweepDescriptor& d) {
    if (d.battery.empty() || d.counts.empty() || d.L <= 0.0 || d.dim < 1 || d.dim > 2)
        throw std::invalid_argument("run_sweep: bad comb descriptor");
    const Box D = Box::cube(d.dim, -0.5 * d.L, 0.5 * d.L);
    std::vector<double> bound1;
    std::vector<Complex> exact;
    for (const auto& F : d.battery) {
        if (F.ambient_dim() != d.dim)
            throw std::invalid_argument("run_sweep: comb battery dimension mismatch");
        bound1.push_back(d.dim * std::pow(d.L, d.dim + 1) * seminorm(F, D, 1));
        exact.push_back(integrate_adaptive(F, D, 1e-12));
    }
    ConvergenceReport rep;
    rep.name = "comb";
    for (int n : d.counts) {
        DiracSection comb = riemann_comb(d.L, n, d.dim);
        double err = 0.0, bound = 0.0;
        bool sat = true;
        for (std::size_t i = 0; i < d.battery.size(); ++i) {
            const double e = std::abs(comb.apply(d.battery[i], {}) - exact[i]);
            err = std::max(err, e);
            bound = std::max(bound, bound1[i] / n);
            sat = sat && e <= 1.05 * bound1[i] / n;
        }
        rep.rows.push_back(SweepRow{double(n), err, bound, sat});
    }
    rep.fitted_rate = fit_rate(rep.rows, RateAxis::RefinementCount);
    return rep;
}

ConvergenceReport sweep_family(const SweepDescriptor& d) {
    if (!d.groupoid || !d.phi || d.battery.empty() || d.counts.empty() || d.base_points.empty())
        throw std::invalid_argument("run_sweep: bad family descriptor");
    ConvergenceReport rep;
    rep.name = "family_comb";
    const int l = d.groupoid->base_dim();
    Box KD = d.phi->support;
    for (int i = l; i < KD.dim(); ++i) KD.axes[std::size_t(i)] = {-0.5 * d.L, 0.5 * d.L};
    double bound1 = 0.0;
    for (const auto& F : d.battery)
        bound1 = std::max(bound1, 1.05 * d.groupoid->group_dim() *
                                      std::pow(d.L, d.groupoid->group_dim() + 1) *
                                      seminorm(d.phi->phi * F, KD, 1, 129));
    for (int n : d.counts) {
        DiracSection comb = family_comb(d.groupoid, *d.phi, d.L, n);
        double err = 0.0;
        for (const auto& F : d.battery)
            for (const auto& x : d.base_points)
                err = std::max(err, std::abs(comb.apply(F, x) - density_apply(*d.phi, F, x, 64)));
        const double bound = bound1 / n;
        rep.rows.push_back(SweepRow{double(n), err, bound, err <= bound});
    }
    rep.fitted_rate = fit_rate(rep.rows, RateAxis::RefinementCount);
    return rep;
}

ConvergenceReport sweep_stencil(const SweepDescriptor& d) {
    if (d.battery.size() != 1 || d.steps.empty() || d.order < 0)
        throw std::invalid_argument("run_sweep: bad stencil descriptor");
    const ScalarExpr& F = d.battery[0];
    if (F.ambient_dim() != 1)
        throw std::invalid_argument("run_sweep: stencil function must be one-dimensional");
    std::vector<int> alpha = {d.order};
    const Complex truth = F.multi_derive(alpha).eval({d.at});
    ConvergenceReport rep;
    rep.name = "stencil";
    for (double t : d.steps) {
        const double err = std::abs(fd_stencil(d.order, t, d.at).apply(F, {}) - truth);
        rep.rows.push_back(SweepRow{t, err, std::nullopt, std::nullopt});
    }
    rep.fitted_rate = fit_rate(rep.rows, RateAxis::StepSize);
    return rep;
}

ConvergenceReport sweep_mollify(const SweepDescriptor& d) {
    if (!d.section || !d.kernel || !d.kernel_support || d.battery.empty() || d.steps.empty() ||
        d.base_points.empty())
        throw std::invalid_argument("run_sweep: bad mollify descriptor");
    ConvergenceReport rep;
    rep.name = "mollify";
    for (double t : d.steps) {
        DensityFamily m = mollify(*d.section, *d.kernel, *d.kernel_support, t);
        double err = 0.0;
        for (const auto& F : d.battery)
            for (const auto& x : d.base_points)
                err = std::max(err, std::abs(density_apply(m, F, x, 256) -
                                             d.section->apply(F, x)));
        rep.rows.push_back(SweepRow{t, err, std::nullopt, std::nullopt});
    }
    rep.fitted_rate = fit_rate(rep.rows, RateAxis::StepSize);
    return rep;
}

}  // namespace

ConvergenceReport run_sweep(const SweepDescriptor& d) {
    ConvergenceReport rep;
    switch (d.kind) {
        case SweepDescriptor::Kind::Comb: rep = sweep_comb(d); break;
        case SweepDescriptor::Kind::FamilyComb: rep = sweep_family(d); break;
        case SweepDescriptor::Kind::Stencil: rep = sweep_stencil(d); break;
        case SweepDescriptor::Kind::Mollify: rep = sweep_mollify(d); break;
    }
    std::sort(rep.rows.begin(), rep.rows.end(),
              [](const SweepRow& a, const SweepRow& b) { return a.parameter < b.parameter; });
    return rep;
}

double fit_log_slope(const std::vector<SweepRow>& rows) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (const auto& r : rows) {
        if (r.error < 1e-12) continue;
        const double lx = std::log(r.parameter), ly = std::log(r.error);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double fit_rate(const std::vector<SweepRow>& rows, RateAxis axis) {
    const double slope = fit_log_slope(rows);
    // error ~ n^{-rate} for refining counts, error ~ t^{rate} for shrinking steps
    return axis == RateAxis::RefinementCount ? -slope : slope;
}

}  // namespace diracb
