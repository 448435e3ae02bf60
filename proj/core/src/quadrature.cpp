#include "diracb/quadrature.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace diracb {

namespace {

constexpr int kRuleOrder = 12;

GaussRule compute_rule(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev-like initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int points) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(points);
    if (it == cache.end()) it = cache.emplace(points, compute_rule(points)).first;
    return it->second;
}

Complex integrate_box(const ScalarExpr& e, const Box& box, int cells) {
    if (cells < 1) throw std::invalid_argument("integrate_box: cells must be >= 1");
    if (box.dim() != e.ambient_dim())
        throw std::invalid_argument("integrate_box: box dimension mismatch");
    const int d = box.dim();
    if (d == 0) return e.eval(std::span<const double>{});
    const GaussRule& rule = gauss_legendre(kRuleOrder);
    const int per_axis = cells * kRuleOrder;

    // Precomputed 1-D abscissas and weights per axis.
    std::vector<std::vector<double>> xs(d), ws(d);
    for (int ax = 0; ax < d; ++ax) {
        const double a = box.axes[ax][0], b = box.axes[ax][1];
        const double h = (b - a) / cells;
        xs[ax].reserve(per_axis);
        ws[ax].reserve(per_axis);
        for (int c = 0; c < cells; ++c) {
            const double mid = a + (c + 0.5) * h;
            for (int q = 0; q < kRuleOrder; ++q) {
                xs[ax].push_back(mid + 0.5 * h * rule.nodes[q]);
                ws[ax].push_back(0.5 * h * rule.weights[q]);
            }
        }
    }

    std::vector<double> p(d);
    std::vector<int> idx(d, 0);
    Complex total(0.0, 0.0);
    while (true) {
        double w = 1.0;
        for (int ax = 0; ax < d; ++ax) {
            p[ax] = xs[ax][idx[ax]];
            w *= ws[ax][idx[ax]];
        }
        total += w * e.eval(p);
        int ax = d - 1;
        while (ax >= 0 && ++idx[ax] == per_axis) idx[ax--] = 0;
        if (ax < 0) break;
    }
    return total;
}

Complex integrate_adaptive(const ScalarExpr& e, const Box& box, double tol, int max_cells) {
    int cells = 2;
    Complex prev = integrate_box(e, box, cells);
    while (cells < max_cells) {
        cells *= 2;
        Complex cur = integrate_box(e, box, cells);
        if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

namespace {

int default_grid(int dim) { return dim <= 2 ? 257 : 33; }

void for_each_multi_index(int dim, int order, std::vector<int>& alpha, int from,
                          const std::function<void(const std::vector<int>&, int)>& fn, int used) {
    if (from == dim) {
        fn(alpha, used);
        return;
    }
    for (int k = 0; k + used <= order; ++k) {
        alpha[from] = k;
        for_each_multi_index(dim, order, alpha, from + 1, fn, used + k);
    }
    alpha[from] = 0;
}

}  // namespace

std::vector<double> seminorm_profile(const ScalarExpr& e, const Box& box, int order,
                                     int grid_points) {
    if (order < 0) throw std::invalid_argument("seminorm: negative order");
    if (box.dim() != e.ambient_dim())
        throw std::invalid_argument("seminorm: box dimension mismatch");
    const int d = box.dim();
    const int g = grid_points > 0 ? grid_points : default_grid(d);
    if (g < 2 && d > 0) throw std::invalid_argument("seminorm: need at least 2 grid points");

    std::vector<double> best(std::size_t(order) + 1, 0.0);
    std::vector<int> alpha(std::size_t(d), 0);
    auto visit = [&](const std::vector<int>& a, int total) {
        ScalarExpr de = e.multi_derive(a);
        double m = 0.0;
        if (d == 0) {
            m = std::abs(de.eval(std::span<const double>{}));
        } else {
            std::vector<double> p(d);
            std::vector<int> idx(d, 0);
            while (true) {
                for (int ax = 0; ax < d; ++ax) {
                    const double a0 = box.axes[ax][0], b0 = box.axes[ax][1];
                    p[ax] = g == 1 ? 0.5 * (a0 + b0) : a0 + (b0 - a0) * idx[ax] / double(g - 1);
                }
                m = std::max(m, std::abs(de.eval(p)));
                int ax = d - 1;
                while (ax >= 0 && ++idx[ax] == g) idx[ax--] = 0;
                if (ax < 0) break;
            }
        }
        best[std::size_t(total)] = std::max(best[std::size_t(total)], m);
    };
    for_each_multi_index(d, order, alpha, 0, visit, 0);
    return best;
}

double seminorm(const ScalarExpr& e, const Box& box, int order, int grid_points) {
    auto prof = seminorm_profile(e, box, order, grid_points);
    double m = 0.0;
    for (double v : prof) m = std::max(m, v);
    return m;
}

}  // namespace diracb
