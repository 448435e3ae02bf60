#include <cmath>

#include "diracb/quadrature.hpp"
#include "diracb/grammar.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace diracb;

namespace {
const double kE1 = std::exp(-1.0);
}

TEST_CASE("pointwise evaluation") {
    ScalarExpr x2 = pow_i(coordinate(1, 0), 2);
    CHECK(x2.eval({3.0}).real() == doctest::Approx(9.0));

    ScalarExpr b = bump1d(1, 0, 0.0, 2.0);
    CHECK(b.eval({0.0}).real() == doctest::Approx(kE1).epsilon(1e-12));
    CHECK(b.eval({0.0}).real() == doctest::Approx(0.36787944117144233).epsilon(1e-12));
    CHECK(b.eval({2.0}).real() == 0.0);
    CHECK(b.eval({2.5}).real() == 0.0);

    CHECK_THROWS_AS((void)x2.eval({1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("symbolic derivative examples") {
    ScalarExpr x = coordinate(1, 0);
    CHECK(pow_i(x, 2).derive(0).eval({3.0}).real() == doctest::Approx(6.0));
    CHECK(sin_of(x).derive(0).eval({0.0}).real() == doctest::Approx(1.0));

    // Closed form of the bump derivative at u = 1/2, checked against the
    // central-difference oracle and then frozen.
    ScalarExpr b = bump1d(1, 0, 0.0, 1.0);
    const double sym = b.derive(0).eval({0.5}).real();
    const double fd = oracles::central_difference(b, {0.5}, 0).real();
    CHECK(sym == doctest::Approx(fd).epsilon(1e-7));
    CHECK(sym == doctest::Approx(-0.4686171344).epsilon(1e-9));

    CHECK_THROWS_AS((void)x.derive(1), std::invalid_argument);
}

TEST_CASE("multi-index derivatives") {
    ScalarExpr x = coordinate(2, 0), y = coordinate(2, 1);
    ScalarExpr e = pow_i(x, 2) * y;

    std::vector<int> zero = {0, 0};
    CHECK(e.multi_derive(zero).eval({1.5, -2.0}) == e.eval({1.5, -2.0}));

    std::vector<int> a11 = {1, 1};
    CHECK((x * y).multi_derive(a11).eval({7.0, -3.0}).real() == doctest::Approx(1.0));

    std::vector<int> a21 = {2, 1};
    CHECK(e.multi_derive(a21).eval({0.3, 1.9}).real() == doctest::Approx(2.0));
    CHECK(e.multi_derive(a21).eval({-5.0, 11.0}).real() == doctest::Approx(2.0));
}

TEST_CASE("finite-difference consistency on the random grammar") {
    Rng rng(2024);
    int checked = 0;
    while (checked < 100) {
        const int dim = rng.uniform_int(1, 2);
        auto sample = oracles::random_smooth_sample(rng, dim);
        auto p = oracles::point_away_from_boundaries(rng, sample, dim, 0.05);
        const int coord = rng.uniform_int(0, dim - 1);
        const Complex v = sample.expr.eval(p);
        const Complex sym = sample.expr.derive(coord).eval(p);
        const Complex fd = oracles::central_difference(sample.expr, p, coord, 1e-4);
        CHECK(std::abs(sym - fd) <= 1e-5 * (1.0 + std::abs(v)));
        ++checked;
    }
}

TEST_CASE("mixed partials commute pointwise") {
    Rng rng(515);
    for (int it = 0; it < 40; ++it) {
        const int dim = 2;
        auto sample = oracles::random_smooth_sample(rng, dim);
        auto p = oracles::point_away_from_boundaries(rng, sample, dim, 0.02);
        ScalarExpr d01 = sample.expr.derive(0).derive(1);
        ScalarExpr d10 = sample.expr.derive(1).derive(0);
        const Complex a = d01.eval(p), b = d10.eval(p);
        CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::max(std::abs(a), std::abs(b))));
    }
}

TEST_CASE("support correctness up to fourth derivatives") {
    ScalarExpr b = bump1d(1, 0, 0.5, 1.5);          // support [-1, 2]
    ScalarExpr p = plateau1d(1, 0, 0.0, 1.0, 2.0);  // support [-2, 2]
    for (int order = 0; order <= 4; ++order) {
        for (double x : {-1.0, 2.0, -1.5, 2.25, 5.0}) CHECK(b.eval({x}) == Complex(0.0, 0.0));
        for (double x : {-2.0, 2.0, -2.5, 3.0}) CHECK(p.eval({x}) == Complex(0.0, 0.0));
        if (order < 4) {
            b = b.derive(0);
            p = p.derive(0);
        }
    }

    // plateau is exactly 1 on the inner box and its derivatives vanish there
    ScalarExpr pl = plateau1d(1, 0, 0.0, 1.0, 2.0);
    for (double x : {0.0, 0.5, -1.0, 1.0}) CHECK(pl.eval({x}) == Complex(1.0, 0.0));
    ScalarExpr dpl = pl.derive(0);
    for (double x : {0.0, 0.5, -0.99}) CHECK(dpl.eval({x}) == Complex(0.0, 0.0));
}

TEST_CASE("seminorm examples and monotonicity") {
    ScalarExpr x2 = pow_i(coordinate(1, 0), 2);
    CHECK(seminorm(x2, Box::cube(1, -1.0, 1.0), 1) == doctest::Approx(2.0));
    CHECK(seminorm(constant(1, Complex(0.0, -3.0)), Box::cube(1, -5.0, 5.0), 3) ==
          doctest::Approx(3.0));
    CHECK(seminorm(x2, Box::cube(1, -0.5, 0.5), 1) == doctest::Approx(1.0));

    Rng rng(99);
    for (int it = 0; it < 10; ++it) {
        auto sample = oracles::random_smooth_sample(rng, 1);
        const Box small = Box::cube(1, -0.7, 0.9);
        // Grow the box by whole grid steps so the larger sample set contains
        // the smaller one (the sampled sup is only monotone on nested grids).
        const double h = (0.9 - (-0.7)) / 256.0;
        const Box large = Box::cube(1, -0.7 - 32.0 * h, 0.9 + 32.0 * h);
        const double s0 = seminorm(sample.expr, small, 0, 257);
        const double s1 = seminorm(sample.expr, small, 1, 257);
        const double s2 = seminorm(sample.expr, small, 2, 257);
        CHECK(s0 <= s1);
        CHECK(s1 <= s2);
        CHECK(s1 <= seminorm(sample.expr, large, 1, 257 + 64));
    }
}

TEST_CASE("composite quadrature") {
    ScalarExpr y2 = pow_i(coordinate(1, 0), 2);
    CHECK(integrate_box(y2, Box::cube(1, -0.5, 0.5), 4).real() ==
          doctest::Approx(1.0 / 12.0).epsilon(1e-12));

    ScalarExpr one2 = constant(2, Complex(1.0, 0.0));
    CHECK(integrate_box(one2, Box::cube(2, 0.0, 1.0), 3).real() == doctest::Approx(1.0));

    // Normalization constant of the standard bump, high-resolution oracle.
    ScalarExpr b = bump1d(1, 0, 0.0, 1.0);
    const double mass = integrate_adaptive(b, Box::cube(1, -1.0, 1.0), 1e-12).real();
    CHECK(mass == doctest::Approx(0.443994).epsilon(1e-6));
    CHECK(mass == doctest::Approx(0.4439938161680786).epsilon(1e-9));

    SUBCASE("doubling cells is stable") {
        Rng rng(7);
        ScalarExpr poly = random_poly(rng, 1, 4) * pow_i(coordinate(1, 0), 6);
        const Box dom = Box::cube(1, -1.0, 2.0);
        CHECK(std::abs(integrate_box(poly, dom, 8) - integrate_box(poly, dom, 4)) < 1e-9);
        CHECK(std::abs(integrate_box(b, Box::cube(1, -1.0, 1.0), 16) -
                       integrate_box(b, Box::cube(1, -1.0, 1.0), 8)) < 1e-6);
    }
}

TEST_CASE("bump and plateau constructors") {
    const std::vector<double> c0 = {0.0, 0.0};
    ScalarExpr p2 = plateau(2, c0, 1.0, 2.0);
    CHECK(p2.eval({0.0, 0.0}).real() == 1.0);
    CHECK(p2.eval({0.3, -0.8}).real() == 1.0);
    CHECK(p2.eval({3.0, 0.0}).real() == 0.0);

    const std::vector<double> c1 = {0.0};
    ScalarExpr b1 = bump(1, c1, 2.0);
    CHECK(b1.eval({1.0}).real() == doctest::Approx(std::exp(-4.0 / 3.0)).epsilon(1e-12));
    CHECK(b1.eval({1.0}).real() == doctest::Approx(0.26359713811572677).epsilon(1e-12));

    CHECK_THROWS_AS(bump1d(1, 0, 0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(plateau1d(1, 0, 0.0, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("substitution") {
    ScalarExpr x = coordinate(1, 0);
    ScalarExpr shifted = substitute(pow_i(x, 2), std::vector<ScalarExpr>{x + constant(1, 1.0)});
    CHECK(shifted.eval({2.0}).real() == doctest::Approx(9.0));

    Rng rng(31);
    auto sample = oracles::random_smooth_sample(rng, 1);
    ScalarExpr same = substitute(sample.expr, std::vector<ScalarExpr>{x});
    for (double p : {-1.3, 0.1, 0.9}) CHECK(same.eval({p}) == sample.expr.eval({p}));

    // chain rule through the substitution, against the oracle
    ScalarExpr sin2x = substitute(sin_of(x), std::vector<ScalarExpr>{constant(1, 2.0) * x});
    const double sym = sin2x.derive(0).eval({0.0}).real();
    CHECK(sym == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(sym ==
          doctest::Approx(oracles::central_difference(sin2x, {0.0}, 0).real()).epsilon(1e-7));

    CHECK_THROWS_AS(substitute(pow_i(coordinate(2, 1), 2), std::vector<ScalarExpr>{x}),
                    std::invalid_argument);
}

TEST_CASE("canonical text form round trip") {
    Rng rng(404);
    for (int it = 0; it < 20; ++it) {
        auto sample = oracles::random_smooth_sample(rng, 2);
        ScalarExpr d = sample.expr.derive(0);  // exercises guards
        ScalarExpr back = parse_expr(d.to_string(), 2);
        for (int rep = 0; rep < 4; ++rep) {
            std::vector<double> p = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
            const Complex a = d.eval(p), b = back.eval(p);
            CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
        }
    }
    CHECK_THROWS_AS(parse_expr("(frob 1 2)", 1), std::invalid_argument);
    CHECK_THROWS_AS(parse_expr("x0 x1", 2), std::invalid_argument);
}

TEST_CASE("structural support boxes") {
    Rng rng(5);
    ScalarExpr e = random_poly(rng, 2, 2) * bump1d(2, 0, 0.0, 1.0) * bump1d(2, 1, 0.5, 2.0);
    auto box = structural_support(e);
    REQUIRE(box.has_value());
    CHECK(box->axes[0][0] == doctest::Approx(-1.0));
    CHECK(box->axes[0][1] == doctest::Approx(1.0));
    CHECK(box->axes[1][0] == doctest::Approx(-1.5));
    CHECK(box->axes[1][1] == doctest::Approx(2.5));

    CHECK_FALSE(structural_support(coordinate(1, 0)).has_value());
}
