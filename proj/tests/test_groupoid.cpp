#include <cmath>
#include <numbers>

#include "diracb/grammar.hpp"
#include "doctest.h"

using namespace diracb;

namespace {

Vec random_base(Rng& rng, int l) {
    auto x = Vec(std::size_t(l));
    for (double& c : x) c = rng.uniform(-2.0, 2.0);
    return x;
}

double dist_inf(const Vec& a, const Vec& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST_CASE("structure maps on the translation groupoid") {
    GroupoidPtr T = find_groupoid("translation1");
    Arrow g{{2.0}, {3.0}};
    CHECK(T->source(g)[0] == doctest::Approx(5.0));
    CHECK(T->target(g)[0] == doctest::Approx(2.0));
    CHECK(T->source(T->unit(Vec{7.5}))[0] == doctest::Approx(7.5));

    Arrow a{{0.0}, {1.0}}, b{{1.0}, {2.0}};
    Arrow ab = T->compose(a, b);
    CHECK(ab.base[0] == doctest::Approx(0.0));
    CHECK(ab.group[0] == doctest::Approx(3.0));

    Arrow inv = T->inverse(Arrow{{2.0}, {3.0}});
    CHECK(inv.base[0] == doctest::Approx(5.0));
    CHECK(inv.group[0] == doctest::Approx(-3.0));

    Arrow u = T->unit(Vec{4.0});
    Arrow uu = T->inverse(u);
    CHECK(uu.base[0] == doctest::Approx(4.0));
    CHECK(uu.group[0] == doctest::Approx(0.0));

    CHECK_THROWS_AS((void)T->compose(a, Arrow{{5.0}, {0.0}}), std::invalid_argument);
}

TEST_CASE("affine groupoid arithmetic") {
    GroupoidPtr A = find_groupoid("aff_line");

    // x·(a,b) = ax + b, (a,b)(a',b') = (aa', a'b + b')
    Arrow g1{{1.0}, {2.0, 0.0}}, g2{{2.0}, {1.0, 1.0}};
    Arrow c = A->compose(g1, g2);
    CHECK(c.base[0] == doctest::Approx(1.0));
    CHECK(c.group[0] == doctest::Approx(2.0));
    CHECK(c.group[1] == doctest::Approx(1.0));

    Arrow inv = A->inverse(Arrow{{1.0}, {2.0, 4.0}});
    CHECK(inv.base[0] == doctest::Approx(6.0));
    CHECK(inv.group[0] == doctest::Approx(0.5));
    CHECK(inv.group[1] == doctest::Approx(-2.0));

    // acting on sample points agrees with the multiplication law
    Rng rng(11);
    for (int it = 0; it < 100; ++it) {
        Vec h1 = random_atom(rng, *A), h2 = random_atom(rng, *A);
        Vec x = random_base(rng, 1);
        Vec lhs = A->act(A->act(x, h1), h2);
        Vec rhs = A->act(x, A->group().multiply(h1, h2));
        CHECK(dist_inf(lhs, rhs) <= 1e-9);
    }
}

TEST_CASE("catalog group and action axioms") {
    for (const auto& G : groupoid_catalog()) {
        CAPTURE(G->name());
        Rng rng(101);
        const auto& grp = G->group();
        for (int it = 0; it < 100; ++it) {
            Vec a = random_atom(rng, *G), b = random_atom(rng, *G), c = random_atom(rng, *G);
            // associativity, identity, inverse
            Vec ab_c = grp.multiply(grp.multiply(a, b), c);
            Vec a_bc = grp.multiply(a, grp.multiply(b, c));
            CHECK(dist_inf(grp.canonicalize(ab_c), grp.canonicalize(a_bc)) <= 1e-9);
            CHECK(dist_inf(grp.canonicalize(grp.multiply(a, grp.identity)),
                           grp.canonicalize(a)) <= 1e-9);
            CHECK(dist_inf(grp.canonicalize(grp.multiply(a, grp.invert(a))),
                           grp.canonicalize(grp.identity)) <= 1e-9);

            // action axioms
            Vec x = random_base(rng, G->base_dim());
            CHECK(dist_inf(G->act(x, grp.identity), x) <= 1e-9);
            Vec lhs = G->act(G->act(x, a), b);
            Vec rhs = G->act(x, grp.multiply(a, b));
            CHECK(dist_inf(lhs, rhs) <= 1e-9);

            // expression form of multiply matches the callable form
            Vec packed = a;
            packed.insert(packed.end(), b.begin(), b.end());
            Vec want = grp.multiply(a, b);
            Vec got(want.size());
            for (int i = 0; i < G->group_dim(); ++i)
                got[std::size_t(i)] = grp.multiply_expr[std::size_t(i)].eval(packed).real();
            CHECK(dist_inf(grp.canonicalize(got), grp.canonicalize(want)) <= 1e-9);
        }
    }
}

TEST_CASE("groupoid laws on random composable arrows") {
    for (const char* name : {"translation1", "translation2", "aff_line", "rotation2"}) {
        GroupoidPtr G = find_groupoid(name);
        CAPTURE(name);
        Rng rng(77);
        for (int it = 0; it < 100; ++it) {
            Vec x = random_base(rng, G->base_dim());
            Arrow g{x, random_atom(rng, *G)};
            Arrow h{G->source(g), random_atom(rng, *G)};
            Arrow k{G->source(h), random_atom(rng, *G)};

            Arrow lhs = G->compose(G->compose(g, h), k);
            Arrow rhs = G->compose(g, G->compose(h, k));
            CHECK(dist_inf(lhs.base, rhs.base) <= 1e-9);
            CHECK(dist_inf(lhs.group, rhs.group) <= 1e-9);

            Arrow gu = G->compose(g, G->unit(G->source(g)));
            CHECK(dist_inf(gu.group, G->canonical(g.group)) <= 1e-9);

            Arrow ginv = G->compose(g, G->inverse(g));
            CHECK(dist_inf(ginv.group, G->group().identity) <= 1e-9);
            CHECK(dist_inf(ginv.base, g.base) <= 1e-9);
        }
    }
}

TEST_CASE("pullback through group elements") {
    GroupoidPtr T = find_groupoid("translation1");
    ScalarExpr f = pow_i(coordinate(1, 0), 2);

    ScalarExpr unchanged = T->pullback(f, T->group().identity);
    for (double p : {-1.0, 0.3, 2.0}) CHECK(unchanged.eval({p}) == f.eval({p}));

    ScalarExpr moved = T->pullback(f, Vec{1.0});  // (1·f)(x) = f(x+1)
    for (double p : {-1.0, 0.0, 2.5})
        CHECK(moved.eval({p}).real() == doctest::Approx((p + 1) * (p + 1)));

    for (const char* name : {"translation1", "aff_line", "rotation2"}) {
        GroupoidPtr G = find_groupoid(name);
        CAPTURE(name);
        Rng rng(13);
        for (int it = 0; it < 100; ++it) {
            Coefficient c = random_coefficient(rng, *G);
            Vec h1 = random_atom(rng, *G), h2 = random_atom(rng, *G);
            // ((h1 h2) f) = (h1 (h2 f)) pointwise
            ScalarExpr lhs = G->pullback(c.expr, G->group().multiply(h1, h2));
            ScalarExpr rhs = G->pullback(G->pullback(c.expr, h2), h1);
            Vec p = random_base(rng, G->base_dim());
            const Complex av = lhs.eval(p), bv = rhs.eval(p);
            CHECK(std::abs(av - bv) <= 1e-9 * (1.0 + std::abs(av)));
        }
    }
}

TEST_CASE("rotation angles wrap to the canonical range") {
    GroupoidPtr R = find_groupoid("rotation2");
    Arrow g{{1.0, 0.0}, {3.0}}, h{R->source(g), Vec{3.0}};
    Arrow c = R->compose(g, h);
    CHECK(c.group[0] == doctest::Approx(6.0 - 2.0 * std::numbers::pi));
    Vec s = R->source(c);
    Vec direct = R->act(Vec{1.0, 0.0}, Vec{6.0});
    CHECK(dist_inf(s, direct) <= 1e-9);
}

TEST_CASE("catalog is stable and documented") {
    const auto& cat = groupoid_catalog();
    CHECK(cat.size() >= 5);
    CHECK(cat[0]->name() == "translation1");
    CHECK_THROWS_AS((void)find_groupoid("nope"), std::invalid_argument);
}
