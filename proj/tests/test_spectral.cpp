#include <cmath>

#include "diracb/grammar.hpp"
#include "diracb/spectral.hpp"
#include "doctest.h"

using namespace diracb;

namespace {

std::vector<double> default_radii(double r) { return {0.5 * r, 0.25 * r, 0.125 * r}; }

GermBattery battery_for(GroupoidPtr G, std::uint64_t seed = 303) {
    Rng rng(seed);
    return random_germ_battery(rng, *G, 12);
}

}  // namespace

TEST_CASE("make_arrow produces normalized witnesses") {
    GroupoidPtr T = find_groupoid("translation1");
    ArrowGerm g = make_arrow(T, Vec{1.0}, Vec{2.0}, 0.4);

    const auto& term = g.witness.terms().at(0);
    CHECK(term.coef.expr.eval({1.0}).real() == 1.0);
    for (double dx : {-0.39, -0.2, 0.0, 0.17, 0.39})
        CHECK(term.coef.expr.eval({1.0 + dx}).real() == 1.0);

    // counit germ is 1
    CHECK(counit(g.witness).expr.eval({1.0}).real() == doctest::Approx(1.0).epsilon(1e-15));

    // theta on the constant function is 1, and picks out F(x,h) in general
    CHECK(theta_character(g, constant(2, 1.0)).real() == doctest::Approx(1.0));
    ArrowGerm h3 = make_arrow(T, Vec{0.0}, Vec{3.0}, 0.4);
    CHECK(theta_character(h3, coordinate(2, 1)).real() == doctest::Approx(3.0));

    CHECK_THROWS_AS(make_arrow(T, Vec{0.0}, Vec{1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("germ equality is radius independent and separating") {
    GroupoidPtr T = find_groupoid("translation1");
    auto bat = battery_for(T);

    ArrowGerm a = make_arrow(T, Vec{0.5}, Vec{1.0}, 0.4);
    CHECK(germ_equal(a, a, default_radii(0.4), bat.funcs, 1e-9));

    // same arrow, different normalization radius
    ArrowGerm b = make_arrow(T, Vec{0.5}, Vec{1.0}, 0.25);
    CHECK(germ_equal(a, b, default_radii(0.25), bat.funcs, 1e-9));

    // different atoms are separated (h-polynomials are in the battery)
    ArrowGerm c = make_arrow(T, Vec{0.5}, Vec{-1.0}, 0.4);
    CHECK_FALSE(germ_equal(a, c, default_radii(0.4), bat.funcs, 1e-9));

    ArrowGerm far = make_arrow(T, Vec{2.0}, Vec{1.0}, 0.4);
    CHECK_THROWS_AS((void)germ_equal(a, far, default_radii(0.4), bat.funcs, 1e-9),
                    std::invalid_argument);
}

TEST_CASE("grouplike recognition") {
    GroupoidPtr T = find_groupoid("translation1");
    auto bat = battery_for(T);

    ArrowGerm g = make_arrow(T, Vec{0.0}, Vec{1.5}, 0.4);
    CHECK(is_grouplike(g, bat.pairs, 1e-9));

    // scaled witness: counit germ is 2
    ArrowGerm bad = g;
    bad.witness = g.witness.scaled(Complex(2.0, 0.0));
    CHECK_FALSE(is_grouplike(bad, bat.pairs, 1e-9));

    // a genuine two-atom sum is not grouplike
    ArrowGerm two = g;
    ScalarExpr p = plateau1d(1, 0, 0.0, 0.4, 0.8);
    Coefficient c{constant(1, 0.5) * p, Box::cube(1, -0.8, 0.8)};
    two.witness = DiracSection::generator(T, c, Vec{1.5}) +
                  DiracSection::generator(T, c, Vec{-2.0});
    CHECK_FALSE(is_grouplike(two, bat.pairs, 1e-9));
}

TEST_CASE("source extraction through T_a") {
    GroupoidPtr T = find_groupoid("translation1");
    ArrowGerm unit = make_arrow(T, Vec{0.7}, Vec{0.0}, 0.4);
    CHECK(germ_source(unit)[0] == doctest::Approx(0.7));

    ArrowGerm g = make_arrow(T, Vec{1.0}, Vec{2.0}, 0.4);
    CHECK(germ_source(g)[0] == doctest::Approx(3.0).epsilon(1e-12));

    GroupoidPtr A = find_groupoid("aff_line");
    ArrowGerm ga = make_arrow(A, Vec{1.0}, Vec{2.0, 4.0}, 0.3);
    CHECK(germ_source(ga)[0] == doctest::Approx(6.0).epsilon(1e-12));

    // a broken witness fails the probe verification
    ArrowGerm broken = g;
    broken.witness = g.witness.scaled(Complex(0.5, 0.0));
    CHECK_THROWS_AS((void)germ_source(broken), std::runtime_error);

    // witness independence: different plateau widths give the same source
    ArrowGerm g2 = make_arrow(T, Vec{1.0}, Vec{2.0}, 0.15);
    CHECK(std::abs(germ_source(g)[0] - germ_source(g2)[0]) <= 1e-9);
}

TEST_CASE("germ composition and inverse") {
    GroupoidPtr T = find_groupoid("translation1");
    auto bat = battery_for(T);

    ArrowGerm g = make_arrow(T, Vec{0.0}, Vec{1.0}, 0.4);
    ArrowGerm h = make_arrow(T, Vec{1.0}, Vec{2.0}, 0.4);
    ArrowGerm gh = germ_compose(g, h);
    ArrowGerm direct = make_arrow(T, Vec{0.0}, Vec{3.0}, gh.r_norm);
    CHECK(germ_equal(gh, direct, default_radii(gh.r_norm), bat.funcs, 1e-9));

    // g composed with the unit at its source is g
    ArrowGerm unit = make_arrow(T, germ_source(g), Vec{0.0}, 0.4);
    ArrowGerm gu = germ_compose(g, unit);
    CHECK(germ_equal(gu, g, default_radii(gu.r_norm), bat.funcs, 1e-9));

    // g·g^{-1} is the unit germ at the target
    ArrowGerm inv = germ_inverse(g);
    ArrowGerm round = germ_compose(g, inv);
    ArrowGerm expect = make_arrow(T, Vec{0.0}, Vec{0.0}, round.r_norm);
    CHECK(germ_equal(round, expect, default_radii(round.r_norm), bat.funcs, 1e-9));

    CHECK_THROWS_AS((void)germ_compose(g, make_arrow(T, Vec{5.0}, Vec{1.0}, 0.4)),
                    std::invalid_argument);
}

TEST_CASE("theta separates and is multiplicative") {
    GroupoidPtr T = find_groupoid("translation1");
    Rng rng(909);
    for (int it = 0; it < 100; ++it) {
        Vec x = {rng.uniform(-1.0, 1.0)};
        Vec h = random_atom(rng, *T);
        ArrowGerm g = make_arrow(T, x, h, 0.35);
        ScalarExpr F = random_test_function(rng, *T);
        ScalarExpr G = random_test_function(rng, *T);
        const Complex lhs = theta_character(g, F * G);
        const Complex rhs = theta_character(g, F) * theta_character(g, G);
        CHECK(relative_gap(lhs, rhs) <= 1e-12);
    }

    // separation of distinct germs by the default battery
    auto bat = battery_for(T);
    ArrowGerm a = make_arrow(T, Vec{0.2}, Vec{1.0}, 0.35);
    ArrowGerm b = make_arrow(T, Vec{0.2}, Vec{1.5}, 0.35);
    double best = 0.0;
    for (const auto& F : bat.funcs)
        best = std::max(best, std::abs(theta_character(a, F) - theta_character(b, F)));
    CHECK(best > 1e-3);
}

TEST_CASE("reconstruction round trips per catalog groupoid") {
    for (const char* name : {"translation1", "translation2", "bundle1", "aff_point", "aff_line",
                             "rotation2"}) {
        CAPTURE(name);
        GroupoidPtr G = find_groupoid(name);
        Rng rng(4242);
        std::vector<RoundTripSample> samples;
        for (int i = 0; i < 60; ++i) {
            Vec x(std::size_t(G->base_dim()));
            for (double& c : x) c = rng.uniform(-1.5, 1.5);
            samples.push_back(RoundTripSample{Arrow{x, random_atom(rng, *G)},
                                              random_atom(rng, *G)});
        }
        GermBattery bat = random_germ_battery(rng, *G, 12);
        RoundTripReport rep = reconstruct_round_trip(G, samples, bat, 0.4, 1e-9);
        CHECK(rep.samples == 60);
        CHECK(rep.max_target_dev <= 1e-9);
        CHECK(rep.max_source_dev <= 1e-9);
        CHECK(rep.compose_failures == 0);
        CHECK(rep.inverse_failures == 0);
        CHECK(rep.grouplike_failures == 0);
        CHECK(rep.corrupted_accepted == 0);
        CHECK(rep.passed(1e-9));
    }
}

TEST_CASE("angle wrap in rotation round trips") {
    GroupoidPtr R = find_groupoid("rotation2");
    // h and h2 sum past pi so the composed atom wraps
    ArrowGerm g = make_arrow(R, Vec{1.0, 0.0}, Vec{2.0}, 0.3);
    Vec src = germ_source(g);
    ArrowGerm h = make_arrow(R, src, Vec{2.5}, 0.3);
    ArrowGerm gh = germ_compose(g, h);
    const double wrapped = gh.witness.terms()[0].atom[0];
    CHECK(wrapped == doctest::Approx(4.5 - 2.0 * std::numbers::pi));

    ArrowGerm direct = make_arrow(R, Vec{1.0, 0.0}, Vec{4.5}, gh.r_norm);
    GermBattery bat = battery_for(R);
    CHECK(germ_equal(gh, direct, default_radii(gh.r_norm), bat.funcs, 1e-9));
}
