// Acceptance suite: every criterion runs at its stated tolerance and prints
// one pass/fail line. Tolerances are pinned here, not configurable.

#include <cstdio>

#include "diracb/laws.hpp"
#include "diracb/runners.hpp"
#include "diracb/spectral.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace diracb;
using nlohmann::json;

namespace {

constexpr double kTolAxiom = 1e-9;

void verdict(int criterion, const char* what, bool ok) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, what);
}

const std::vector<std::string>& axiom_groupoids() {
    static const std::vector<std::string> names = {"translation1", "aff_point", "aff_line",
                                                   "rotation2"};
    return names;
}

json converge_report() {
    static const json report = [] {
        Scenario s;  // default sweep grids: k in {1,2}, L in {1,2}, n in {4..64}
        return json::parse(run_converge(s).json);
    }();
    return report;
}

}  // namespace

TEST_CASE("criterion 1: bialgebroid and antipode laws at 1e-9") {
    bool all_ok = true;
    for (const auto& name : axiom_groupoids()) {
        LawSuiteConfig cfg;  // 100 tuples, 32 pairs x 16 points, tol 1e-9
        cfg.tol = kTolAxiom;
        cfg.jobs = 2;
        auto results = run_hopf_laws(find_groupoid(name), cfg);
        REQUIRE(results.size() >= 13);
        for (const auto& r : results) {
            CAPTURE(name);
            CAPTURE(r.law);
            CHECK(r.instances >= 100);
            CHECK(r.max_relative_deviation <= kTolAxiom);
            all_ok = all_ok && r.pass;
        }
    }
    verdict(1, "Hopf-algebroid axiom suite on 4 catalog groupoids x 100 tuples", all_ok);
    CHECK(all_ok);
}

TEST_CASE("criterion 2: generator convolution agrees with the definitional oracle") {
    bool all_ok = true;
    for (const auto& name : axiom_groupoids()) {
        LawResult r = run_oracle_agreement(find_groupoid(name), 42, 200, kTolAxiom);
        CAPTURE(name);
        CHECK(r.instances == 200);
        CHECK(r.max_relative_deviation <= kTolAxiom);
        all_ok = all_ok && r.pass;
    }
    verdict(2, "convolution multiplicativity on 200 random (u,v,F,x) per groupoid", all_ok);
    CHECK(all_ok);
}

TEST_CASE("criterion 3: Riemann-comb error bound, rate and spot value") {
    json rep = converge_report();
    bool ok = true;
    int comb_sweeps = 0;
    for (const auto& sw : rep["sweeps"]) {
        if (sw["sweep"] != "comb") continue;
        ++comb_sweeps;
        CHECK(sw["all_bounds_satisfied"] == true);
        const double rate = sw["rate"].get<double>();
        CHECK(rate >= 0.8);
        CHECK(rate <= 1.2);
        ok = ok && sw["all_bounds_satisfied"] == true && rate >= 0.8 && rate <= 1.2;
    }
    CHECK(comb_sweeps == 4);  // k in {1,2} x L in {1,2}

    REQUIRE(rep.contains("spot"));
    const double spot = rep["spot"]["error"].get<double>();
    CHECK(std::abs(spot - 0.010417) <= 1e-6);
    ok = ok && std::abs(spot - 0.010417) <= 1e-6;

    verdict(3, "comb bound rows, rate in [0.8, 1.2], spot error 0.010417 +- 1e-6", ok);
    CHECK(ok);
}

TEST_CASE("criterion 4: family-comb derivative-level bound") {
    json rep = converge_report();
    bool ok = false;
    for (const auto& sw : rep["sweeps"]) {
        if (sw["sweep"] != "family_comb") continue;
        CHECK(sw["all_bounds_satisfied"] == true);
        const double rate = sw["rate"].get<double>();
        CHECK(rate >= 0.9);
        ok = sw["all_bounds_satisfied"] == true && rate >= 0.9;
    }
    verdict(4, "family-comb bound for |alpha| <= 2, fitted rate >= 0.9", ok);
    CHECK(ok);
}

TEST_CASE("criterion 5: stencil convergence and exactness") {
    json rep = converge_report();
    bool ok = true;
    int orders = 0;
    for (const auto& sw : rep["sweeps"]) {
        if (sw["sweep"] == "stencil") {
            ++orders;
            CHECK(sw["halving_ratios_ok"] == true);
            CHECK(sw["exact_on_low_degree"] == true);
            CHECK(sw["exactness_max_relative_deviation"].get<double>() <= 1e-8);
            ok = ok && sw["halving_ratios_ok"] == true && sw["exact_on_low_degree"] == true;
        }
        if (sw["sweep"] == "stencil_multi") {
            CHECK(sw["betas"].size() == 4);
            for (const auto& b : sw["betas"]) {
                CHECK(b["halving_ratios_ok"] == true);
                ok = ok && b["halving_ratios_ok"] == true;
            }
        }
    }
    CHECK(orders == 4);
    verdict(5, "stencil orders 1-4 and multi-indices: 4x error drop per halving, exact on "
               "low-degree polynomials", ok);
    CHECK(ok);
}

TEST_CASE("criterion 6: mollifier convergence and unit mass") {
    json rep = converge_report();
    bool ok = false;
    for (const auto& sw : rep["sweeps"]) {
        if (sw["sweep"] != "mollify") continue;
        CHECK(sw["sections"] == 20);
        CHECK(sw["all_decreasing"] == true);
        CHECK(sw["mass_ok"] == true);
        CHECK(sw["max_mass_deviation"].get<double>() <= 1e-6);
        ok = sw["all_decreasing"] == true && sw["mass_ok"] == true;
    }
    verdict(6, "20 mollified sections improve from t=0.1 to t=0.01; mass = 1 +- 1e-6", ok);
    CHECK(ok);
}

TEST_CASE("criterion 7: duality surrogates") {
    bool ok = true;
    for (const auto& name : axiom_groupoids()) {
        Scenario s;
        s.groupoid = name;
        CommandReport rep = run_dual(s);
        CAPTURE(name);
        json j = json::parse(rep.json);
        CHECK(j["separation"]["pairs"] == 10);
        CHECK(j["separation"]["pass"] == true);
        CHECK(j["product_law"]["max_relative_deviation"].get<double>() <= kTolAxiom);
        CHECK(j["conjugation_law"]["max_relative_deviation"].get<double>() <= kTolAxiom);
        ok = ok && rep.ok;
    }
    verdict(7, "separation, (FG)^ = F^·G^ and the conjugation law at 1e-9", ok);
    CHECK(ok);
}

TEST_CASE("criterion 8: spectral reconstruction round trips") {
    bool ok = true;
    for (const auto& g : groupoid_catalog()) {
        Scenario s;
        s.groupoid = g->name();
        s.reconstruct_samples = 1000;
        CommandReport rep = run_reconstruct(s);
        CAPTURE(g->name());
        json j = json::parse(rep.json);
        CHECK(j["samples"] == 1000);
        CHECK(j["max_target_deviation"].get<double>() <= kTolAxiom);
        CHECK(j["max_source_deviation"].get<double>() <= kTolAxiom);
        CHECK(j["compose_failures"] == 0);
        CHECK(j["inverse_failures"] == 0);
        CHECK(j["grouplike_failures"] == 0);
        CHECK(j["corrupted_witnesses_accepted"] == 0);
        ok = ok && rep.ok;
    }
    verdict(8, "1000-sample target/source/compose/inverse round trips on every catalog "
               "groupoid; corrupted witnesses rejected", ok);
    CHECK(ok);
}

TEST_CASE("criterion 9: reports are deterministic") {
    Scenario s;
    s.groupoid = "aff_line";
    s.axiom_tuples = 25;
    CommandReport a1 = run_axioms(s);
    CommandReport a2 = run_axioms(s);
    s.jobs = 2;
    CommandReport a3 = run_axioms(s);
    bool ok = a1.json == a2.json && a1.json == a3.json;

    Scenario c;
    c.mollify_sections = 3;
    CommandReport c1 = run_converge(c);
    CommandReport c2 = run_converge(c);
    ok = ok && c1.json == c2.json && c1.csv == c2.csv;

    verdict(9, "identical scenario + seed give byte-identical reports", ok);
    CHECK(ok);
}
