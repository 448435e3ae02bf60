#include "diracb/runners.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace diracb;
using nlohmann::json;

namespace {

Scenario small_scenario(const std::string& groupoid) {
    Scenario s;
    s.groupoid = groupoid;
    s.axiom_tuples = 8;
    s.oracle_samples = 20;
    s.reconstruct_samples = 20;
    s.tensor_pairs = 12;
    s.battery_points = 8;
    s.battery_functions_count = 8;
    return s;
}

}  // namespace

TEST_CASE("scenario parsing and validation") {
    Scenario d = parse_scenario("{}");
    CHECK(d.groupoid == "translation1");
    CHECK(d.seed == 42);
    CHECK(d.tol_axiom == doctest::Approx(1e-9));

    Scenario s = parse_scenario(R"({
        "groupoid": {"name": "aff_line"},
        "seed": 7,
        "tolerances": {"tol_axiom": 1e-8, "tol_fd": 1e-4, "eps_grp": 1e-9},
        "battery": {"tensor_pairs": 10, "points": 5, "functions": 6},
        "instances": {"axiom_tuples": 12},
        "sweeps": {"comb": {"k": [1], "L": [1.0], "n": [4, 8]}}
    })");
    CHECK(s.groupoid == "aff_line");
    CHECK(s.seed == 7);
    CHECK(s.tol_axiom == doctest::Approx(1e-8));
    CHECK(s.tensor_pairs == 10);
    CHECK(s.axiom_tuples == 12);
    CHECK(s.comb_n == std::vector<int>{4, 8});

    CHECK_THROWS_AS((void)parse_scenario("not json"), ScenarioError);
    CHECK_THROWS_AS((void)parse_scenario(R"({"groupoid": "unknown"})"), ScenarioError);
    CHECK_THROWS_AS((void)parse_scenario(R"({"tolerances": {"tol_axiom": 0}})"), ScenarioError);
    CHECK_THROWS_AS((void)parse_scenario(R"({"sweeps": {"comb": {"n": []}}})"), ScenarioError);
    CHECK_THROWS_AS((void)parse_scenario(R"({"battery": {"points": 0}})"), ScenarioError);
}

TEST_CASE("axioms command") {
    CommandReport rep = run_axioms(small_scenario("translation1"));
    CHECK(rep.ok);
    json j = json::parse(rep.json);
    CHECK(j["schema"] == 1);
    CHECK(j["command"] == "axioms");
    CHECK(j["pass"] == true);
    CHECK(j["results"].size() >= 14);
    for (const auto& law : j["results"]) {
        CHECK(law["pass"] == true);
        CHECK(law["max_relative_deviation"].get<double>() <= 1e-9);
    }

    SUBCASE("unattainable tolerance is a controlled failure") {
        Scenario strict = small_scenario("translation1");
        strict.tol_axiom = 1e-30;
        CommandReport bad = run_axioms(strict);
        CHECK_FALSE(bad.ok);
        CHECK(json::parse(bad.json)["pass"] == false);
    }
}

TEST_CASE("reconstruct command") {
    CommandReport rep = run_reconstruct(small_scenario("aff_line"));
    CHECK(rep.ok);
    json j = json::parse(rep.json);
    CHECK(j["samples"] == 20);
    CHECK(j["corrupted_witnesses_accepted"] == 0);
}

TEST_CASE("dual command") {
    for (const char* name : {"translation1", "rotation2"}) {
        CAPTURE(name);
        CommandReport rep = run_dual(small_scenario(name));
        CHECK(rep.ok);
        json j = json::parse(rep.json);
        CHECK(j["separation"]["pass"] == true);
        CHECK(j["product_law"]["pass"] == true);
        CHECK(j["conjugation_law"]["pass"] == true);
        CHECK(j["module_law"]["pass"] == true);
    }
}

TEST_CASE("catalog listing is stable") {
    CommandReport a = run_list();
    CommandReport b = run_list();
    CHECK(a.json == b.json);
    json j = json::parse(a.json);
    CHECK(j["groupoids"].size() >= 5);
    CHECK(j["groupoids"][0]["name"] == "translation1");
}

TEST_CASE("reports are byte-identical for a fixed seed") {
    Scenario s = small_scenario("aff_line");
    CommandReport a = run_axioms(s);
    CommandReport b = run_axioms(s);
    CHECK(a.json == b.json);

    s.jobs = 2;
    CommandReport c = run_axioms(s);
    CHECK(a.json == c.json);

    s.seed = 99;
    CommandReport d = run_axioms(s);
    CHECK(a.json != d.json);
}

TEST_CASE("serialized expressions and sections in scenarios") {
    // canonical prefix text consumed from the scenario ...
    Scenario s = parse_scenario(R"json({
        "groupoid": "translation1",
        "battery": {"functions_text": ["(* x1 x1)", "(+ x0 (sin x1))"]},
        "probe_sections": [
            [{"coef": "(bump x0 0 1)", "atom": [2.0]}],
            [{"coef": "(* 2 (plateau x0 0 0.5 1))", "atom": [-1.0]},
             {"coef": "(bump x0 1 1)", "atom": [0.5]}]
        ],
        "instances": {"axiom_tuples": 6, "oracle_samples": 10, "reconstruct_samples": 5,
                       "separation_pairs": 4}
    })json");
    CHECK(s.battery_functions.size() == 2);
    CHECK(s.probe_sections.size() == 2);

    CommandReport axioms = run_axioms(s);
    CHECK(axioms.ok);

    // ... and echoed back by the dual command in the same form
    CommandReport dual = run_dual(s);
    CHECK(dual.ok);
    json j = json::parse(dual.json);
    REQUIRE(j["separation"]["sections"].size() == 4);
    const auto& first = j["separation"]["sections"][0];
    REQUIRE(first.size() == 1);
    CHECK(first[0]["atom"] == std::vector<double>{2.0});
    CHECK(first[0]["coef"].get<std::string>().find("bump") != std::string::npos);

    // bad expression text and bad sections are invalid scenarios
    CHECK_THROWS_AS(
        (void)parse_scenario(R"json({"battery": {"functions_text": ["(nope 1)"]}})json"),
        ScenarioError);
    CHECK_THROWS_AS(
        (void)parse_scenario(
            R"json({"probe_sections": [[{"coef": "x0", "atom": [1.0]}]]})json"),
        ScenarioError);  // no evident support box
    CHECK_THROWS_AS(
        (void)parse_scenario(
            R"json({"probe_sections": [[{"coef": "(bump x0 0 1)", "atom": [1.0, 2.0]}]]})json"),
        ScenarioError);  // atom dimension mismatch
}

TEST_CASE("sweep CSV schema") {
    Scenario s;
    s.comb_k = {1};
    s.comb_L = {1.0};
    s.comb_n = {4, 8};
    s.family_n = {4, 8};
    s.mollify_sections = 2;
    CommandReport rep = run_converge(s);
    REQUIRE(rep.csv.count("comb_k1_L1.csv") == 1);
    const std::string& text = rep.csv.at("comb_k1_L1.csv");
    CHECK(text.rfind("parameter,error,bound,satisfied\n", 0) == 0);
    CHECK(text.find("true") != std::string::npos);
}
