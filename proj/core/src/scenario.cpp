#include "diracb/scenario.hpp"

#include <fstream>
#include <sstream>

#include "diracb/groupoid.hpp"
#include "json.hpp"

namespace diracb {

namespace {

using nlohmann::json;

template <typename T>
void read_into(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("scenario: invalid JSON: ") + e.what());
    }
    Scenario s;
    try {
        if (j.contains("groupoid")) {
            if (j["groupoid"].is_string())
                s.groupoid = j["groupoid"].get<std::string>();
            else
                read_into(j["groupoid"], "name", s.groupoid);
        }
        read_into(j, "seed", s.seed);
        read_into(j, "jobs", s.jobs);
        if (j.contains("tolerances")) {
            const auto& t = j["tolerances"];
            read_into(t, "tol_axiom", s.tol_axiom);
            read_into(t, "tol_fd", s.tol_fd);
            read_into(t, "eps_grp", s.eps_grp);
        }
        if (j.contains("battery")) {
            const auto& b = j["battery"];
            read_into(b, "tensor_pairs", s.tensor_pairs);
            read_into(b, "points", s.battery_points);
            read_into(b, "functions", s.battery_functions_count);
            read_into(b, "functions_text", s.battery_functions);
        }
        if (j.contains("probe_sections")) {
            for (const auto& sec : j["probe_sections"]) {
                SectionSpec spec;
                for (const auto& t : sec) {
                    SectionSpec::Term term;
                    term.coef = t.at("coef").get<std::string>();
                    term.atom = t.at("atom").get<std::vector<double>>();
                    spec.terms.push_back(std::move(term));
                }
                s.probe_sections.push_back(std::move(spec));
            }
        }
        if (j.contains("instances")) {
            const auto& i = j["instances"];
            read_into(i, "axiom_tuples", s.axiom_tuples);
            read_into(i, "oracle_samples", s.oracle_samples);
            read_into(i, "reconstruct_samples", s.reconstruct_samples);
            read_into(i, "separation_pairs", s.separation_pairs);
            read_into(i, "mollify_sections", s.mollify_sections);
        }
        if (j.contains("sweeps")) {
            const auto& w = j["sweeps"];
            if (w.contains("comb")) {
                read_into(w["comb"], "k", s.comb_k);
                read_into(w["comb"], "L", s.comb_L);
                read_into(w["comb"], "n", s.comb_n);
            }
            if (w.contains("family")) read_into(w["family"], "n", s.family_n);
            if (w.contains("stencil")) {
                read_into(w["stencil"], "t", s.stencil_t);
                read_into(w["stencil"], "orders", s.stencil_orders);
            }
            if (w.contains("mollify")) read_into(w["mollify"], "t", s.mollify_t);
        }
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("scenario: bad field: ") + e.what());
    }
    validate(s);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("scenario: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

void validate(const Scenario& s) {
    GroupoidPtr G;
    try {
        G = find_groupoid(s.groupoid);
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string("scenario: ") + e.what());
    }
    for (const auto& text : s.battery_functions) {
        try {
            (void)parse_expr(text, G->total_dim());
        } catch (const std::exception& e) {
            throw ScenarioError("scenario: bad battery function '" + text + "': " + e.what());
        }
    }
    for (const auto& spec : s.probe_sections) {
        if (spec.terms.empty()) throw ScenarioError("scenario: empty probe section");
        for (const auto& t : spec.terms) {
            if (static_cast<int>(t.atom.size()) != G->group_dim())
                throw ScenarioError("scenario: probe section atom dimension mismatch");
            try {
                ScalarExpr coef = parse_expr(t.coef, G->base_dim());
                if (G->base_dim() > 0 && !structural_support(coef))
                    throw ScenarioError(
                        "scenario: probe section coefficient has no evident support box");
            } catch (const ScenarioError&) {
                throw;
            } catch (const std::exception& e) {
                throw ScenarioError("scenario: bad probe coefficient '" + t.coef + "': " +
                                    e.what());
            }
        }
    }
    if (s.tol_axiom <= 0.0 || s.tol_fd <= 0.0 || s.eps_grp <= 0.0)
        throw ScenarioError("scenario: tolerances must be positive");
    if (s.tensor_pairs < 1 || s.battery_points < 1 || s.battery_functions_count < 1)
        throw ScenarioError("scenario: battery sizes must be at least 1");
    if (s.axiom_tuples < 1 || s.oracle_samples < 1 || s.reconstruct_samples < 1 ||
        s.separation_pairs < 1 || s.mollify_sections < 1)
        throw ScenarioError("scenario: instance counts must be at least 1");
    if (s.comb_k.empty() || s.comb_L.empty() || s.comb_n.empty() || s.family_n.empty() ||
        s.stencil_t.empty() || s.stencil_orders.empty() || s.mollify_t.empty())
        throw ScenarioError("scenario: sweep grids must be nonempty");
    for (int k : s.comb_k)
        if (k < 1 || k > 2) throw ScenarioError("scenario: comb k must be 1 or 2");
    for (double L : s.comb_L)
        if (L <= 0.0) throw ScenarioError("scenario: comb L must be positive");
    for (int n : s.comb_n)
        if (n < 1) throw ScenarioError("scenario: comb n must be >= 1");
    for (double t : s.stencil_t)
        if (t <= 0.0) throw ScenarioError("scenario: stencil steps must be positive");
    for (double t : s.mollify_t)
        if (t <= 0.0) throw ScenarioError("scenario: mollifier scales must be positive");
    if (s.jobs < 1) throw ScenarioError("scenario: jobs must be >= 1");
}

}  // namespace diracb
