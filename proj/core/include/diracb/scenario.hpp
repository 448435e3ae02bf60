#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace diracb {

/// Raised for malformed scenario input; the CLI maps it to exit code 2.
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dirac section in the canonical wire form: (coefficient expression text,
/// atom vector) per term. Coefficients use the prefix expression syntax and
/// must have a structurally evident support box.
struct SectionSpec {
    struct Term {
        std::string coef;
        std::vector<double> atom;
    };
    std::vector<Term> terms;
};

struct Scenario {
    std::string groupoid = "translation1";
    std::uint64_t seed = 42;

    /// Extra test functions (prefix text over R^{l+k}) appended to the
    /// generated batteries.
    std::vector<std::string> battery_functions;
    /// Explicit sections for the duality separation check.
    std::vector<SectionSpec> probe_sections;

    double tol_axiom = 1e-9;
    double tol_fd = 1e-5;
    double eps_grp = 1e-9;

    int tensor_pairs = 32;
    int battery_points = 16;
    int battery_functions_count = 16;

    int axiom_tuples = 100;
    int oracle_samples = 200;
    int reconstruct_samples = 1000;
    int separation_pairs = 10;
    int mollify_sections = 20;

    std::vector<int> comb_k = {1, 2};
    std::vector<double> comb_L = {1.0, 2.0};
    std::vector<int> comb_n = {4, 8, 16, 32, 64};
    std::vector<int> family_n = {4, 8, 16, 32, 64};
    std::vector<double> stencil_t = {0.1, 0.05, 0.025};
    std::vector<int> stencil_orders = {1, 2, 3, 4};
    std::vector<double> mollify_t = {0.1, 0.01};

    int jobs = 1;
};

/// Parse + validate; throws ScenarioError on bad content.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);
void validate(const Scenario& s);

}  // namespace diracb
