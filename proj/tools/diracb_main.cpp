#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "diracb/runners.hpp"

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
    std::string scenario_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool scenario_required) {
    auto* sc = cmd->add_option("--scenario", opts.scenario_path, "scenario JSON file");
    if (scenario_required) sc->required();
    cmd->add_option("--out", opts.out_dir, "output directory for reports");
    cmd->add_option("--seed", opts.seed, "override the scenario seed")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--jobs", opts.jobs, "worker threads for independent instances");
}

diracb::Scenario load(const CommonOpts& opts) {
    diracb::Scenario s = opts.scenario_path.empty() ? diracb::Scenario{}
                                                    : diracb::load_scenario(opts.scenario_path);
    if (opts.seed_set) s.seed = opts.seed;
    if (opts.jobs > 0) s.jobs = opts.jobs;
    diracb::validate(s);
    return s;
}

int write_outputs(const diracb::CommandReport& rep, const CommonOpts& opts,
                  const std::string& name) {
    fs::create_directories(opts.out_dir);
    const fs::path json_path = fs::path(opts.out_dir) / (name + "_report.json");
    std::ofstream(json_path) << rep.json;
    for (const auto& [file, text] : rep.csv) std::ofstream(fs::path(opts.out_dir) / file) << text;
    std::cout << rep.json;
    return rep.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dirac sections over action groupoids: axiom suites, convergence sweeps, "
                 "duality checks and spectral reconstruction round trips"};
    app.require_subcommand(1);

    CommonOpts axioms_opts, converge_opts, reconstruct_opts, dual_opts;
    auto* axioms = app.add_subcommand("axioms", "run the bialgebroid/antipode law suite");
    add_common(axioms, axioms_opts, false);
    auto* converge = app.add_subcommand("converge", "run comb/stencil/mollifier sweeps");
    add_common(converge, converge_opts, false);
    auto* reconstruct = app.add_subcommand("reconstruct", "groupoid reconstruction round trips");
    add_common(reconstruct, reconstruct_opts, false);
    auto* dual = app.add_subcommand("dual", "duality pairing checks");
    add_common(dual, dual_opts, false);
    auto* list = app.add_subcommand("list", "list the built-in groupoid catalog");
    std::string list_out = ".";
    list->add_option("--out", list_out, "output directory for reports");

    CLI11_PARSE(app, argc, argv);

    try {
        if (axioms->parsed())
            return write_outputs(diracb::run_axioms(load(axioms_opts)), axioms_opts, "axioms");
        if (converge->parsed())
            return write_outputs(diracb::run_converge(load(converge_opts)), converge_opts,
                                 "converge");
        if (reconstruct->parsed())
            return write_outputs(diracb::run_reconstruct(load(reconstruct_opts)),
                                 reconstruct_opts, "reconstruct");
        if (dual->parsed())
            return write_outputs(diracb::run_dual(load(dual_opts)), dual_opts, "dual");
        if (list->parsed()) {
            CommonOpts opts;
            opts.out_dir = list_out;
            return write_outputs(diracb::run_list(), opts, "list");
        }
    } catch (const diracb::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
