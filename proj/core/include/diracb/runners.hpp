#pragma once

#include <map>
#include <string>

#include "diracb/scenario.hpp"

namespace diracb {

/// Outcome of one CLI command: a deterministic JSON report, CSV sweeps keyed
/// by filename, and the overall verdict (exit code 1 when false).
struct CommandReport {
    std::string json;
    std::map<std::string, std::string> csv;
    bool ok = true;
};

CommandReport run_axioms(const Scenario& s);
CommandReport run_converge(const Scenario& s);
CommandReport run_reconstruct(const Scenario& s);
CommandReport run_dual(const Scenario& s);
CommandReport run_list();

}  // namespace diracb
