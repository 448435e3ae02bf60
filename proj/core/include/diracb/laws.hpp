#pragma once

#include <cstdint>
#include <string>

#include "diracb/grammar.hpp"

namespace diracb {

struct LawResult {
    std::string law;
    int instances = 0;
    double max_relative_deviation = 0.0;
    bool pass = false;
};

struct LawSuiteConfig {
    std::uint64_t seed = 42;
    int tuples = 100;        // random generator tuples per law
    int tensor_pairs = 32;   // (F,G) pairs per tensor-equality check
    int points = 16;         // sample points per check
    int functions = 16;      // probe functions for section-equality checks
    double tol = 1e-9;
    int jobs = 1;
    std::vector<ScalarExpr> extra_functions;  // appended to every battery
};

/// The bialgebroid/antipode law suite on random generator tuples:
/// coassociativity, counit laws, cocommutativity, multiplicativity of Delta
/// and eps, antipode antihomomorphism/involution/axiom, S|_R = id,
/// convolution associativity, local units, local-unit independence.
std::vector<LawResult> run_hopf_laws(GroupoidPtr G, const LawSuiteConfig& cfg);

/// Generator-formula convolution against the definitional double evaluation
/// on random (u, v, F, x).
LawResult run_oracle_agreement(GroupoidPtr G, std::uint64_t seed, int samples, double tol);

}  // namespace diracb
