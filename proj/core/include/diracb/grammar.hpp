#pragma once

#include <cstdint>

#include "diracb/section.hpp"
#include "diracb/spectral.hpp"

namespace diracb {

/// Deterministic 64-bit generator (splitmix64); identical streams on every
/// platform for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform(double lo, double hi) {
        const double u = double(next_u64() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    int uniform_int(int lo, int hi) {  // inclusive
        return lo + int(next_u64() % std::uint64_t(hi - lo + 1));
    }

    bool chance(double p) { return uniform(0.0, 1.0) < p; }

private:
    std::uint64_t state_;
};

/// Random grammar used throughout the property suites: polynomials of degree
/// <= 4, products with bumps/plateaus on the base, sin/cos in the group
/// coordinates of compact groups.

/// Polynomial of degree <= max_deg in every coordinate, coefficients in [-1,1].
ScalarExpr random_poly(Rng& rng, int dim, int max_deg);

/// Compactly supported coefficient on the groupoid base (box attached).
Coefficient random_coefficient(Rng& rng, const ActionGroupoid& G, bool complex_coeffs = false);

/// Group parameters in the per-group sampling ranges.
Vec random_atom(Rng& rng, const ActionGroupoid& G);

DiracSection random_section(Rng& rng, GroupoidPtr G, int min_terms, int max_terms,
                            bool complex_coeffs = false);

/// Test function over R^{l+k}: separates desk-scale sections; periodic in the
/// group coordinate for compact groups.
ScalarExpr random_test_function(Rng& rng, const ActionGroupoid& G);

std::vector<std::pair<ScalarExpr, ScalarExpr>> random_pair_battery(Rng& rng,
                                                                   const ActionGroupoid& G,
                                                                   int count);

/// Base points spread over the union of the sections' support boxes.
std::vector<Vec> sample_points(Rng& rng, const ActionGroupoid& G,
                               std::span<const DiracSection> sections, int count);

std::vector<Probe> random_probe_battery(Rng& rng, const ActionGroupoid& G,
                                        std::span<const DiracSection> sections, int functions,
                                        int points);

GermBattery random_germ_battery(Rng& rng, const ActionGroupoid& G, int functions);

}  // namespace diracb
