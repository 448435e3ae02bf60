#include <benchmark/benchmark.h>

#include "diracb/approx.hpp"
#include "diracb/grammar.hpp"
#include "diracb/spectral.hpp"

using namespace diracb;

namespace {

ScalarExpr sample_expr(int dim) {
    Rng rng(17);
    ScalarExpr e = random_poly(rng, dim, 4);
    for (int i = 0; i < dim; ++i) e = e * bump1d(dim, i, 0.0, 1.5);
    return e;
}

}  // namespace

static void BM_eval(benchmark::State& state) {
    const int dim = int(state.range(0));
    ScalarExpr e = sample_expr(dim);
    std::vector<double> p(std::size_t(dim), 0.37);
    for (auto _ : state) benchmark::DoNotOptimize(e.eval(p));
}
BENCHMARK(BM_eval)->Arg(1)->Arg(2);

static void BM_derive(benchmark::State& state) {
    ScalarExpr e = sample_expr(2);
    for (auto _ : state) benchmark::DoNotOptimize(e.derive(0).derive(1));
}
BENCHMARK(BM_derive);

static void BM_seminorm(benchmark::State& state) {
    ScalarExpr e = sample_expr(1);
    const Box box = Box::cube(1, -1.5, 1.5);
    for (auto _ : state) benchmark::DoNotOptimize(seminorm(e, box, 1));
}
BENCHMARK(BM_seminorm);

static void BM_integrate(benchmark::State& state) {
    ScalarExpr e = sample_expr(1);
    const Box box = Box::cube(1, -1.5, 1.5);
    for (auto _ : state) benchmark::DoNotOptimize(integrate_box(e, box, 16));
}
BENCHMARK(BM_integrate);

static void BM_convolve(benchmark::State& state) {
    GroupoidPtr G = find_groupoid("aff_line");
    Rng rng(5);
    DiracSection u = random_section(rng, G, 2, 2);
    DiracSection v = random_section(rng, G, 2, 2);
    for (auto _ : state) benchmark::DoNotOptimize(convolve(u, v));
}
BENCHMARK(BM_convolve);

static void BM_convolve_definitional(benchmark::State& state) {
    GroupoidPtr G = find_groupoid("aff_line");
    Rng rng(5);
    DiracSection u = random_section(rng, G, 2, 2);
    DiracSection v = random_section(rng, G, 2, 2);
    ScalarExpr F = random_test_function(rng, *G);
    const std::vector<double> x = {0.2};
    for (auto _ : state) benchmark::DoNotOptimize(convolve_definitional(u, v, F, x));
}
BENCHMARK(BM_convolve_definitional);

static void BM_comb_apply(benchmark::State& state) {
    DiracSection comb = riemann_comb(1.0, int(state.range(0)), 1);
    ScalarExpr F = pow_i(coordinate(1, 0), 2) + sin_of(coordinate(1, 0));
    for (auto _ : state) benchmark::DoNotOptimize(comb.apply(F, {}));
}
BENCHMARK(BM_comb_apply)->Arg(16)->Arg(256);

static void BM_germ_round_trip(benchmark::State& state) {
    GroupoidPtr G = find_groupoid("translation1");
    for (auto _ : state) {
        ArrowGerm g = make_arrow(G, std::vector<double>{0.0}, std::vector<double>{1.0}, 0.4);
        ArrowGerm h = make_arrow(G, germ_source(g), std::vector<double>{2.0}, 0.4);
        benchmark::DoNotOptimize(germ_compose(g, h));
    }
}
BENCHMARK(BM_germ_round_trip);

BENCHMARK_MAIN();
