#include "diracb/laws.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

namespace diracb {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    Rng r(seed ^ (salt * 0x9e3779b97f4a7c15ULL + 0x1234567ULL));
    return r.next_u64();
}

// Deterministic parallel loop: every index derives its own RNG, results land
// in indexed slots, aggregation stays ordered.
void parallel_indexed(int n, int jobs, const std::function<void(int)>& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

struct TupleContext {
    DiracSection u, v;
    std::vector<std::pair<ScalarExpr, ScalarExpr>> pairs;
    std::vector<ScalarExpr> funcs;
    std::vector<Vec> points;
};

TupleContext make_context(GroupoidPtr G, std::uint64_t seed, int idx, const LawSuiteConfig& cfg) {
    Rng rng(mix_seed(seed, std::uint64_t(idx)));
    TupleContext ctx{random_section(rng, G, 1, 3), random_section(rng, G, 1, 2), {}, {}, {}};
    ctx.pairs = random_pair_battery(rng, *G, cfg.tensor_pairs);
    for (int i = 0; i < cfg.functions; ++i) ctx.funcs.push_back(random_test_function(rng, *G));
    for (const auto& f : cfg.extra_functions) {
        ctx.funcs.push_back(f);
        ctx.pairs.emplace_back(f, f);
    }
    const DiracSection secs[2] = {ctx.u, ctx.v};
    ctx.points = sample_points(rng, *G, secs, cfg.points);
    return ctx;
}

double tensor_dev(const TensorElement& a, const TensorElement& b, const TupleContext& ctx) {
    double worst = 0.0;
    for (const auto& [F, Gf] : ctx.pairs)
        for (const auto& x : ctx.points)
            worst = std::max(worst, relative_gap(pair_tensor(F, Gf, a, x),
                                                 pair_tensor(F, Gf, b, x)));
    return worst;
}

double triple_dev(const TripleTensor& a, const TripleTensor& b, const TupleContext& ctx) {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < ctx.pairs.size(); i += 2) {
        const auto& F = ctx.pairs[i].first;
        const auto& Gf = ctx.pairs[i].second;
        const auto& H = ctx.pairs[i + 1].first;
        for (const auto& x : ctx.points)
            worst = std::max(worst, relative_gap(pair_tensor3(F, Gf, H, a, x),
                                                 pair_tensor3(F, Gf, H, b, x)));
    }
    return worst;
}

double section_dev(const DiracSection& a, const DiracSection& b, const TupleContext& ctx) {
    double worst = 0.0;
    for (const auto& F : ctx.funcs)
        for (const auto& x : ctx.points)
            worst = std::max(worst, relative_gap(a.apply(F, x), b.apply(F, x)));
    return worst;
}

DiracSection counit_contract_left(const TensorElement& w) {
    // (eps (x) id) applied then identified with the section.
    DiracSection out = DiracSection::zero(w.pairs.empty() ? nullptr : w.pairs[0].first.groupoid());
    for (const auto& [a, b] : w.pairs) out = out + module_act(counit(a), b);
    return out;
}

DiracSection counit_contract_right(const TensorElement& w) {
    DiracSection out = DiracSection::zero(w.pairs.empty() ? nullptr : w.pairs[0].first.groupoid());
    for (const auto& [a, b] : w.pairs) out = out + module_act(counit(b), a);
    return out;
}

using LawFn = std::function<double(GroupoidPtr, const TupleContext&)>;

struct LawSpec {
    std::string name;
    LawFn dev;
};

std::vector<LawSpec> law_table() {
    std::vector<LawSpec> laws;

    laws.push_back({"coassociativity", [](GroupoidPtr, const TupleContext& ctx) {
        TensorElement d = comultiply(ctx.u);
        return triple_dev(comultiply_left(d), comultiply_right(d), ctx);
    }});

    laws.push_back({"counit_left", [](GroupoidPtr, const TupleContext& ctx) {
        if (ctx.u.empty()) return 0.0;
        return section_dev(counit_contract_left(comultiply(ctx.u)), ctx.u, ctx);
    }});

    laws.push_back({"counit_right", [](GroupoidPtr, const TupleContext& ctx) {
        if (ctx.u.empty()) return 0.0;
        return section_dev(counit_contract_right(comultiply(ctx.u)), ctx.u, ctx);
    }});

    laws.push_back({"cocommutativity", [](GroupoidPtr, const TupleContext& ctx) {
        TensorElement d = comultiply(ctx.u);
        return tensor_dev(d, tensor_flip(d), ctx);
    }});

    laws.push_back({"delta_multiplicative", [](GroupoidPtr, const TupleContext& ctx) {
        TensorElement lhs = comultiply(convolve(ctx.u, ctx.v));
        TensorElement rhs = tensor_convolve(comultiply(ctx.u), comultiply(ctx.v));
        return tensor_dev(lhs, rhs, ctx);
    }});

    laws.push_back({"counit_multiplicative", [](GroupoidPtr G, const TupleContext& ctx) {
        Coefficient lhs = counit(convolve(ctx.u, ctx.v));
        Coefficient rhs = counit(convolve(ctx.u, embed(G, counit(ctx.v))));
        double worst = 0.0;
        for (const auto& x : ctx.points)
            worst = std::max(worst, relative_gap(lhs.expr.eval(x), rhs.expr.eval(x)));
        return worst;
    }});

    laws.push_back({"antipode_antihom", [](GroupoidPtr, const TupleContext& ctx) {
        return section_dev(antipode(convolve(ctx.u, ctx.v)),
                           convolve(antipode(ctx.v), antipode(ctx.u)), ctx);
    }});

    laws.push_back({"antipode_involution", [](GroupoidPtr, const TupleContext& ctx) {
        return section_dev(antipode(antipode(ctx.u)), ctx.u, ctx);
    }});

    laws.push_back({"antipode_axiom", [](GroupoidPtr G, const TupleContext& ctx) {
        // mu o (S (x) id) o Delta = embedding of eps o S.
        TensorElement d = comultiply(ctx.u);
        DiracSection lhs = DiracSection::zero(G);
        for (const auto& [a, b] : d.pairs) lhs = lhs + convolve(antipode(a), b);
        DiracSection rhs = embed(G, counit(antipode(ctx.u)));
        return section_dev(lhs, rhs, ctx);
    }});

    laws.push_back({"antipode_fixes_base", [](GroupoidPtr G, const TupleContext& ctx) {
        DiracSection f = embed(G, counit(ctx.u));
        return section_dev(antipode(f), f, ctx);
    }});

    laws.push_back({"convolution_associative", [](GroupoidPtr, const TupleContext& ctx) {
        return section_dev(convolve(convolve(ctx.u, ctx.v), ctx.u),
                           convolve(ctx.u, convolve(ctx.v, ctx.u)), ctx);
    }});

    laws.push_back({"local_units", [](GroupoidPtr G, const TupleContext& ctx) {
        if (ctx.u.empty()) return 0.0;
        // u * (p·d_e) pulls p back through every atom, so the flat zone must
        // cover the translated supports as well as the supports themselves.
        std::optional<Box> box;
        for (const auto& t : ctx.u.terms()) {
            box = box ? std::optional<Box>(Box::hull(*box, *t.coef.support)) : t.coef.support;
            if (G->base_dim() > 0) {
                Box moved = G->transform_box(*t.coef.support, t.atom);
                box = Box::hull(*box, moved);
            }
        }
        Coefficient unit{plateau_on(*box, 0.5),
                         G->base_dim() == 0 ? Box{} : box->padded(0.0, 0.7)};
        DiracSection one = embed(G, unit);
        double worst = section_dev(convolve(ctx.u, one), ctx.u, ctx);
        return std::max(worst, section_dev(convolve(one, ctx.u), ctx.u, ctx));
    }});

    laws.push_back({"local_unit_independence", [](GroupoidPtr, const TupleContext& ctx) {
        return tensor_dev(comultiply(ctx.u, 0.5), comultiply(ctx.u, 0.9), ctx);
    }});

    return laws;
}

}  // namespace

std::vector<LawResult> run_hopf_laws(GroupoidPtr G, const LawSuiteConfig& cfg) {
    const auto laws = law_table();
    std::vector<LawResult> out;
    for (std::size_t li = 0; li < laws.size(); ++li) {
        std::vector<double> devs(std::size_t(cfg.tuples), 0.0);
        parallel_indexed(cfg.tuples, cfg.jobs, [&](int i) {
            TupleContext ctx =
                make_context(G, mix_seed(cfg.seed, 1000 + li), i, cfg);
            devs[std::size_t(i)] = laws[li].dev(G, ctx);
        });
        LawResult r;
        r.law = laws[li].name;
        r.instances = cfg.tuples;
        for (double d : devs) r.max_relative_deviation = std::max(r.max_relative_deviation, d);
        r.pass = r.max_relative_deviation <= cfg.tol;
        out.push_back(std::move(r));
    }
    return out;
}

LawResult run_oracle_agreement(GroupoidPtr G, std::uint64_t seed, int samples, double tol) {
    LawResult r;
    r.law = "generator_oracle_agreement";
    r.instances = samples;
    for (int i = 0; i < samples; ++i) {
        Rng rng(mix_seed(seed, 777 + std::uint64_t(i)));
        DiracSection u = random_section(rng, G, 1, 2);
        DiracSection v = random_section(rng, G, 1, 2);
        ScalarExpr F = random_test_function(rng, *G);
        const DiracSection secs[2] = {u, v};
        Vec x = sample_points(rng, *G, secs, 1)[0];
        const Complex direct = convolve(u, v).apply(F, x);
        const Complex oracle = convolve_definitional(u, v, F, x);
        r.max_relative_deviation = std::max(r.max_relative_deviation, relative_gap(direct, oracle));
    }
    r.pass = r.max_relative_deviation <= tol;
    return r;
}

}  // namespace diracb
