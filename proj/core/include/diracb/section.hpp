#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "diracb/groupoid.hpp"

namespace diracb {

/// Compactly supported coefficient: expression over the base plus the support
/// box it is known to vanish outside of.
struct Coefficient {
    ScalarExpr expr;
    std::optional<Box> support;
};

struct SectionTerm {
    Coefficient coef;
    Vec atom;  // canonical group parameters
};

/// Finite sum of Dirac families sum_i f_i·delta_{h_i} over an action groupoid,
/// kept in normal form: canonical atoms, no duplicates within eps_grp, no
/// structurally-zero coefficients, terms ordered by atom. Immutable in use.
class DiracSection {
public:
    static constexpr double kAtomEps = 1e-9;

    DiracSection(GroupoidPtr groupoid, std::vector<SectionTerm> terms);
    static DiracSection zero(GroupoidPtr groupoid);
    /// Single generator f·delta_h.
    static DiracSection generator(GroupoidPtr groupoid, Coefficient f, std::span<const double> h);

    const GroupoidPtr& groupoid() const { return groupoid_; }
    const std::vector<SectionTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    /// Evaluation as a transversal distribution: sum_i f_i(x) F(x, h_i).
    Complex apply(const ScalarExpr& F, std::span<const double> x) const;
    Complex apply(const ScalarExpr& F, std::initializer_list<double> x) const {
        return apply(F, std::span<const double>(x.begin(), x.size()));
    }

    friend DiracSection operator+(const DiracSection& a, const DiracSection& b);
    friend DiracSection operator-(const DiracSection& a, const DiracSection& b);
    DiracSection scaled(Complex c) const;

private:
    GroupoidPtr groupoid_;
    std::vector<SectionTerm> terms_;
};

/// Finite formal sum of section pairs over the same groupoid; compared only
/// through pairings against F (x) G.
struct TensorElement {
    std::vector<std::pair<DiracSection, DiracSection>> pairs;
};

struct TripleTensor {
    std::vector<std::array<DiracSection, 3>> triples;
};

/// (f·u)(F) = u(f·F): multiplies every coefficient by f.
DiracSection module_act(const Coefficient& f, const DiracSection& u);

/// Generator-formula convolution: (f1·d_{h1})*(f2·d_{h2}) = (f1·(h1 f2))·d_{h1 h2}.
DiracSection convolve(const DiracSection& u, const DiracSection& v);

/// Definitional transversal convolution (T'*T'')(F)(x) = T'(g -> T''_{s(g)}(F o L_g))(x),
/// evaluated by building the inner function symbolically. Independent of the
/// generator formula; used to cross-check it.
Complex convolve_definitional(const DiracSection& u, const DiracSection& v, const ScalarExpr& F,
                              std::span<const double> x);

/// S(f·d_h) = (h^{-1} f)·d_{h^{-1}}.
DiracSection antipode(const DiracSection& u);

/// Delta(sum f_i·d_{h_i}) = sum (f_i·d_{h_i}) (x) (1_{f_i}·d_{h_i}); the local
/// unit is a plateau identically 1 on the coefficient's support box (margin
/// controls its transition width). Throws if a coefficient has no box.
TensorElement comultiply(const DiracSection& u, double margin = 0.5);

/// eps(sum f_i·d_{h_i}) = sum f_i, an element of the base ring.
Coefficient counit(const DiracSection& u);

/// Base ring embedding f -> f·d_e.
DiracSection embed(GroupoidPtr groupoid, Coefficient f);

Complex pair_tensor(const ScalarExpr& F, const ScalarExpr& G, const TensorElement& w,
                    std::span<const double> x);
Complex pair_tensor3(const ScalarExpr& F, const ScalarExpr& G, const ScalarExpr& H,
                     const TripleTensor& w, std::span<const double> x);

TensorElement tensor_flip(const TensorElement& w);
/// Componentwise convolution (Delta(a)Delta(b) with legs multiplied).
TensorElement tensor_convolve(const TensorElement& a, const TensorElement& b);
TripleTensor comultiply_left(const TensorElement& w, double margin = 0.5);
TripleTensor comultiply_right(const TensorElement& w, double margin = 0.5);

/// Conjugated coefficients.
DiracSection conjugate_section(const DiracSection& u);

struct Probe {
    ScalarExpr F;  // over R^{l+k}
    Vec x;         // base point
};

/// Duality-pairing equality on a finite battery: true iff
/// |u(F)(x) - v(F)(x)| <= tol·(1+max(|·|,|·|)) for all probes.
bool approx_equal(const DiracSection& u, const DiracSection& v, std::span<const Probe> battery,
                  double tol);
double max_deviation(const DiracSection& u, const DiracSection& v, std::span<const Probe> battery);

/// p_B(u) = max_{F in B} |u(F)| for a point-base section.
double dual_seminorm(const DiracSection& u, std::span<const ScalarExpr> battery);

double relative_gap(Complex a, Complex b);

}  // namespace diracb
