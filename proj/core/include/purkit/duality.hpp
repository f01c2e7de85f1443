#ifndef PURKIT_DUALITY_HPP
#define PURKIT_DUALITY_HPP

#include "purkit/janet.hpp"

#include <memory>

namespace purkit {

// Finitely presented module with cached involutive basis and resolution.
// Caches are computed on first use and immutable afterwards.
class ModuleHandle {
public:
    explicit ModuleHandle(JetSystem presentation, CompletionOptions opt = {});

    const JetSystem& presentation() const { return sys_; }
    const CompletionOptions& options() const { return opt_; }
    OpMatrix matrix() const;

    const JanetBasis& basis();
    const FreeResolution& resolution(); // presentation track, minimized CC
    long long rank();
    int codim();
    int dim();

private:
    JetSystem sys_;
    CompletionOptions opt_;
    std::shared_ptr<JanetBasis> basis_;
    std::shared_ptr<FreeResolution> res_;
};

enum class TorsionVerdict { torsion_free, has_torsion, torsion_module };

struct TorsionGenerator {
    LinearForm element;   // jet expression in the module's unknowns, monic
    ScalarOp annihilator; // nonzero operator sending it into the row module
};

struct TorsionReport {
    TorsionVerdict verdict = TorsionVerdict::torsion_free;
    std::vector<TorsionGenerator> generators;
    std::optional<OpMatrix> certified_parametrization; // columns = potentials
    OpMatrix candidate_relations;                      // CC of the parametrization
};

// double-duality torsion test: P = ad(CC(ad(D))), relations = CC(P), verdict
// by mutual reducibility with the presentation
TorsionReport torsion_test(ModuleHandle& M);

struct ExtPresentation {
    int index = 0;
    OpMatrix generators; // rows in the ambient free module of the dual stage
    OpMatrix relations;  // rows over the generators
    bool is_zero = true;
};

ExtPresentation ext_module(ModuleHandle& M, int i);

long long differential_rank(ModuleHandle& M);

// generating set of the annihilator ideal of a row, as an element of the
// module presented by sys
std::vector<ScalarOp> annihilator_ideal(const LinearForm& row, const JetSystem& sys,
                                        const CompletionOptions& opt = {});
// codimension of the cyclic submodule generated by a row (0 when free)
int element_codimension(const LinearForm& row, const JetSystem& sys,
                        const CompletionOptions& opt = {});

// restriction of the certified parametrization to the kept potential
// columns; errors "not-a-parametrization" / "not-minimal"
OpMatrix minimal_parametrization(ModuleHandle& M, const std::vector<int>& keep);

// undetermined-coefficient searches with polynomial coefficients
std::optional<OpMatrix> right_inverse(const OpMatrix& A, int order_bound = 2,
                                      int degree_bound = 2);
std::optional<OpMatrix> left_inverse(const OpMatrix& A, int order_bound = 2,
                                     int degree_bound = 2);
// right inverse of D1 (a split lift for an exact pair ending at D1)
std::optional<OpMatrix> lift_check(const OpMatrix& D1, const OpMatrix& D,
                                   int order_bound = 2, int degree_bound = 2);

} // namespace purkit

#endif
