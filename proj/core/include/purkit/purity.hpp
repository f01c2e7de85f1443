#ifndef PURKIT_PURITY_HPP
#define PURKIT_PURITY_HPP

#include "purkit/duality.hpp"
#include "purkit/spencer.hpp"

namespace purkit {

struct PurityWitness {
    std::string name;   // z-name or torsion label
    LinearForm element; // expression in the original unknowns
    int codim = 0;
};

struct PurityReport {
    int n = 0;
    int codim = 0, dim = 0;
    long long rank = 0;
    // step_strict[r] is the t_r < t_{r-1} step, r = n..1; top_strict is t_0 < M
    std::vector<bool> step_strict;
    bool top_strict = false;
    bool has_gap = false;
    std::string chain;
    std::vector<PurityWitness> witnesses;
    // filled by the purity test
    int full_classes = 0;
    bool pure = false;
    std::optional<int> pure_r;
    std::vector<std::string> offending; // witnesses blocking purity
};

PurityReport purity_filtration(ModuleHandle& M);
// involutive Spencer-form test: full classes + torsion test of the
// low-class subsystem
PurityReport purity_test(ModuleHandle& M);

struct RelativeParametrization {
    std::vector<std::string> potentials;
    OpMatrix parametrization;           // z-unknowns x potentials
    std::vector<std::string> ops;       // rendered rows z_k = ...
    JanetBasis constraints;             // involutive constraint system (L)
    bool inclusion_equal = true;
    std::vector<std::string> strict_witnesses; // potentials outside the module
    int resolution_operators = 0;
    SpencerForm spencer;
};

RelativeParametrization relative_parametrization(ModuleHandle& M, bool best_effort = false,
                                                 int membership_order_bound = 3);

struct ConstrainedCheck {
    JanetBasis stacked;    // completed parametrization + constraints
    OpMatrix generated_cc; // conditions on the parametrized side, minimized
    bool matches_target = false;
};

// stack the parametrization P over the constraints C, complete, and verify
// the generated conditions present exactly the target system
ConstrainedCheck constrained_parametrization_check(const OpMatrix& P, const OpMatrix& C,
                                                   ModuleHandle& target);

} // namespace purkit

#endif
