#ifndef PURKIT_SPENCER_HPP
#define PURKIT_SPENCER_HPP

#include "purkit/janet.hpp"

namespace purkit {

// First-order form of an involutive order-q system: one new unknown per jet
// of order < q, contact equations, and the original equations rewritten in
// the new unknowns.
struct SpencerForm {
    JetSystem z_system;   // the first-order equations
    JanetBasis basis;     // completed involutive basis of z_system
    // expression of each z-unknown in the original jets (single jets after
    // construction, combinations after reduction)
    std::vector<LinearForm> dictionary;
    std::vector<std::string> names;
    int beta = 0;              // unknowns solved in class n
    std::vector<int> solved;   // their indices
    std::vector<std::string> substitutions; // record of reduction replacements

    int n() const { return z_system.nd; }
    int unknowns() const { return z_system.m; }
};

SpencerForm first_order_form(const JanetBasis& basis, const CompletionOptions& opt = {});

// absorb the d_n-jets of the unsolved unknowns out of the class-n equations
// by redefining the solved unknowns (PD analogue of the Kalman form)
SpencerForm reduce_spencer(const SpencerForm& sf, const CompletionOptions& opt = {});

// equations of classes 1..n-r as a system over the first n-r derivations
JetSystem subsystem_by_classes(const SpencerForm& sf, int r);

int full_classes(const SpencerForm& sf);

// rewrite a row over the z-unknowns as a row over the original jets
LinearForm dictionary_substitute(const SpencerForm& sf, const LinearForm& zrow);

// scan of the reduced-form shape: classes < n free of unsolved unknowns,
// class-n rows containing them only at derivation classes < n or order 0
bool reduced_form_shape_ok(const SpencerForm& sf);

} // namespace purkit

#endif
