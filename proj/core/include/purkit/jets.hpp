#ifndef PURKIT_JETS_HPP
#define PURKIT_JETS_HPP

#include "purkit/ops.hpp"

#include <optional>

namespace purkit {

// Jet coordinate y^k_mu (k 0-based).  Jets are ordered by the multi-index
// order first, ties broken by unknown index with lower index the greater;
// leading jets therefore have maximal class.
struct Jet {
    int k = 0;
    MultiIndex mu;
    bool operator==(const Jet& o) const { return k == o.k && mu == o.mu; }
};

bool jet_greater(const Jet& a, const Jet& b);

struct JetCmp {
    bool operator()(const Jet& a, const Jet& b) const { return jet_greater(a, b); }
};

// One linear equation sum a^mu_k y^k_mu = 0 together with an optional
// certificate expressing the row as a D-combination of the system's input
// rows (cert[tau] applied to input row tau).
class LinearForm {
public:
    LinearForm() = default;
    LinearForm(int nd, int nvars, int m) : nd_(nd), nvars_(nvars), m_(m) {}

    int nd() const { return nd_; }
    int nvars() const { return nvars_; }
    int unknowns() const { return m_; }
    bool is_zero() const { return terms_.empty(); }
    int order() const { return terms_.empty() ? -1 : mi_order(terms_.begin()->first.mu); }
    int leading_class() const { return terms_.empty() ? 0 : mi_class(terms_.begin()->first.mu); }
    const Jet& leading_jet() const { return terms_.begin()->first; }
    const Scalar& leading_coeff() const { return terms_.begin()->second; }
    const std::map<Jet, Scalar, JetCmp>& terms() const { return terms_; }

    std::vector<ScalarOp> cert; // empty = untracked

    void add_term(const Jet& j, const Scalar& a);
    void add(const LinearForm& o, const Scalar& c); // this += c * o (terms and cert)
    LinearForm scaled(const Scalar& c) const;
    LinearForm prolong(int i) const; // d_i row, Leibniz on coefficients
    LinearForm prolong_by(const MultiIndex& kappa) const;
    void make_monic();

    bool same_terms(const LinearForm& o) const { return terms_ == o.terms_; }

    std::string str(const std::vector<std::string>& unknowns,
                    const std::vector<std::string>& vars) const;
    std::string str() const;

private:
    int nd_ = 0, nvars_ = 0, m_ = 0;
    std::map<Jet, Scalar, JetCmp> terms_;
};

// apply the operator p to a jet-linear expression (formal substitution)
LinearForm op_apply(const ScalarOp& p, const LinearForm& expr);
// apply a matrix to a vector of expressions, one output row per matrix row
std::vector<LinearForm> matrix_apply(const OpMatrix& A, const std::vector<LinearForm>& exprs);

// conversions between equation rows over m unknowns and operator rows
LinearForm row_from_ops(const std::vector<ScalarOp>& ops);
std::vector<ScalarOp> ops_from_row(const LinearForm& row);
OpMatrix matrix_from_rows(const std::vector<LinearForm>& rows, int m, int nd, int nvars);
std::vector<LinearForm> rows_from_matrix(const OpMatrix& A);

// Linear system of jet equations.  coordinate_change, when present, is the
// invertible matrix C with new = C * old that was applied to reach the
// current coordinates.
struct JetSystem {
    int nd = 0;     // number of derivations of the operator ring
    int nvars = 0;  // ground variables of the coefficient field
    int m = 0;      // unknowns
    std::vector<LinearForm> equations;
    std::vector<std::string> unknown_names; // defaults y1..ym
    std::vector<std::string> labels;        // per input equation, defaults u1..up
    std::optional<std::vector<std::vector<mpq_class>>> coordinate_change;

    JetSystem() = default;
    JetSystem(int nd_, int nvars_, int m_);
    int order() const;
    void default_names();
};

int jet_dimension(int n, int m, int q);     // m * C(n+q, q)
int symbol_layer_dimension(int n, int m, int s); // m * C(n+s-1, s)
long long binom_ll(int n, int k);

} // namespace purkit

#endif
