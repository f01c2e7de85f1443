#ifndef PURKIT_OPS_HPP
#define PURKIT_OPS_HPP

#include "purkit/scalar.hpp"

#include <map>
#include <string>
#include <vector>

namespace purkit {

// A derivative multi-index mu = (mu_1..mu_nd).  The class of a nonzero mu is
// the smallest i with mu_i > 0; multiplicative variables of a class-i equation
// are x1..xi.  Multi-indices are compared with the same graded order as
// polynomial monomials, which refines "higher class first" on each degree and
// is compatible with shifts.
using MultiIndex = Exponents;

int mi_order(const MultiIndex& mu);
int mi_class(const MultiIndex& mu); // 1-based, 0 for mu = 0
MultiIndex mi_add(const MultiIndex& a, const MultiIndex& b);
// true if mu = nu + kappa with kappa supported on axes <= bound; fills kappa
bool mi_divides(const MultiIndex& nu, const MultiIndex& mu, int bound, MultiIndex& kappa);
std::string mi_str(const MultiIndex& mu); // D[...] form, "1" for empty
mpq_class mi_binom(const MultiIndex& mu, const MultiIndex& kappa); // prod binom(mu_i,kappa_i)

// Noncommutative scalar differential operator sum a^mu d_mu over K, with the
// commutation d_i a = a d_i + (partial_i a).  Coefficients are kept to the
// left of the derivations and zero coefficients are never stored.
class ScalarOp {
public:
    ScalarOp() : nd_(0), nvars_(0) {}
    ScalarOp(int nd, int nvars) : nd_(nd), nvars_(nvars) {}

    static ScalarOp zero(int nd, int nvars) { return ScalarOp(nd, nvars); }
    static ScalarOp of(const Scalar& a, int nd);
    static ScalarOp one(int nd, int nvars) { return of(Scalar::one(nvars), nd); }
    static ScalarOp monomial(const Scalar& a, const MultiIndex& mu, int nd);
    static ScalarOp derivation(int i, int nd, int nvars);

    int nd() const { return nd_; }
    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    int order() const; // -1 for the zero operator
    const std::map<MultiIndex, Scalar, MonoCmp>& terms() const { return terms_; }

    void add_term(const MultiIndex& mu, const Scalar& a);

    ScalarOp operator-() const;
    ScalarOp operator+(const ScalarOp& o) const;
    ScalarOp operator-(const ScalarOp& o) const;
    ScalarOp scale(const Scalar& a) const; // a * P (left multiplication)

    bool operator==(const ScalarOp& o) const { return terms_ == o.terms_; }
    bool operator!=(const ScalarOp& o) const { return !(*this == o); }

    std::string str(const std::vector<std::string>& names) const;
    std::string str() const;

private:
    int nd_, nvars_;
    std::map<MultiIndex, Scalar, MonoCmp> terms_;
};

// P o Q, normalized to coefficient-left form
ScalarOp compose(const ScalarOp& p, const ScalarOp& q);
// ad(P) = (-1)^|mu| d_mu a^mu, normalized to coefficient-left form
ScalarOp adjoint(const ScalarOp& p);

// p x m matrix of operators; row tau encodes the equation sum_k A[tau][k] y^k.
// Module elements are row vectors acted on the right: (v A)_k = sum v_tau o A[tau][k].
struct OpMatrix {
    int rows = 0, cols = 0, nd = 0, nvars = 0;
    std::vector<std::vector<ScalarOp>> a;

    OpMatrix() = default;
    OpMatrix(int r, int c, int nd_, int nvars_);
    static OpMatrix identity(int n, int nd, int nvars);

    ScalarOp& at(int i, int j) { return a[i][j]; }
    const ScalarOp& at(int i, int j) const { return a[i][j]; }
    bool is_zero() const;
    bool operator==(const OpMatrix& o) const;
};

// (v A) B convention: entry (i,j) = sum_l A[i][l] o B[l][j]; shape error if
// cols(A) != rows(B)
OpMatrix matrix_compose(const OpMatrix& A, const OpMatrix& B);
// transposed matrix of entrywise adjoints (m x p from p x m)
OpMatrix adjoint(const OpMatrix& A);

} // namespace purkit

#endif
