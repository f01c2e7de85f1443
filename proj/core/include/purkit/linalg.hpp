#ifndef PURKIT_LINALG_HPP
#define PURKIT_LINALG_HPP

#include "purkit/jets.hpp"

#include <optional>

namespace purkit {

using QMatrix = std::vector<std::vector<mpq_class>>;

int q_rank(QMatrix m);
mpq_class q_det(QMatrix m);
std::optional<QMatrix> q_inverse(const QMatrix& m);
// one solution of A x = b, if solvable
std::optional<std::vector<mpq_class>> q_solve(QMatrix A, std::vector<mpq_class> b);
// basis of the nullspace of A (ncols columns)
std::vector<std::vector<mpq_class>> q_nullspace(QMatrix A, int ncols);

// nullspace basis over the scalar field K
std::vector<std::vector<Scalar>> k_nullspace(std::vector<std::vector<Scalar>> A, int ncols);

// Scalar-valued expression that is affine-linear in a finite set of unknowns:
// cst + sum_i coeff[i] * u_i.  Used for undetermined-coefficient searches.
struct LinScalar {
    Scalar cst;
    std::map<int, Scalar> lin;

    explicit LinScalar(int nvars) : cst(Scalar::zero(nvars)) {}
    explicit LinScalar(const Scalar& c) : cst(c) {}
    static LinScalar unknown(int id, const Scalar& coeff);

    int nvars() const { return cst.nvars(); }
    bool is_zero() const;
    void add(const LinScalar& o);
    LinScalar scaled(const Scalar& c) const;
    LinScalar partial(int i) const;
};

// operator with LinScalar coefficients (coefficient-left normal form)
struct LinOp {
    int nd = 0, nvars = 0;
    std::map<MultiIndex, LinScalar, MonoCmp> terms;

    LinOp(int nd_, int nvars_) : nd(nd_), nvars(nvars_) {}
    void add_term(const MultiIndex& mu, const LinScalar& c);
    void add(const LinOp& o);
};

// known o unknown-linear and unknown-linear o known compositions
LinOp compose_known_lin(const ScalarOp& p, const LinOp& q);
LinOp compose_lin_known(const LinOp& p, const ScalarOp& q);

// jet-linear expression with LinScalar coefficients
struct LinFormExpr {
    int nd = 0, nvars = 0, m = 0;
    std::map<Jet, LinScalar, JetCmp> terms;

    LinFormExpr(int nd_, int nvars_, int m_) : nd(nd_), nvars(nvars_), m(m_) {}
    void add_term(const Jet& j, const LinScalar& c);
    void add_scaled(const LinearForm& f, const LinScalar& c); // += c * f
};

// K-linear system "every LinScalar equals zero"; returns nullspace-style
// solutions over K for homogeneous systems, assignments for inhomogeneous.
struct KLinearSystem {
    int nunknowns = 0;
    std::vector<LinScalar> conditions;

    void require_zero(const LinScalar& c) { conditions.push_back(c); }
    // solutions of the associated homogeneous system (cst parts must be zero
    // for all conditions; throws if some condition has a nonzero constant)
    std::vector<std::vector<Scalar>> homogeneous_nullspace(int nvars);
    // particular solution with constants moved to the right-hand side
    std::optional<std::vector<Scalar>> particular_solution(int nvars);
};

// Q-linear reduction: expand K-coefficient conditions on rational unknowns
// into per-monomial equations over Q and solve.
struct QLinearSystem {
    int nunknowns = 0;
    std::vector<LinScalar> conditions;

    void require_zero(const LinScalar& c) { conditions.push_back(c); }
    std::optional<std::vector<mpq_class>> particular_solution();
};

} // namespace purkit

#endif
