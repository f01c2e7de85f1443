#ifndef PURKIT_JANET_HPP
#define PURKIT_JANET_HPP

#include "purkit/jets.hpp"
#include "purkit/linalg.hpp"

#include <optional>

namespace purkit {

struct Characters {
    int q = 0;
    std::vector<long long> beta;  // beta[i-1] = equations of class i and order q
    std::vector<long long> alpha; // Cartan characters
    long long dim_gq = 0, dim_gq1 = 0;
    long long rank() const { return alpha.empty() ? 0 : alpha.back(); }
    int zero_characters() const;
    int codim() const { return zero_characters(); }
    int dim() const { return static_cast<int>(alpha.size()) - codim(); }
};

struct BasisRow {
    LinearForm row; // monic, autoreduced, cert over the input rows
    int cls = 0;    // 0 = order < q, no multiplicative variables
};

struct JanetBasis {
    JetSystem input;             // inputs the certificates refer to
    std::vector<BasisRow> rows;  // sorted by descending leading jet
    int q = 0;                   // basis order
    Characters chars;
    // input row tau expressed in basis rows: input_tau = sum S[tau][i] rows[i]
    std::vector<std::vector<ScalarOp>> input_in_basis;
    // total change reaching the current coordinates, and the part applied by
    // the completion itself during delta-regularity retries
    std::optional<std::vector<std::vector<mpq_class>>> coordinate_change;
    std::optional<std::vector<std::vector<mpq_class>>> applied_change;

    int n() const { return input.nd; }
    int m() const { return input.m; }
    int nvars() const { return input.nvars; }
    int size() const { return static_cast<int>(rows.size()); }
    std::vector<int> dots(int i) const; // non-multiplicative variables of row i
    OpMatrix matrix() const;            // basis rows as operator matrix
    OpMatrix tracking() const;          // T: basis rows over input slots
    std::string tabular() const;
    std::vector<std::string> row_strings() const;
};

struct CompletionOptions {
    int max_order_excess = 10;
    bool allow_coordinate_change = true;
    int retry_seeds = 5;
    std::optional<int> max_order; // overrides q0 + excess when set
};

JanetBasis complete_to_involution(const JetSystem& sys, const CompletionOptions& opt = {});

// formal-integrability saturation at the input order: adds only consequences
// that do not raise the order; returns the augmented system and the count of
// added equations
std::pair<JetSystem, int> saturate_at_order(const JetSystem& sys);

// involutive normal form; optionally records coeffs[i] with
// f = remainder + sum_i coeffs[i] applied to basis row i
LinearForm normal_form(const LinearForm& f, const JanetBasis& basis,
                       std::vector<ScalarOp>* coeffs = nullptr);
bool reduces_to_zero(const LinearForm& f, const JanetBasis& basis);
// same reduction for expressions with unknown-linear coefficients
LinFormExpr normal_form_lin(LinFormExpr f, const JanetBasis& basis);

LinearForm prolong(const LinearForm& eq, int i);

// Hilbert function dim R_{q+r} from the characters
long long hilbert_function(const JanetBasis& basis, int r);

// generating compatibility conditions, rows over the basis equations;
// first order for an involutive basis
OpMatrix compatibility_conditions(const JanetBasis& basis);
// generating syzygies of the original input rows (used by resolutions and
// duality, where relations must be expressed over a given presentation)
OpMatrix input_syzygies(const JanetBasis& basis);

// a row transformed into the coordinates of a basis completed elsewhere
LinearForm adapt_row(const LinearForm& f, const JanetBasis& basis);
OpMatrix transform_matrix(const OpMatrix& A, const QMatrix& C);

// generating syzygies of the rows of A (minimized); computed in
// delta-regular coordinates when necessary and mapped back
OpMatrix row_syzygies(const OpMatrix& A, const CompletionOptions& opt = {});
// do all rows of "candidates" lie in the row module of "gens"
bool rows_member(const OpMatrix& candidates, const OpMatrix& gens,
                 const CompletionOptions& opt = {});
// drop rows that reduce to zero modulo the module generated by the others
OpMatrix minimize_rows(const OpMatrix& M, const CompletionOptions& opt = {});
// does every row of A reduce to zero against basis(B) and vice versa
bool same_row_module(const OpMatrix& A, const OpMatrix& B, const CompletionOptions& opt = {});

struct FreeResolution {
    std::vector<OpMatrix> maps; // maps[0] presents the module
    std::vector<int> ranks;     // m, rows(maps[0]), rows(maps[1]), ...
    long long euler_poincare = 0;
};

// Janet-sequence resolution: maps[0] is the involutive basis
FreeResolution free_resolution(const JetSystem& sys, const CompletionOptions& opt = {});
// resolution over the presentation as given, CC generators minimized
FreeResolution input_resolution(const JetSystem& sys, const CompletionOptions& opt = {});

// linear coordinate change new = C * old applied to the independent variables
JetSystem change_coordinates(const JetSystem& sys, const QMatrix& C);
JetSystem change_coordinates_seeded(const JetSystem& sys, unsigned seed);
QMatrix random_invertible_matrix(int n, unsigned seed); // entries in [-3,3]
QMatrix swap_matrix(int n, int i, int j);

struct CharIdeal {
    std::vector<Poly> generators; // polynomials in x1..xn, chi_1..chi_nd
    // each prime component as a reduced list of linear chi-forms
    std::optional<std::vector<std::vector<Poly>>> radical_primes;
    int dim = 0, codim = 0;
    std::string str(int nvars, int nd) const;
};

CharIdeal characteristic_ideal(const JanetBasis& basis);

// rank of all prolongations of eqs up to total order ord, coefficients
// evaluated at a seeded random pole-free point
long long prolonged_rank(const std::vector<LinearForm>& eqs, int nd, int nvars, int m,
                         int ord, unsigned seed);
long long solution_space_dim(const JetSystem& sys, int ord, unsigned seed);

std::vector<std::string> chi_names(int nvars, int nd);

} // namespace purkit

#endif
