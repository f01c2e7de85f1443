#include "purkit/janet.hpp"

#include "purkit/error.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

namespace purkit {

int Characters::zero_characters() const {
    int z = 0;
    for (auto a : alpha)
        if (a == 0) ++z;
    return z;
}

std::vector<int> JanetBasis::dots(int i) const {
    std::vector<int> out;
    for (int j = rows[i].cls + 1; j <= n(); ++j) out.push_back(j);
    return out;
}

OpMatrix JanetBasis::matrix() const {
    std::vector<LinearForm> fs;
    fs.reserve(rows.size());
    for (auto& r : rows) fs.push_back(r.row);
    return matrix_from_rows(fs, m(), n(), nvars());
}

OpMatrix JanetBasis::tracking() const {
    OpMatrix T(size(), static_cast<int>(input.equations.size()), n(), nvars());
    for (int i = 0; i < size(); ++i)
        for (int t = 0; t < T.cols; ++t) T.a[i][t] = rows[i].row.cert[t];
    return T;
}

std::string JanetBasis::tabular() const {
    std::ostringstream out;
    for (int i = 0; i < size(); ++i) {
        for (int j = 1; j <= n(); ++j) {
            if (j > 1) out << " ";
            if (j <= rows[i].cls)
                out << j;
            else
                out << "•";
        }
        out << "\n";
    }
    return out.str();
}

std::vector<std::string> JanetBasis::row_strings() const {
    std::vector<std::string> vars;
    for (int i = 1; i <= nvars(); ++i) vars.push_back("x" + std::to_string(i));
    std::vector<std::string> out;
    for (auto& r : rows) out.push_back(r.row.str(input.unknown_names, vars));
    return out;
}

namespace {

bool row_greater(const BasisRow& a, const BasisRow& b) {
    return jet_greater(a.row.leading_jet(), b.row.leading_jet());
}

// full inter-reduction at fixed jets: eliminate every occurrence of any
// leading jet in any other row, keep rows monic and sorted
void autoreduce(std::vector<BasisRow>& rows) {
    for (auto& r : rows) r.row.make_monic();
    rows.erase(std::remove_if(rows.begin(), rows.end(),
                              [](const BasisRow& r) { return r.row.is_zero(); }),
               rows.end());
    bool changed = true;
    while (changed) {
        changed = false;
        std::sort(rows.begin(), rows.end(), row_greater);
        // identical leading jets collapse first
        for (std::size_t i = 0; i + 1 < rows.size() && !changed; ++i) {
            if (rows[i].row.leading_jet() == rows[i + 1].row.leading_jet()) {
                rows[i + 1].row.add(rows[i].row, -Scalar::one(rows[i].row.nvars()));
                rows[i + 1].row.make_monic();
                changed = true;
            }
        }
        if (changed) {
            rows.erase(std::remove_if(rows.begin(), rows.end(),
                                      [](const BasisRow& r) { return r.row.is_zero(); }),
                       rows.end());
            continue;
        }
        for (std::size_t i = 0; i < rows.size() && !changed; ++i) {
            const Jet& lead = rows[i].row.leading_jet();
            for (std::size_t j = 0; j < rows.size(); ++j) {
                if (i == j) continue;
                auto it = rows[j].row.terms().find(lead);
                if (it == rows[j].row.terms().end()) continue;
                Scalar c = it->second;
                rows[j].row.add(rows[i].row, -c);
                rows[j].row.make_monic();
                changed = true;
                break;
            }
        }
        if (changed)
            rows.erase(std::remove_if(rows.begin(), rows.end(),
                                      [](const BasisRow& r) { return r.row.is_zero(); }),
                       rows.end());
    }
    std::sort(rows.begin(), rows.end(), row_greater);
}

void assign_classes(std::vector<BasisRow>& rows) {
    int q = 0;
    for (auto& r : rows) q = std::max(q, r.row.order());
    for (auto& r : rows)
        r.cls = (r.row.order() == q) ? r.row.leading_class() : 0;
}

// involutive reduction of f against classed rows; coeffs, when present, gets
// coeffs[i] += c d_kappa for every subtraction of c d_kappa(row_i).
// full_cone lifts the multiplicative restriction (plain module reduction).
LinearForm reduce_rows(LinearForm f, const std::vector<BasisRow>& rows,
                       std::vector<ScalarOp>* coeffs, bool full_cone = false) {
    bool changed = true;
    while (changed && !f.is_zero()) {
        changed = false;
        for (auto& [jet, coeff] : f.terms()) {
            MultiIndex kappa;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const Jet& lead = rows[i].row.leading_jet();
                if (lead.k != jet.k) continue;
                int bound = full_cone ? f.nd() : rows[i].cls;
                if (!mi_divides(lead.mu, jet.mu, bound, kappa)) continue;
                Scalar c = coeff;
                f.add(rows[i].row.prolong_by(kappa), -c);
                if (coeffs)
                    (*coeffs)[i] = (*coeffs)[i] + ScalarOp::monomial(c, kappa, f.nd());
                changed = true;
                break;
            }
            if (changed) break;
        }
    }
    return f;
}

struct SweepResult {
    std::vector<LinearForm> remainders; // nonzero, unsorted
    bool involutive = false;
};

SweepResult sweep(const std::vector<BasisRow>& rows) {
    SweepResult out;
    for (auto& r : rows) {
        for (int j = r.cls + 1; j <= static_cast<int>(r.row.nd()); ++j) {
            LinearForm rem = reduce_rows(r.row.prolong(j), rows, nullptr);
            if (!rem.is_zero()) out.remainders.push_back(std::move(rem));
        }
    }
    out.involutive = out.remainders.empty();
    return out;
}

Characters compute_characters(const std::vector<BasisRow>& rows, int n, int m) {
    Characters ch;
    int q = 1;
    for (auto& r : rows) q = std::max(q, r.row.order());
    ch.q = q;
    ch.beta.assign(n, 0);
    for (auto& r : rows)
        if (r.cls > 0) ch.beta[r.cls - 1]++;
    ch.alpha.assign(n, 0);
    for (int i = 1; i <= n; ++i)
        ch.alpha[i - 1] = m * binom_ll(q + n - i - 1, q - 1) - ch.beta[i - 1];
    for (int i = 1; i <= n; ++i) {
        ch.dim_gq += ch.alpha[i - 1];
        ch.dim_gq1 += i * ch.alpha[i - 1];
    }
    return ch;
}

bool characters_admissible(const Characters& ch) {
    for (std::size_t i = 0; i < ch.alpha.size(); ++i) {
        if (ch.alpha[i] < 0) return false;
        if (i + 1 < ch.alpha.size() && ch.alpha[i] < ch.alpha[i + 1]) return false;
    }
    return true;
}

// drop input rows that are prolongation-consequences of the others; the
// module and every order-filtered solution space are unchanged
void prereduce_inputs(std::vector<BasisRow>& rows) {
    bool changed = true;
    while (changed) {
        changed = false;
        autoreduce(rows);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::vector<BasisRow> others;
            for (std::size_t j = 0; j < rows.size(); ++j)
                if (j != i) others.push_back(rows[j]);
            if (others.empty()) continue;
            LinearForm probe = rows[i].row;
            if (reduce_rows(std::move(probe), others, nullptr, true).is_zero()) {
                rows.erase(rows.begin() + static_cast<long>(i));
                changed = true;
                break;
            }
        }
    }
}

std::vector<BasisRow> attach_identity_certs(const JetSystem& sys) {
    std::vector<BasisRow> rows;
    int p = static_cast<int>(sys.equations.size());
    for (int t = 0; t < p; ++t) {
        BasisRow r;
        r.row = sys.equations[t];
        r.row.cert.assign(p, ScalarOp(sys.nd, sys.nvars));
        r.row.cert[t] = ScalarOp::one(sys.nd, sys.nvars);
        rows.push_back(std::move(r));
    }
    return rows;
}

// completion in the given coordinates; throws Error("order-bound") when the
// basis order exceeds the bound
JanetBasis complete_here(const JetSystem& sys, int order_bound) {
    auto rows = attach_identity_certs(sys);
    prereduce_inputs(rows);
    autoreduce(rows);
    while (true) {
        assign_classes(rows);
        auto sw = sweep(rows);
        if (sw.involutive) break;
        int omin = sw.remainders[0].order();
        for (auto& r : sw.remainders) omin = std::min(omin, r.order());
        for (auto& r : sw.remainders)
            if (r.order() == omin) rows.push_back(BasisRow{r, 0});
        autoreduce(rows);
        int q = 0;
        for (auto& r : rows) q = std::max(q, r.row.order());
        if (q > order_bound)
            throw Error("order-bound", "completion exceeded order bound " +
                                           std::to_string(order_bound));
    }
    JanetBasis basis;
    basis.input = sys;
    basis.rows = rows;
    basis.q = 0;
    for (auto& r : rows) basis.q = std::max(basis.q, r.row.order());
    basis.chars = compute_characters(rows, sys.nd, sys.m);
    basis.coordinate_change = sys.coordinate_change;
    if (!characters_admissible(basis.chars))
        throw Error("order-bound", "inadmissible characters, coordinates not delta-regular");
    // express the inputs in the basis
    int p = static_cast<int>(sys.equations.size());
    basis.input_in_basis.assign(p, std::vector<ScalarOp>(rows.size(), ScalarOp(sys.nd, sys.nvars)));
    for (int t = 0; t < p; ++t) {
        LinearForm f = sys.equations[t];
        f.cert.clear();
        std::vector<ScalarOp> coeffs(rows.size(), ScalarOp(sys.nd, sys.nvars));
        LinearForm rem = reduce_rows(f, rows, &coeffs);
        if (!rem.is_zero())
            throw Error("internal", "input row does not reduce against its own basis");
        basis.input_in_basis[t] = std::move(coeffs);
    }
    return basis;
}

} // namespace

JanetBasis complete_to_involution(const JetSystem& sys, const CompletionOptions& opt) {
    JetSystem s = sys;
    s.default_names();
    if (s.equations.empty()) {
        JanetBasis basis;
        basis.input = s;
        basis.q = 0;
        basis.chars.q = 1;
        basis.chars.beta.assign(s.nd, 0);
        basis.chars.alpha.assign(s.nd, s.m);
        for (int i = 1; i <= s.nd; ++i) basis.chars.dim_gq1 += i * s.m;
        basis.chars.dim_gq = static_cast<long long>(s.nd) * s.m;
        basis.coordinate_change = s.coordinate_change;
        return basis;
    }
    int q0 = std::max(1, s.order());
    int bound = opt.max_order ? *opt.max_order : q0 + opt.max_order_excess;
    try {
        return complete_here(s, bound);
    } catch (const Error& e) {
        if (std::string(e.code()) != "order-bound" || !opt.allow_coordinate_change) throw;
    }
    for (int seed = 1; seed <= opt.retry_seeds; ++seed) {
        QMatrix C = random_invertible_matrix(s.nd, static_cast<unsigned>(seed));
        try {
            JanetBasis b = complete_here(change_coordinates(s, C), bound);
            b.applied_change = C;
            return b;
        } catch (const Error& e) {
            if (std::string(e.code()) != "order-bound") throw;
        }
    }
    throw Error("not-delta-regular",
                "no delta-regular coordinates found after " +
                    std::to_string(opt.retry_seeds) + " seeded changes");
}

std::pair<JetSystem, int> saturate_at_order(const JetSystem& sys) {
    JetSystem s = sys;
    s.default_names();
    auto rows = attach_identity_certs(s);
    autoreduce(rows);
    int q0 = std::max(1, s.order());
    int added = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        assign_classes(rows);
        auto sw = sweep(rows);
        for (auto& r : sw.remainders) {
            if (r.order() <= q0) {
                rows.push_back(BasisRow{r, 0});
                ++added;
                changed = true;
            }
        }
        if (changed) autoreduce(rows);
    }
    JetSystem out = s;
    out.equations.clear();
    for (auto& r : rows) out.equations.push_back(r.row);
    out.labels.clear();
    out.default_names();
    return {out, added};
}

LinearForm normal_form(const LinearForm& f, const JanetBasis& basis,
                       std::vector<ScalarOp>* coeffs) {
    if (coeffs) coeffs->assign(basis.rows.size(), ScalarOp(f.nd(), f.nvars()));
    LinearForm g = f;
    g.cert.clear();
    return reduce_rows(std::move(g), basis.rows, coeffs);
}

bool reduces_to_zero(const LinearForm& f, const JanetBasis& basis) {
    return normal_form(f, basis).is_zero();
}

LinFormExpr normal_form_lin(LinFormExpr f, const JanetBasis& basis) {
    bool changed = true;
    while (changed && !f.terms.empty()) {
        changed = false;
        for (auto& [jet, coeff] : f.terms) {
            MultiIndex kappa;
            for (auto& br : basis.rows) {
                const Jet& lead = br.row.leading_jet();
                if (lead.k != jet.k) continue;
                if (!mi_divides(lead.mu, jet.mu, br.cls, kappa)) continue;
                LinScalar c = coeff;
                LinearForm pr = br.row.prolong_by(kappa);
                pr.cert.clear();
                LinScalar neg = c.scaled(-Scalar::one(f.nvars));
                f.add_scaled(pr, neg);
                changed = true;
                break;
            }
            if (changed) break;
        }
    }
    return f;
}

LinearForm prolong(const LinearForm& eq, int i) { return eq.prolong(i); }

long long hilbert_function(const JanetBasis& basis, int r) {
    int n = basis.n(), m = basis.m();
    int q = std::max(basis.q, basis.chars.q);
    long long dim = jet_dimension(n, m, q) - basis.size();
    for (int s = 1; s <= r; ++s)
        for (int i = 1; i <= n; ++i)
            dim += binom_ll(s + i - 1, s) * basis.chars.alpha[i - 1];
    return dim;
}

OpMatrix compatibility_conditions(const JanetBasis& basis) {
    int nb = basis.size();
    std::vector<std::vector<ScalarOp>> ccrows;
    for (int i = 0; i < nb; ++i) {
        for (int j : basis.dots(i)) {
            std::vector<ScalarOp> coeffs(nb, ScalarOp(basis.n(), basis.nvars()));
            LinearForm rem = reduce_rows(basis.rows[i].row.prolong(j), basis.rows, &coeffs);
            if (!rem.is_zero())
                throw Error("internal", "basis is not involutive in compatibility pass");
            std::vector<ScalarOp> row(nb, ScalarOp(basis.n(), basis.nvars()));
            row[i] = ScalarOp::derivation(j, basis.n(), basis.nvars());
            for (int t = 0; t < nb; ++t) row[t] = row[t] - coeffs[t];
            ccrows.push_back(std::move(row));
        }
    }
    OpMatrix cc(static_cast<int>(ccrows.size()), nb, basis.n(), basis.nvars());
    cc.a = std::move(ccrows);
    return cc;
}

OpMatrix input_syzygies(const JanetBasis& basis) {
    int p = static_cast<int>(basis.input.equations.size());
    OpMatrix ccb = compatibility_conditions(basis);
    OpMatrix T = basis.tracking();
    OpMatrix first = matrix_compose(ccb, T);
    OpMatrix S(p, basis.size(), basis.n(), basis.nvars());
    for (int t = 0; t < p; ++t)
        for (int i = 0; i < basis.size(); ++i) S.a[t][i] = basis.input_in_basis[t][i];
    OpMatrix st = matrix_compose(S, T);
    OpMatrix out(0, p, basis.n(), basis.nvars());
    auto push_row = [&](const std::vector<ScalarOp>& row) {
        for (auto& e : row)
            if (!e.is_zero()) {
                out.a.push_back(row);
                out.rows++;
                return;
            }
    };
    for (auto& row : first.a) push_row(row);
    for (int t = 0; t < p; ++t) {
        std::vector<ScalarOp> row(p, ScalarOp(basis.n(), basis.nvars()));
        row[t] = ScalarOp::one(basis.n(), basis.nvars());
        for (int u = 0; u < p; ++u) row[u] = row[u] - st.a[t][u];
        push_row(row);
    }
    return out;
}

LinearForm adapt_row(const LinearForm& f, const JanetBasis& basis) {
    if (!basis.applied_change) return f;
    JetSystem tmp(f.nd(), f.nvars(), f.unknowns());
    LinearForm g = f;
    g.cert.clear();
    tmp.equations.push_back(std::move(g));
    tmp.default_names();
    return change_coordinates(tmp, *basis.applied_change).equations[0];
}

OpMatrix transform_matrix(const OpMatrix& A, const QMatrix& C) {
    JetSystem s(A.nd, A.nvars, A.cols);
    s.equations = rows_from_matrix(A);
    s.default_names();
    JetSystem t = change_coordinates(s, C);
    return matrix_from_rows(t.equations, A.cols, A.nd, A.nvars);
}

OpMatrix row_syzygies(const OpMatrix& A, const CompletionOptions& opt_in) {
    if (A.rows == 0) return OpMatrix(0, 0, A.nd, A.nvars);
    CompletionOptions opt = opt_in;
    opt.allow_coordinate_change = false;
    JetSystem s(A.nd, A.nvars, A.cols);
    s.equations = rows_from_matrix(A);
    s.default_names();
    try {
        JanetBasis b = complete_to_involution(s, opt);
        return minimize_rows(input_syzygies(b), opt_in);
    } catch (const Error& e) {
        if (std::string(e.code()) != "order-bound" || !opt_in.allow_coordinate_change) throw;
    }
    for (int seed = 1; seed <= opt_in.retry_seeds; ++seed) {
        QMatrix C = random_invertible_matrix(A.nd, static_cast<unsigned>(seed));
        try {
            JanetBasis b = complete_to_involution(change_coordinates(s, C), opt);
            OpMatrix syz = minimize_rows(input_syzygies(b), opt_in);
            auto inv = q_inverse(C);
            return transform_matrix(syz, *inv);
        } catch (const Error& e) {
            if (std::string(e.code()) != "order-bound") throw;
        }
    }
    throw Error("not-delta-regular", "syzygy computation found no regular coordinates");
}

bool rows_member(const OpMatrix& candidates, const OpMatrix& gens,
                 const CompletionOptions& opt) {
    if (gens.rows == 0) {
        for (auto& r : candidates.a)
            for (auto& e : r)
                if (!e.is_zero()) return false;
        return true;
    }
    JetSystem s(gens.nd, gens.nvars, gens.cols);
    s.equations = rows_from_matrix(gens);
    s.default_names();
    JanetBasis b = complete_to_involution(s, opt);
    for (auto& r : rows_from_matrix(candidates))
        if (!reduces_to_zero(adapt_row(r, b), b)) return false;
    return true;
}

OpMatrix minimize_rows(const OpMatrix& M, const CompletionOptions& opt) {
    std::vector<LinearForm> rows = rows_from_matrix(M);
    rows.erase(std::remove_if(rows.begin(), rows.end(),
                              [](const LinearForm& r) { return r.is_zero(); }),
               rows.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::vector<LinearForm> others;
            for (std::size_t j = 0; j < rows.size(); ++j)
                if (j != i) others.push_back(rows[j]);
            if (others.empty()) continue;
            OpMatrix one = matrix_from_rows({rows[i]}, M.cols, M.nd, M.nvars);
            OpMatrix rest = matrix_from_rows(others, M.cols, M.nd, M.nvars);
            try {
                if (rows_member(one, rest, opt)) {
                    rows.erase(rows.begin() + static_cast<long>(i));
                    changed = true;
                    break;
                }
            } catch (const Error&) {
                // keep the row when membership cannot be decided
            }
        }
    }
    // canonical presentation: monic rows, sorted by descending leading jet
    for (auto& r : rows) {
        r.cert.clear();
        r.make_monic();
    }
    std::sort(rows.begin(), rows.end(), [](const LinearForm& a, const LinearForm& b) {
        return jet_greater(a.leading_jet(), b.leading_jet());
    });
    return matrix_from_rows(rows, M.cols, M.nd, M.nvars);
}

bool same_row_module(const OpMatrix& A, const OpMatrix& B, const CompletionOptions& opt) {
    if (A.cols != B.cols) throw Error("shape", "module comparison shape mismatch");
    return rows_member(B, A, opt) && rows_member(A, B, opt);
}

namespace {

FreeResolution resolve(const JetSystem& sys, const CompletionOptions& opt, bool input_track) {
    FreeResolution res;
    res.ranks.push_back(sys.m);
    OpMatrix cur;
    if (input_track) {
        res.maps.push_back(matrix_from_rows(sys.equations, sys.m, sys.nd, sys.nvars));
        res.ranks.push_back(res.maps[0].rows);
        cur = row_syzygies(res.maps[0], opt);
    } else {
        JanetBasis b0 = complete_to_involution(sys, opt);
        res.maps.push_back(b0.matrix());
        res.ranks.push_back(b0.size());
        cur = compatibility_conditions(b0);
    }
    int guard = 0;
    CompletionOptions fixed = opt;
    fixed.allow_coordinate_change = false;
    while (cur.rows > 0) {
        if (++guard > 16) throw Error("internal", "resolution did not terminate");
        res.maps.push_back(cur);
        res.ranks.push_back(cur.rows);
        if (input_track) {
            cur = row_syzygies(cur, opt);
        } else {
            JetSystem s(sys.nd, sys.nvars, cur.cols);
            s.equations = rows_from_matrix(cur);
            s.default_names();
            JanetBasis b = complete_to_involution(s, fixed);
            cur = input_syzygies(b);
        }
    }
    long long ep = 0;
    long long sign = 1;
    for (auto r : res.ranks) {
        ep += sign * r;
        sign = -sign;
    }
    res.euler_poincare = ep;
    return res;
}

} // namespace

FreeResolution free_resolution(const JetSystem& sys, const CompletionOptions& opt) {
    return resolve(sys, opt, false);
}

FreeResolution input_resolution(const JetSystem& sys, const CompletionOptions& opt) {
    return resolve(sys, opt, true);
}

JetSystem change_coordinates(const JetSystem& sys, const QMatrix& C) {
    int n = sys.nd;
    if (static_cast<int>(C.size()) != n) throw Error("shape", "coordinate change size");
    auto inv = q_inverse(C);
    if (!inv) throw Error("shape", "coordinate change matrix is singular");
    // x_j = sum_i inv[j][i] * new_i restricted to the first nd ground variables
    std::vector<std::vector<mpq_class>> subst(sys.nvars,
                                              std::vector<mpq_class>(sys.nvars, 0));
    for (int j = 0; j < sys.nvars; ++j) {
        if (j < n)
            for (int i = 0; i < n; ++i) subst[j][i] = (*inv)[j][i];
        else
            subst[j][j] = 1;
    }
    JetSystem out = sys;
    out.equations.clear();
    for (auto& eq : sys.equations) {
        LinearForm ne(sys.nd, sys.nvars, sys.m);
        for (auto& [jet, a] : eq.terms()) {
            Scalar na = Scalar(a.num().substitute_linear(subst), a.den().substitute_linear(subst));
            // expand partial_mu as a product of sums of new derivations
            std::map<MultiIndex, mpq_class, MonoCmp> expand;
            expand[MultiIndex(n, 0)] = 1;
            for (int j = 0; j < n; ++j) {
                for (std::uint32_t rep = 0; rep < jet.mu[j]; ++rep) {
                    std::map<MultiIndex, mpq_class, MonoCmp> next;
                    for (auto& [nu, c] : expand)
                        for (int i = 0; i < n; ++i) {
                            if (C[i][j] == 0) continue;
                            MultiIndex up = nu;
                            up[i]++;
                            auto it = next.find(up);
                            if (it == next.end())
                                next[up] = c * C[i][j];
                            else
                                it->second += c * C[i][j];
                        }
                    expand = std::move(next);
                }
            }
            for (auto& [nu, c] : expand)
                ne.add_term(Jet{jet.k, nu}, na * Scalar::of(c, sys.nvars));
        }
        out.equations.push_back(std::move(ne));
    }
    if (sys.coordinate_change) {
        // compose: total = C * previous
        QMatrix total(n, std::vector<mpq_class>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) total[i][j] += C[i][l] * (*sys.coordinate_change)[l][j];
        out.coordinate_change = total;
    } else {
        out.coordinate_change = C;
    }
    return out;
}

QMatrix random_invertible_matrix(int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_int_distribution<int> dist(-3, 3);
    while (true) {
        QMatrix C(n, std::vector<mpq_class>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) C[i][j] = dist(gen);
        if (q_det(C) != 0) return C;
    }
}

QMatrix swap_matrix(int n, int i, int j) {
    QMatrix C(n, std::vector<mpq_class>(n, 0));
    for (int k = 0; k < n; ++k) C[k][k] = 1;
    C[i - 1][i - 1] = 0;
    C[j - 1][j - 1] = 0;
    C[i - 1][j - 1] = 1;
    C[j - 1][i - 1] = 1;
    return C;
}

JetSystem change_coordinates_seeded(const JetSystem& sys, unsigned seed) {
    if (seed == 0) return sys;
    return change_coordinates(sys, random_invertible_matrix(sys.nd, seed));
}

std::vector<std::string> chi_names(int nvars, int nd) {
    std::vector<std::string> names;
    for (int i = 1; i <= nvars; ++i) names.push_back("x" + std::to_string(i));
    for (int i = 1; i <= nd; ++i) names.push_back("chi" + std::to_string(i));
    return names;
}

namespace {

// symbol polynomial vector of a top-order row in Q[x, chi]
std::vector<Poly> symbol_row(const LinearForm& row, int q, int nvars, int nd, int m) {
    int tot = nvars + nd;
    std::vector<Poly> out(m, Poly(tot));
    // clear denominators over the whole row first
    Poly den = Poly::constant(1, nvars);
    for (auto& [jet, a] : row.terms()) {
        if (mi_order(jet.mu) != q) continue;
        Poly g = poly_gcd(den, a.den());
        den = den * a.den().div_exact(g);
    }
    auto lift = [&](const Poly& p) {
        Poly r(tot);
        for (auto& [e, c] : p.terms()) {
            Exponents ee(tot, 0);
            for (int i = 0; i < nvars; ++i) ee[i] = e[i];
            r.add_term(ee, c);
        }
        return r;
    };
    for (auto& [jet, a] : row.terms()) {
        if (mi_order(jet.mu) != q) continue;
        Poly num = a.num() * den.div_exact(a.den());
        Poly chi = Poly::constant(1, tot);
        for (int i = 0; i < nd; ++i) {
            for (std::uint32_t k = 0; k < jet.mu[i]; ++k)
                chi = chi * Poly::variable(nvars + i + 1, tot);
        }
        out[jet.k] = out[jet.k] + lift(num) * chi;
    }
    return out;
}

Poly make_primitive(const Poly& p) {
    if (p.is_zero()) return p;
    // divide by the gcd of the coefficients and normalize the leading sign
    mpz_class num_gcd(0), den_lcm(1);
    for (auto& [e, c] : p.terms()) {
        mpz_class n = c.get_num(), d = c.get_den();
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
        num_gcd = g;
        mpz_lcm(g.get_mpz_t(), den_lcm.get_mpz_t(), d.get_mpz_t());
        den_lcm = g;
    }
    mpq_class scale = mpq_class(den_lcm) / mpq_class(num_gcd);
    Poly r = p.mul_coeff(scale);
    if (r.leading_coeff() < 0) r = -r;
    return r;
}

int chi_degree(const Poly& p, int nvars, int nd) {
    int d = 0;
    for (auto& [e, c] : p.terms()) {
        int s = 0;
        for (int i = 0; i < nd; ++i) s += static_cast<int>(e[nvars + i]);
        d = std::max(d, s);
    }
    return d;
}

bool chi_pure(const Poly& p, int nvars) {
    for (auto& [e, c] : p.terms())
        for (int i = 0; i < nvars; ++i)
            if (e[i] > 0) return false;
    return true;
}

// factor a chi-pure polynomial into linear chi-forms (variable extraction
// plus a linear remainder); nullopt if that fails
std::optional<std::vector<Poly>> linear_factors(Poly g, int nvars, int nd) {
    std::vector<Poly> fs;
    int tot = nvars + nd;
    for (int i = 0; i < nd; ++i) {
        while (!g.is_zero() && g.degree_in(nvars + i + 1) > 0) {
            bool all = true;
            for (auto& [e, c] : g.terms())
                if (e[nvars + i] == 0) { all = false; break; }
            if (!all) break;
            g = g.div_exact(Poly::variable(nvars + i + 1, tot));
            fs.push_back(Poly::variable(nvars + i + 1, tot));
        }
    }
    if (g.is_constant()) return fs;
    if (chi_degree(g, nvars, nd) == 1 && g.degree() == 1) {
        fs.push_back(make_primitive(g));
        return fs;
    }
    return std::nullopt;
}

// canonical reduced generating set of the span of linear chi-forms
std::vector<Poly> reduce_linear_span(const std::vector<Poly>& forms, int nvars, int nd) {
    int tot = nvars + nd;
    QMatrix A;
    for (auto& f : forms) {
        std::vector<mpq_class> row(nd, 0);
        for (auto& [e, c] : f.terms())
            for (int i = 0; i < nd; ++i)
                if (e[nvars + i] > 0) row[i] = c;
        A.push_back(row);
    }
    // rref
    std::size_t r = 0;
    std::vector<int> piv;
    for (int c = 0; c < nd && r < A.size(); ++c) {
        std::size_t p = r;
        while (p < A.size() && A[p][c] == 0) ++p;
        if (p == A.size()) continue;
        std::swap(A[r], A[p]);
        mpq_class d = A[r][c];
        for (int j = 0; j < nd; ++j) A[r][j] /= d;
        for (std::size_t i = 0; i < A.size(); ++i) {
            if (i == r || A[i][c] == 0) continue;
            mpq_class f = A[i][c];
            for (int j = 0; j < nd; ++j) A[i][j] -= f * A[r][j];
        }
        piv.push_back(c);
        ++r;
    }
    std::vector<Poly> out;
    for (std::size_t i = 0; i < r; ++i) {
        Poly f(tot);
        for (int j = 0; j < nd; ++j)
            if (A[i][j] != 0) f = f + Poly::variable(nvars + j + 1, tot).mul_coeff(A[i][j]);
        out.push_back(make_primitive(f));
    }
    return out;
}

bool member_of_linear(const Poly& g, const std::vector<Poly>& prime, int nvars, int nd) {
    // reduce g modulo the solved pivot variables of the reduced linear forms
    Poly r = g;
    int tot = nvars + nd;
    for (auto& f : prime) {
        // f = chi_piv + rest (monic at its leading chi)
        const Exponents& lead = f.leading_mono();
        int piv = -1;
        for (int i = 0; i < nd; ++i)
            if (lead[nvars + i] > 0) { piv = i; break; }
        if (piv < 0) continue;
        Poly rest = f - Poly::variable(nvars + piv + 1, tot).mul_coeff(f.leading_coeff());
        Poly repl = rest.mul_coeff(mpq_class(-1) / f.leading_coeff());
        // substitute chi_piv -> repl in r repeatedly
        while (r.degree_in(nvars + piv + 1) > 0) {
            Poly next(tot);
            for (auto& [e, c] : r.terms()) {
                if (e[nvars + piv] == 0) {
                    next.add_term(e, c);
                    continue;
                }
                Exponents base = e;
                std::uint32_t k = base[nvars + piv];
                base[nvars + piv] = 0;
                Poly t(tot);
                t.add_term(base, c);
                for (std::uint32_t s = 0; s < k; ++s) t = t * repl;
                next = next + t;
            }
            r = next;
        }
    }
    return r.is_zero();
}

} // namespace

CharIdeal characteristic_ideal(const JanetBasis& basis) {
    CharIdeal ci;
    int n = basis.n(), m = basis.m(), nvars = basis.nvars();
    ci.codim = basis.chars.codim();
    ci.dim = basis.chars.dim();
    std::vector<std::vector<Poly>> rows;
    for (auto& r : basis.rows)
        if (r.row.order() == basis.chars.q)
            rows.push_back(symbol_row(r.row, basis.chars.q, nvars, n, m));
    std::vector<Poly> gens;
    auto push_gen = [&](const Poly& p) {
        if (p.is_zero()) return;
        Poly q = make_primitive(p);
        for (auto& g : gens)
            if (g == q) return;
        gens.push_back(q);
    };
    if (m == 1) {
        for (auto& r : rows) push_gen(r[0]);
    } else if (basis.chars.rank() == 0) {
        // all m x m minors of the characteristic matrix
        int nr = static_cast<int>(rows.size());
        std::vector<int> idx(m);
        std::function<void(int, int)> rec = [&](int start, int depth) {
            if (depth == m) {
                std::vector<std::vector<Poly>> sub(m, std::vector<Poly>(m, Poly(nvars + n)));
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) sub[i][j] = rows[idx[i]][j];
                // Laplace expansion determinant
                std::function<Poly(std::vector<int>, std::vector<int>)> det =
                    [&](std::vector<int> ri, std::vector<int> cj) -> Poly {
                    if (ri.size() == 1) return sub[ri[0]][cj[0]];
                    Poly acc(nvars + n);
                    for (std::size_t t = 0; t < cj.size(); ++t) {
                        std::vector<int> ri2(ri.begin() + 1, ri.end());
                        std::vector<int> cj2;
                        for (std::size_t u = 0; u < cj.size(); ++u)
                            if (u != t) cj2.push_back(cj[u]);
                        Poly term = sub[ri[0]][cj[t]] * det(ri2, cj2);
                        acc = (t % 2 == 0) ? acc + term : acc - term;
                    }
                    return acc;
                };
                std::vector<int> ri(m), cj(m);
                for (int i = 0; i < m; ++i) { ri[i] = i; cj[i] = i; }
                push_gen(det(ri, cj));
                return;
            }
            for (int i = start; i < nr; ++i) {
                idx[depth] = i;
                rec(i + 1, depth + 1);
            }
        };
        if (nr >= m) rec(0, 0);
    }
    std::sort(gens.begin(), gens.end(),
              [](const Poly& a, const Poly& b) { return a < b; });
    ci.generators = gens;

    // limited radical policy: monomial / linear-form factorizations only
    bool all_pure = !gens.empty();
    for (auto& g : gens)
        if (!chi_pure(g, nvars)) { all_pure = false; break; }
    if (all_pure) {
        std::vector<std::optional<std::vector<Poly>>> facs;
        bool all_factor = true;
        for (auto& g : gens) {
            facs.push_back(linear_factors(g, nvars, n));
            if (!facs.back()) all_factor = false;
        }
        if (all_factor) {
            // one linear form per generator, span of each choice
            std::vector<std::vector<Poly>> primes;
            std::vector<std::size_t> pick(gens.size(), 0);
            bool done = false;
            while (!done) {
                std::vector<Poly> forms;
                for (std::size_t i = 0; i < gens.size(); ++i) {
                    auto& f = *facs[i];
                    // deduplicate repeated factors
                    forms.push_back(f[pick[i] % f.size()]);
                }
                auto prime = reduce_linear_span(forms, nvars, n);
                bool seen = false;
                for (auto& p : primes)
                    if (p == prime) { seen = true; break; }
                if (!seen) primes.push_back(prime);
                // advance
                done = true;
                for (std::size_t i = 0; i < gens.size(); ++i) {
                    if (pick[i] + 1 < facs[i]->size()) {
                        pick[i]++;
                        for (std::size_t j = 0; j < i; ++j) pick[j] = 0;
                        done = false;
                        break;
                    }
                }
            }
            // keep only the minimal spans (maximal components)
            std::vector<std::vector<Poly>> minimal;
            for (auto& p : primes) {
                bool dominated = false;
                for (auto& q : primes) {
                    if (q.size() < p.size()) {
                        bool contained = true;
                        for (auto& f : q)
                            if (!member_of_linear(f, p, nvars, n)) { contained = false; break; }
                        if (contained) { dominated = true; break; }
                    }
                }
                if (!dominated) minimal.push_back(p);
            }
            std::sort(minimal.begin(), minimal.end(),
                      [](const std::vector<Poly>& a, const std::vector<Poly>& b) {
                          if (a.size() != b.size()) return a.size() < b.size();
                          for (std::size_t i = 0; i < a.size(); ++i)
                              if (!(a[i] == b[i])) return a[i] < b[i];
                          return false;
                      });
            ci.radical_primes = minimal;
        } else {
            // pure powers of linear forms pin the variety; check membership of the rest
            std::vector<Poly> forms;
            for (std::size_t i = 0; i < gens.size(); ++i) {
                if (!facs[i]) continue;
                auto& fs = *facs[i];
                bool pure_power = true;
                for (auto& f : fs)
                    if (!(f == fs[0])) { pure_power = false; break; }
                if (pure_power && !fs.empty()) forms.push_back(fs[0]);
            }
            if (!forms.empty()) {
                auto prime = reduce_linear_span(forms, nvars, n);
                bool ok = true;
                for (auto& g : gens)
                    if (!member_of_linear(g, prime, nvars, n)) { ok = false; break; }
                if (ok) ci.radical_primes = std::vector<std::vector<Poly>>{prime};
            }
        }
    }
    return ci;
}

std::string CharIdeal::str(int nvars, int nd) const {
    auto names = chi_names(nvars, nd);
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (i) out << ", ";
        out << generators[i].str(names);
    }
    out << ")";
    if (radical_primes) {
        out << " rad = ";
        for (std::size_t p = 0; p < radical_primes->size(); ++p) {
            if (p) out << " ∩ ";
            out << "(";
            for (std::size_t i = 0; i < (*radical_primes)[p].size(); ++i) {
                if (i) out << ", ";
                out << (*radical_primes)[p][i].str(names);
            }
            out << ")";
        }
    }
    return out.str();
}

namespace {

std::vector<MultiIndex> all_indices_up_to(int n, int ord) {
    std::vector<MultiIndex> out;
    MultiIndex mu(n, 0);
    std::function<void(int, int)> rec = [&](int pos, int rem) {
        if (pos == n) {
            out.push_back(mu);
            return;
        }
        for (int k = 0; k <= rem; ++k) {
            mu[pos] = static_cast<std::uint32_t>(k);
            rec(pos + 1, rem - k);
        }
        mu[pos] = 0;
    };
    rec(0, ord);
    std::sort(out.begin(), out.end(), mono_greater);
    return out;
}

long long rank_at_point(const std::vector<LinearForm>& eqs, int nd, int nvars, int m, int ord,
                        std::mt19937& gen) {
    std::uniform_int_distribution<int> dist(2, 97);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Point pt;
        for (int i = 0; i < nvars; ++i) pt.coords.push_back(dist(gen));
        auto mus = all_indices_up_to(nd, ord);
        std::map<std::pair<int, MultiIndex>, int> col;
        int nc = 0;
        for (int k = 0; k < m; ++k)
            for (auto& mu : mus) col[{k, mu}] = nc++;
        QMatrix A;
        try {
            for (auto& e : eqs) {
                int room = ord - e.order();
                for (auto& kappa : all_indices_up_to(nd, room)) {
                    LinearForm pr = e.prolong_by(kappa);
                    std::vector<mpq_class> row(nc, 0);
                    for (auto& [jet, a] : pr.terms())
                        row[col[{jet.k, jet.mu}]] = a.eval(pt);
                    A.push_back(std::move(row));
                }
            }
        } catch (const Error& err) {
            if (std::string(err.code()) == "pole") continue;
            throw;
        }
        return q_rank(std::move(A));
    }
    throw Error("pole", "no pole-free evaluation point found");
}

} // namespace

long long prolonged_rank(const std::vector<LinearForm>& eqs, int nd, int nvars, int m,
                         int ord, unsigned seed) {
    std::mt19937 gen(seed);
    long long r1 = rank_at_point(eqs, nd, nvars, m, ord, gen);
    long long r2 = rank_at_point(eqs, nd, nvars, m, ord, gen);
    return std::max(r1, r2);
}

long long solution_space_dim(const JetSystem& sys, int ord, unsigned seed) {
    return jet_dimension(sys.nd, sys.m, ord) -
           prolonged_rank(sys.equations, sys.nd, sys.nvars, sys.m, ord, seed);
}

} // namespace purkit
