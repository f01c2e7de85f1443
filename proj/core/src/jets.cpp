#include "purkit/jets.hpp"

#include "purkit/error.hpp"

#include <sstream>

namespace purkit {

bool jet_greater(const Jet& a, const Jet& b) {
    if (a.mu != b.mu) return mono_greater(a.mu, b.mu);
    return a.k < b.k;
}

void LinearForm::add_term(const Jet& j, const Scalar& a) {
    if (a.is_zero()) return;
    auto it = terms_.find(j);
    if (it == terms_.end()) {
        terms_[j] = a;
    } else {
        it->second = it->second + a;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void LinearForm::add(const LinearForm& o, const Scalar& c) {
    if (c.is_zero()) return;
    for (auto& [j, a] : o.terms_) add_term(j, c * a);
    if (!o.cert.empty()) {
        if (cert.empty()) cert.assign(o.cert.size(), ScalarOp(nd_, nvars_));
        for (std::size_t t = 0; t < cert.size(); ++t)
            cert[t] = cert[t] + o.cert[t].scale(c);
    }
}

LinearForm LinearForm::scaled(const Scalar& c) const {
    LinearForm r(nd_, nvars_, m_);
    r.add(*this, c);
    return r;
}

LinearForm LinearForm::prolong(int i) const {
    LinearForm r(nd_, nvars_, m_);
    for (auto& [j, a] : terms_) {
        Jet up = j;
        up.mu[i - 1]++;
        r.add_term(up, a);
        r.add_term(j, a.partial(i));
    }
    r.cert.reserve(cert.size());
    ScalarOp di = ScalarOp::derivation(i, nd_, nvars_);
    for (auto& q : cert) r.cert.push_back(compose(di, q));
    return r;
}

LinearForm LinearForm::prolong_by(const MultiIndex& kappa) const {
    LinearForm r = *this;
    for (std::size_t i = 0; i < kappa.size(); ++i)
        for (std::uint32_t k = 0; k < kappa[i]; ++k) r = r.prolong(static_cast<int>(i) + 1);
    return r;
}

void LinearForm::make_monic() {
    if (terms_.empty()) return;
    Scalar lc = leading_coeff();
    if (lc.is_one()) return;
    Scalar inv = lc.inv();
    std::map<Jet, Scalar, JetCmp> out;
    for (auto& [j, a] : terms_) out[j] = inv * a;
    terms_ = std::move(out);
    for (auto& q : cert) q = q.scale(inv);
}

std::string LinearForm::str(const std::vector<std::string>& unknowns,
                            const std::vector<std::string>& vars) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto& [j, a] : terms_) {
        std::string as = a.str(vars);
        bool neg = as.size() && as[0] == '-';
        if (first) {
            if (neg) { out << "-"; as = as.substr(1); }
        } else {
            out << (neg ? " - " : " + ");
            if (neg) as = as.substr(1);
        }
        first = false;
        std::string jet = (mi_order(j.mu) == 0 ? "" : mi_str(j.mu) + " ") + unknowns[j.k];
        if (as == "1") {
            out << jet;
        } else {
            bool wrap = as.find(' ') != std::string::npos;
            out << (wrap ? "(" + as + ")" : as) << "*" << jet;
        }
    }
    return out.str();
}

std::string LinearForm::str() const {
    std::vector<std::string> us, vs;
    for (int k = 1; k <= m_; ++k) us.push_back("y" + std::to_string(k));
    for (int i = 1; i <= nvars_; ++i) vs.push_back("x" + std::to_string(i));
    return str(us, vs);
}

LinearForm op_apply(const ScalarOp& p, const LinearForm& expr) {
    LinearForm r(expr.nd(), expr.nvars(), expr.unknowns());
    for (auto& [mu, a] : p.terms()) {
        // expr prolonged by mu, scaled by a
        LinearForm pr = expr.prolong_by(mu);
        r.add(pr, a);
    }
    return r;
}

std::vector<LinearForm> matrix_apply(const OpMatrix& A, const std::vector<LinearForm>& exprs) {
    if (A.cols != static_cast<int>(exprs.size()))
        throw Error("shape", "matrix apply shape mismatch");
    std::vector<LinearForm> out;
    out.reserve(A.rows);
    for (int i = 0; i < A.rows; ++i) {
        LinearForm acc = exprs.empty() ? LinearForm(A.nd, A.nvars, 0)
                                       : LinearForm(exprs[0].nd(), exprs[0].nvars(), exprs[0].unknowns());
        for (int k = 0; k < A.cols; ++k)
            acc.add(op_apply(A.a[i][k], exprs[k]), Scalar::one(A.nvars));
        out.push_back(std::move(acc));
    }
    return out;
}

LinearForm row_from_ops(const std::vector<ScalarOp>& ops) {
    int m = static_cast<int>(ops.size());
    int nd = m ? ops[0].nd() : 0;
    int nvars = m ? ops[0].nvars() : 0;
    LinearForm r(nd, nvars, m);
    for (int k = 0; k < m; ++k)
        for (auto& [mu, a] : ops[k].terms()) r.add_term(Jet{k, mu}, a);
    return r;
}

std::vector<ScalarOp> ops_from_row(const LinearForm& row) {
    std::vector<ScalarOp> ops(row.unknowns(), ScalarOp(row.nd(), row.nvars()));
    for (auto& [j, a] : row.terms()) ops[j.k].add_term(j.mu, a);
    return ops;
}

OpMatrix matrix_from_rows(const std::vector<LinearForm>& rows, int m, int nd, int nvars) {
    OpMatrix A(static_cast<int>(rows.size()), m, nd, nvars);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto ops = ops_from_row(rows[i]);
        for (int k = 0; k < m; ++k) A.a[i][k] = ops[k];
    }
    return A;
}

std::vector<LinearForm> rows_from_matrix(const OpMatrix& A) {
    std::vector<LinearForm> rows;
    rows.reserve(A.rows);
    for (int i = 0; i < A.rows; ++i) rows.push_back(row_from_ops(A.a[i]));
    return rows;
}

JetSystem::JetSystem(int nd_, int nvars_, int m_) : nd(nd_), nvars(nvars_), m(m_) {
    default_names();
}

int JetSystem::order() const {
    int q = 0;
    for (auto& e : equations) q = std::max(q, e.order());
    return q;
}

void JetSystem::default_names() {
    if (unknown_names.empty())
        for (int k = 1; k <= m; ++k) unknown_names.push_back("y" + std::to_string(k));
    if (labels.empty())
        for (std::size_t t = 1; t <= equations.size(); ++t)
            labels.push_back("u" + std::to_string(t));
}

long long binom_ll(int n, int k) {
    if (k < 0 || k > n) return 0;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b.get_si();
}

int jet_dimension(int n, int m, int q) {
    return static_cast<int>(m * binom_ll(n + q, q));
}

int symbol_layer_dimension(int n, int m, int s) {
    return static_cast<int>(m * binom_ll(n + s - 1, s));
}

} // namespace purkit
