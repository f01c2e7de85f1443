#include "purkit/ops.hpp"

#include "purkit/error.hpp"

#include <sstream>

namespace purkit {

int mi_order(const MultiIndex& mu) { return static_cast<int>(expo_degree(mu)); }

int mi_class(const MultiIndex& mu) {
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (mu[i] > 0) return static_cast<int>(i) + 1;
    return 0;
}

MultiIndex mi_add(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

bool mi_divides(const MultiIndex& nu, const MultiIndex& mu, int bound, MultiIndex& kappa) {
    kappa.assign(mu.size(), 0);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu[i] < nu[i]) return false;
        kappa[i] = mu[i] - nu[i];
        if (kappa[i] > 0 && static_cast<int>(i) + 1 > bound) return false;
    }
    return true;
}

std::string mi_str(const MultiIndex& mu) {
    if (mi_order(mu) == 0) return "1";
    std::ostringstream out;
    out << "D[";
    bool first = true;
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::uint32_t k = 0; k < mu[i]; ++k) {
            if (!first) out << ",";
            out << (i + 1);
            first = false;
        }
    out << "]";
    return out.str();
}

mpq_class mi_binom(const MultiIndex& mu, const MultiIndex& kappa) {
    mpz_class r(1);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), mu[i], kappa[i]);
        r *= b;
    }
    return mpq_class(r);
}

ScalarOp ScalarOp::of(const Scalar& a, int nd) {
    ScalarOp p(nd, a.nvars());
    p.add_term(MultiIndex(nd, 0), a);
    return p;
}

ScalarOp ScalarOp::monomial(const Scalar& a, const MultiIndex& mu, int nd) {
    ScalarOp p(nd, a.nvars());
    p.add_term(mu, a);
    return p;
}

ScalarOp ScalarOp::derivation(int i, int nd, int nvars) {
    MultiIndex mu(nd, 0);
    mu.at(i - 1) = 1;
    return monomial(Scalar::one(nvars), mu, nd);
}

int ScalarOp::order() const {
    return terms_.empty() ? -1 : mi_order(terms_.begin()->first);
}

void ScalarOp::add_term(const MultiIndex& mu, const Scalar& a) {
    if (a.is_zero()) return;
    auto it = terms_.find(mu);
    if (it == terms_.end()) {
        terms_[mu] = a;
    } else {
        it->second = it->second + a;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

ScalarOp ScalarOp::operator-() const {
    ScalarOp r(nd_, nvars_);
    for (auto& [mu, a] : terms_) r.terms_[mu] = -a;
    return r;
}

ScalarOp ScalarOp::operator+(const ScalarOp& o) const {
    ScalarOp r = *this;
    for (auto& [mu, a] : o.terms_) r.add_term(mu, a);
    return r;
}

ScalarOp ScalarOp::operator-(const ScalarOp& o) const {
    ScalarOp r = *this;
    for (auto& [mu, a] : o.terms_) r.add_term(mu, -a);
    return r;
}

ScalarOp ScalarOp::scale(const Scalar& c) const {
    ScalarOp r(nd_, nvars_);
    if (c.is_zero()) return r;
    for (auto& [mu, a] : terms_) r.add_term(mu, c * a);
    return r;
}

namespace {

// enumerate kappa <= mu, calling f(kappa, binom(mu,kappa))
template <typename F>
void for_sub_indices(const MultiIndex& mu, F&& f) {
    MultiIndex kappa(mu.size(), 0);
    while (true) {
        f(kappa, mi_binom(mu, kappa));
        std::size_t i = 0;
        for (; i < mu.size(); ++i) {
            if (kappa[i] < mu[i]) {
                kappa[i]++;
                for (std::size_t j = 0; j < i; ++j) kappa[j] = 0;
                break;
            }
        }
        if (i == mu.size()) break;
    }
}

Scalar iterated_partial(const Scalar& a, const MultiIndex& sigma) {
    Scalar r = a;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        for (std::uint32_t k = 0; k < sigma[i]; ++k) r = r.partial(static_cast<int>(i) + 1);
    return r;
}

} // namespace

ScalarOp compose(const ScalarOp& p, const ScalarOp& q) {
    ScalarOp r(p.nd(), p.nvars());
    for (auto& [mu, a] : p.terms()) {
        for (auto& [nu, b] : q.terms()) {
            // d_mu o (b d_nu) = sum_{kappa <= mu} binom(mu,kappa) (partial^{mu-kappa} b) d_{kappa+nu}
            for_sub_indices(mu, [&](const MultiIndex& kappa, const mpq_class& bin) {
                MultiIndex sigma(mu.size());
                for (std::size_t i = 0; i < mu.size(); ++i) sigma[i] = mu[i] - kappa[i];
                Scalar c = a * iterated_partial(b, sigma) * Scalar::of(bin, p.nvars());
                r.add_term(mi_add(kappa, nu), c);
            });
        }
    }
    return r;
}

ScalarOp adjoint(const ScalarOp& p) {
    ScalarOp r(p.nd(), p.nvars());
    for (auto& [mu, a] : p.terms()) {
        mpq_class sign = (mi_order(mu) % 2 == 0) ? 1 : -1;
        // d_mu o a = sum_{kappa <= mu} binom(mu,kappa) (partial^{mu-kappa} a) d_kappa
        for_sub_indices(mu, [&](const MultiIndex& kappa, const mpq_class& bin) {
            MultiIndex sigma(mu.size());
            for (std::size_t i = 0; i < mu.size(); ++i) sigma[i] = mu[i] - kappa[i];
            Scalar c = iterated_partial(a, sigma) * Scalar::of(bin * sign, p.nvars());
            r.add_term(kappa, c);
        });
    }
    return r;
}

std::string ScalarOp::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto& [mu, a] : terms_) {
        std::string as = a.str(names);
        bool neg = as.size() && as[0] == '-';
        if (first) {
            if (neg) { out << "-"; as = as.substr(1); }
        } else {
            out << (neg ? " - " : " + ");
            if (neg) as = as.substr(1);
        }
        first = false;
        bool unit = (as == "1");
        if (mi_order(mu) == 0) {
            out << as;
        } else if (unit) {
            out << mi_str(mu);
        } else {
            bool wrap = as.find(' ') != std::string::npos;
            out << (wrap ? "(" + as + ")" : as) << "*" << mi_str(mu);
        }
    }
    return out.str();
}

std::string ScalarOp::str() const {
    std::vector<std::string> names;
    for (int i = 1; i <= nvars_; ++i) names.push_back("x" + std::to_string(i));
    return str(names);
}

OpMatrix::OpMatrix(int r, int c, int nd_, int nvars_) : rows(r), cols(c), nd(nd_), nvars(nvars_) {
    a.assign(r, std::vector<ScalarOp>(c, ScalarOp(nd_, nvars_)));
}

OpMatrix OpMatrix::identity(int n, int nd, int nvars) {
    OpMatrix m(n, n, nd, nvars);
    for (int i = 0; i < n; ++i) m.a[i][i] = ScalarOp::one(nd, nvars);
    return m;
}

bool OpMatrix::is_zero() const {
    for (auto& row : a)
        for (auto& e : row)
            if (!e.is_zero()) return false;
    return true;
}

bool OpMatrix::operator==(const OpMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
}

OpMatrix matrix_compose(const OpMatrix& A, const OpMatrix& B) {
    if (A.cols != B.rows) throw Error("shape", "matrix composition shape mismatch");
    OpMatrix r(A.rows, B.cols, A.nd, A.nvars);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < B.cols; ++j) {
            ScalarOp acc(A.nd, A.nvars);
            for (int l = 0; l < A.cols; ++l)
                acc = acc + compose(A.a[i][l], B.a[l][j]);
            r.a[i][j] = acc;
        }
    return r;
}

OpMatrix adjoint(const OpMatrix& A) {
    OpMatrix r(A.cols, A.rows, A.nd, A.nvars);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j)
            r.a[j][i] = adjoint(A.a[i][j]);
    return r;
}

} // namespace purkit
