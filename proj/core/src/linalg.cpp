#include "purkit/linalg.hpp"

#include "purkit/error.hpp"

#include <algorithm>

namespace purkit {

int q_rank(QMatrix m) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            mpq_class f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return static_cast<int>(r);
}

mpq_class q_det(QMatrix m) {
    std::size_t n = m.size();
    mpq_class det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) { std::swap(m[c], m[piv]); det = -det; }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            mpq_class f = m[i][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

std::optional<QMatrix> q_inverse(const QMatrix& m) {
    std::size_t n = m.size();
    QMatrix a = m;
    QMatrix inv(n, std::vector<mpq_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[c], a[piv]);
        std::swap(inv[c], inv[piv]);
        mpq_class d = a[c][c];
        for (std::size_t j = 0; j < n; ++j) { a[c][j] /= d; inv[c][j] /= d; }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c] == 0) continue;
            mpq_class f = a[i][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[i][j] -= f * a[c][j];
                inv[i][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

std::optional<std::vector<mpq_class>> q_solve(QMatrix A, std::vector<mpq_class> b) {
    std::size_t rows = A.size();
    std::size_t cols = rows ? A[0].size() : 0;
    std::vector<int> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && A[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(A[r], A[piv]);
        std::swap(b[r], b[piv]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c] == 0) continue;
            mpq_class f = A[i][c] / A[r][c];
            for (std::size_t j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
            b[i] -= f * b[r];
        }
        pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (b[i] != 0) return std::nullopt;
    std::vector<mpq_class> x(cols, 0);
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
        x[pivot_col[i]] = b[i] / A[i][pivot_col[i]];
    return x;
}

std::vector<std::vector<mpq_class>> q_nullspace(QMatrix A, int ncols) {
    std::size_t rows = A.size(), cols = static_cast<std::size_t>(ncols);
    std::vector<int> pivot_of_col(cols, -1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && A[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(A[r], A[piv]);
        mpq_class d = A[r][c];
        for (std::size_t j = c; j < cols; ++j) A[r][j] /= d;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c] == 0) continue;
            mpq_class f = A[i][c];
            for (std::size_t j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
        }
        pivot_of_col[c] = static_cast<int>(r);
        ++r;
    }
    std::vector<std::vector<mpq_class>> basis;
    for (std::size_t c = 0; c < cols; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        std::vector<mpq_class> v(cols, 0);
        v[c] = 1;
        for (std::size_t j = 0; j < cols; ++j)
            if (pivot_of_col[j] >= 0) v[j] = -A[pivot_of_col[j]][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<std::vector<Scalar>> k_nullspace(std::vector<std::vector<Scalar>> A, int ncols) {
    std::size_t rows = A.size(), cols = static_cast<std::size_t>(ncols);
    if (rows == 0) {
        // free: identity basis needs nvars, caller handles empty systems
        return {};
    }
    int nvars = A[0].empty() ? 0 : A[0][0].nvars();
    std::vector<int> pivot_of_col(cols, -1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && A[piv][c].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(A[r], A[piv]);
        Scalar d = A[r][c];
        for (std::size_t j = c; j < cols; ++j) A[r][j] = A[r][j] / d;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c].is_zero()) continue;
            Scalar f = A[i][c];
            for (std::size_t j = c; j < cols; ++j)
                A[i][j] = A[i][j] - f * A[r][j];
        }
        pivot_of_col[c] = static_cast<int>(r);
        ++r;
    }
    std::vector<std::vector<Scalar>> basis;
    for (std::size_t c = 0; c < cols; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        std::vector<Scalar> v(cols, Scalar::zero(nvars));
        v[c] = Scalar::one(nvars);
        for (std::size_t j = 0; j < cols; ++j)
            if (pivot_of_col[j] >= 0) v[j] = -A[pivot_of_col[j]][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

LinScalar LinScalar::unknown(int id, const Scalar& coeff) {
    LinScalar r(coeff.nvars());
    if (!coeff.is_zero()) r.lin[id] = coeff;
    return r;
}

bool LinScalar::is_zero() const { return cst.is_zero() && lin.empty(); }

void LinScalar::add(const LinScalar& o) {
    cst = cst + o.cst;
    for (auto& [id, c] : o.lin) {
        auto it = lin.find(id);
        if (it == lin.end()) {
            lin[id] = c;
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) lin.erase(it);
        }
    }
}

LinScalar LinScalar::scaled(const Scalar& c) const {
    LinScalar r(nvars());
    if (c.is_zero()) return r;
    r.cst = cst * c;
    for (auto& [id, a] : lin) r.lin[id] = a * c;
    return r;
}

LinScalar LinScalar::partial(int i) const {
    LinScalar r(nvars());
    r.cst = cst.partial(i);
    for (auto& [id, a] : lin) {
        Scalar d = a.partial(i);
        if (!d.is_zero()) r.lin[id] = d;
    }
    return r;
}

void LinOp::add_term(const MultiIndex& mu, const LinScalar& c) {
    if (c.is_zero()) return;
    auto it = terms.find(mu);
    if (it == terms.end()) {
        terms.emplace(mu, c);
    } else {
        it->second.add(c);
        if (it->second.is_zero()) terms.erase(it);
    }
}

void LinOp::add(const LinOp& o) {
    for (auto& [mu, c] : o.terms) add_term(mu, c);
}

namespace {

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

LinScalar iterated_partial(const LinScalar& a, const MultiIndex& sigma) {
    LinScalar r = a;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        for (std::uint32_t k = 0; k < sigma[i]; ++k) r = r.partial(static_cast<int>(i) + 1);
    return r;
}

} // namespace

LinOp compose_known_lin(const ScalarOp& p, const LinOp& q) {
    LinOp r(q.nd, q.nvars);
    for (auto& [mu, a] : p.terms()) {
        for (auto& [nu, b] : q.terms) {
            for_sub_indices(mu, [&](const MultiIndex& kappa, const mpq_class& bin) {
                MultiIndex sigma(mu.size());
                for (std::size_t i = 0; i < mu.size(); ++i) sigma[i] = mu[i] - kappa[i];
                LinScalar c = iterated_partial(b, sigma).scaled(a * Scalar::of(bin, q.nvars));
                r.add_term(mi_add(kappa, nu), c);
            });
        }
    }
    return r;
}

LinOp compose_lin_known(const LinOp& p, const ScalarOp& q) {
    LinOp r(p.nd, p.nvars);
    for (auto& [mu, a] : p.terms) {
        for (auto& [nu, b] : q.terms()) {
            for_sub_indices(mu, [&](const MultiIndex& kappa, const mpq_class& bin) {
                MultiIndex sigma(mu.size());
                for (std::size_t i = 0; i < mu.size(); ++i) sigma[i] = mu[i] - kappa[i];
                Scalar db = b;
                for (std::size_t i = 0; i < sigma.size(); ++i)
                    for (std::uint32_t k = 0; k < sigma[i]; ++k) db = db.partial(static_cast<int>(i) + 1);
                r.add_term(mi_add(kappa, nu), a.scaled(db * Scalar::of(bin, p.nvars)));
            });
        }
    }
    return r;
}

void LinFormExpr::add_term(const Jet& j, const LinScalar& c) {
    if (c.is_zero()) return;
    auto it = terms.find(j);
    if (it == terms.end()) {
        terms.emplace(j, c);
    } else {
        it->second.add(c);
        if (it->second.is_zero()) terms.erase(it);
    }
}

void LinFormExpr::add_scaled(const LinearForm& f, const LinScalar& c) {
    if (c.is_zero()) return;
    for (auto& [j, a] : f.terms()) add_term(j, c.scaled(a));
}

std::vector<std::vector<Scalar>> KLinearSystem::homogeneous_nullspace(int nvars) {
    std::vector<std::vector<Scalar>> A;
    for (auto& c : conditions) {
        if (!c.cst.is_zero())
            throw Error("internal", "homogeneous system with nonzero constant");
        std::vector<Scalar> row(nunknowns, Scalar::zero(nvars));
        for (auto& [id, a] : c.lin) row[id] = a;
        A.push_back(std::move(row));
    }
    if (A.empty()) {
        std::vector<std::vector<Scalar>> basis;
        for (int i = 0; i < nunknowns; ++i) {
            std::vector<Scalar> v(nunknowns, Scalar::zero(nvars));
            v[i] = Scalar::one(nvars);
            basis.push_back(std::move(v));
        }
        return basis;
    }
    return k_nullspace(std::move(A), nunknowns);
}

std::optional<std::vector<Scalar>> KLinearSystem::particular_solution(int nvars) {
    // solve lin * x = -cst by elimination over K
    std::vector<std::vector<Scalar>> A;
    std::vector<Scalar> b;
    for (auto& c : conditions) {
        std::vector<Scalar> row(nunknowns, Scalar::zero(nvars));
        for (auto& [id, a] : c.lin) row[id] = a;
        A.push_back(std::move(row));
        b.push_back(-c.cst);
    }
    std::size_t rows = A.size(), cols = static_cast<std::size_t>(nunknowns);
    std::vector<int> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && A[piv][c].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(A[r], A[piv]);
        std::swap(b[r], b[piv]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c].is_zero()) continue;
            Scalar f = A[i][c] / A[r][c];
            for (std::size_t j = c; j < cols; ++j) A[i][j] = A[i][j] - f * A[r][j];
            b[i] = b[i] - f * b[r];
        }
        pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (!b[i].is_zero()) return std::nullopt;
    std::vector<Scalar> x(cols, Scalar::zero(nvars));
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
        x[pivot_col[i]] = b[i] / A[i][pivot_col[i]];
    return x;
}

std::optional<std::vector<mpq_class>> QLinearSystem::particular_solution() {
    // expand each K-coefficient condition into per-monomial Q-equations
    QMatrix A;
    std::vector<mpq_class> b;
    for (auto& c : conditions) {
        // common denominator of all scalars in the condition
        Poly den = c.cst.den();
        for (auto& [id, a] : c.lin) {
            Poly g = poly_gcd(den, a.den());
            den = den * a.den().div_exact(g);
        }
        // numerators over the common denominator
        std::map<Exponents, std::pair<std::vector<mpq_class>, mpq_class>, MonoCmp> rows;
        auto scatter = [&](const Scalar& s, int id) {
            Poly num = s.num() * den.div_exact(s.den());
            for (auto& [e, q] : num.terms()) {
                auto& slot = rows[e];
                if (slot.first.empty()) slot.first.assign(nunknowns, mpq_class(0));
                if (id < 0)
                    slot.second += q;
                else
                    slot.first[id] += q;
            }
        };
        scatter(c.cst, -1);
        for (auto& [id, a] : c.lin) scatter(a, id);
        for (auto& [e, row] : rows) {
            if (row.first.empty()) row.first.assign(nunknowns, mpq_class(0));
            A.push_back(row.first);
            b.push_back(-row.second);
        }
    }
    if (A.empty()) return std::vector<mpq_class>(nunknowns, 0);
    return q_solve(std::move(A), std::move(b));
}

} // namespace purkit
