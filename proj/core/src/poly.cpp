#include "purkit/poly.hpp"

#include "purkit/error.hpp"

#include <algorithm>
#include <sstream>

namespace purkit {

std::uint32_t expo_degree(const Exponents& e) {
    std::uint32_t d = 0;
    for (auto x : e) d += x;
    return d;
}

bool mono_greater(const Exponents& a, const Exponents& b) {
    std::uint32_t da = expo_degree(a), db = expo_degree(b);
    if (da != db) return da > db;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

Poly Poly::constant(const mpq_class& c, int nvars) {
    Poly p(nvars);
    if (c != 0) p.terms_[Exponents(nvars, 0)] = c;
    return p;
}

Poly Poly::variable(int i, int nvars) {
    Poly p(nvars);
    Exponents e(nvars, 0);
    e.at(i - 1) = 1;
    p.terms_[e] = 1;
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && expo_degree(terms_.begin()->first) == 0);
}

std::uint32_t Poly::degree() const {
    return terms_.empty() ? 0 : expo_degree(terms_.begin()->first);
}

std::uint32_t Poly::degree_in(int v) const {
    std::uint32_t d = 0;
    for (auto& [e, c] : terms_) d = std::max(d, e[v - 1]);
    return d;
}

bool Poly::depends_on(int v) const { return degree_in(v) > 0; }

const mpq_class& Poly::leading_coeff() const {
    static const mpq_class zero(0);
    return terms_.empty() ? zero : terms_.begin()->second;
}

const Exponents& Poly::leading_mono() const {
    static const Exponents none;
    return terms_.empty() ? none : terms_.begin()->first;
}

void Poly::add_term(const Exponents& e, const mpq_class& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_[e] = c;
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly r(nvars_);
    for (auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    for (auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    for (auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r(nvars_);
    for (auto& [ea, ca] : terms_)
        for (auto& [eb, cb] : o.terms_) {
            Exponents e(nvars_);
            for (int i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

Poly Poly::mul_coeff(const mpq_class& c) const {
    Poly r(nvars_);
    if (c == 0) return r;
    for (auto& [e, k] : terms_) r.terms_[e] = k * c;
    return r;
}

bool Poly::operator<(const Poly& o) const {
    if (nvars_ != o.nvars_) return nvars_ < o.nvars_;
    auto a = terms_.begin(), b = o.terms_.begin();
    for (; a != terms_.end() && b != o.terms_.end(); ++a, ++b) {
        if (a->first != b->first) return mono_greater(b->first, a->first);
        if (a->second != b->second) return a->second < b->second;
    }
    return b != o.terms_.end();
}

Poly Poly::derivative(int v) const {
    Poly r(nvars_);
    for (auto& [e, c] : terms_) {
        if (e[v - 1] == 0) continue;
        Exponents d = e;
        d[v - 1]--;
        r.add_term(d, c * e[v - 1]);
    }
    return r;
}

mpq_class Poly::eval(const std::vector<mpq_class>& pt) const {
    mpq_class acc(0);
    for (auto& [e, c] : terms_) {
        mpq_class t = c;
        for (int i = 0; i < nvars_; ++i)
            for (std::uint32_t k = 0; k < e[i]; ++k) t *= pt[i];
        acc += t;
    }
    return acc;
}

Poly Poly::substitute_linear(const std::vector<std::vector<mpq_class>>& m) const {
    std::vector<Poly> imgs;
    imgs.reserve(nvars_);
    for (int j = 0; j < nvars_; ++j) {
        Poly lj(nvars_);
        for (int i = 0; i < nvars_; ++i)
            lj = lj + Poly::variable(i + 1, nvars_).mul_coeff(m[j][i]);
        imgs.push_back(lj);
    }
    Poly r(nvars_);
    for (auto& [e, c] : terms_) {
        Poly t = Poly::constant(c, nvars_);
        for (int i = 0; i < nvars_; ++i)
            for (std::uint32_t k = 0; k < e[i]; ++k) t = t * imgs[i];
        r = r + t;
    }
    return r;
}

Poly Poly::div_exact(const Poly& d) const {
    if (d.is_zero()) throw Error("zero-divisor", "polynomial division by zero");
    Poly rem = *this, quo(nvars_);
    while (!rem.is_zero()) {
        const Exponents& le = rem.leading_mono();
        const Exponents& ld = d.leading_mono();
        Exponents q(nvars_);
        bool divides = true;
        for (int i = 0; i < nvars_; ++i) {
            if (le[i] < ld[i]) { divides = false; break; }
            q[i] = le[i] - ld[i];
        }
        if (!divides) throw Error("inexact-division", "polynomial division left a remainder");
        mpq_class c = rem.leading_coeff() / d.leading_coeff();
        Poly t(nvars_);
        t.terms_[q] = c;
        quo.add_term(q, c);
        rem = rem - t * d;
    }
    return quo;
}

std::string Poly::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto& [e, c] : terms_) {
        mpq_class a = c;
        if (first) {
            if (a < 0) { out << "-"; a = -a; }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool unit = (a == 1);
        bool anyvar = expo_degree(e) > 0;
        if (!unit || !anyvar) out << a.get_str();
        bool need_star = !unit || !anyvar;
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            if (need_star) out << "*";
            out << names[i];
            if (e[i] > 1) out << "^" << e[i];
            need_star = true;
        }
    }
    return out.str();
}

std::string Poly::str() const {
    std::vector<std::string> names;
    for (int i = 1; i <= nvars_; ++i) names.push_back("x" + std::to_string(i));
    return str(names);
}

namespace {

// content/primitive-part helpers for the recursive primitive PRS gcd,
// viewing p as univariate in variable v with Poly coefficients.

std::vector<Poly> coeffs_in(const Poly& p, int v) {
    std::uint32_t d = p.degree_in(v);
    std::vector<Poly> cs(d + 1, Poly(p.nvars()));
    for (auto& [e, c] : p.terms()) {
        Exponents r = e;
        std::uint32_t k = r[v - 1];
        r[v - 1] = 0;
        cs[k].add_term(r, c);
    }
    return cs;
}

Poly from_coeffs(const std::vector<Poly>& cs, int v, int nvars) {
    Poly r(nvars);
    for (std::size_t k = 0; k < cs.size(); ++k)
        for (auto& [e, c] : cs[k].terms()) {
            Exponents x = e;
            x[v - 1] += static_cast<std::uint32_t>(k);
            r.add_term(x, c);
        }
    return r;
}

Poly normalize_monic(const Poly& p) {
    if (p.is_zero()) return p;
    return p.mul_coeff(mpq_class(1) / p.leading_coeff());
}

Poly content_in(const Poly& p, int v) {
    auto cs = coeffs_in(p, v);
    Poly g(p.nvars());
    for (auto& c : cs) g = poly_gcd(g, c);
    return g;
}

// pseudo-remainder of a by b w.r.t. variable v
Poly prem(const Poly& a, const Poly& b, int v) {
    auto bc = coeffs_in(b, v);
    Poly lb = bc.back();
    std::uint32_t db = b.degree_in(v);
    Poly r = a;
    while (!r.is_zero() && r.degree_in(v) >= db) {
        auto rc = coeffs_in(r, v);
        std::uint32_t dr = r.degree_in(v);
        Poly lr = rc.back();
        Poly xshift = Poly::variable(v, a.nvars());
        Poly t = lr;
        for (std::uint32_t k = db; k < dr; ++k) t = t * xshift;
        r = r * lb - t * b;
    }
    return r;
}

} // namespace

Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return normalize_monic(b);
    if (b.is_zero()) return normalize_monic(a);
    if (a.is_constant() || b.is_constant())
        return Poly::constant(1, a.nvars());

    int v = 0;
    for (int i = a.nvars(); i >= 1; --i)
        if (a.depends_on(i) || b.depends_on(i)) { v = i; break; }
    if (!a.depends_on(v)) return poly_gcd(a, content_in(b, v));
    if (!b.depends_on(v)) return poly_gcd(content_in(a, v), b);

    Poly ca = content_in(a, v), cb = content_in(b, v);
    Poly g = poly_gcd(ca, cb);
    Poly pa = a.div_exact(ca), pb = b.div_exact(cb);
    if (pa.degree_in(v) < pb.degree_in(v)) std::swap(pa, pb);
    while (!pb.is_zero()) {
        Poly r = prem(pa, pb, v);
        pa = pb;
        if (r.is_zero()) {
            pb = Poly(a.nvars());
        } else {
            pb = r.div_exact(content_in(r, v));
        }
    }
    return normalize_monic(g * pa);
}

} // namespace purkit
