#ifndef PURKIT_POLY_HPP
#define PURKIT_POLY_HPP

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace purkit {

using Exponents = std::vector<std::uint32_t>;

std::uint32_t expo_degree(const Exponents& e);

// Degree-reverse-lexicographic order with x1 < x2 < ... < xn: first compare
// total degree, then at the first position where the exponents differ the one
// with the smaller entry is the greater monomial.
bool mono_greater(const Exponents& a, const Exponents& b);

struct MonoCmp {
    bool operator()(const Exponents& a, const Exponents& b) const { return mono_greater(a, b); }
};

// Sparse multivariate polynomial over Q.  Terms are kept in descending
// monomial order, zero coefficients are never stored.
class Poly {
public:
    Poly() : nvars_(0) {}
    explicit Poly(int nvars) : nvars_(nvars) {}

    static Poly constant(const mpq_class& c, int nvars);
    static Poly variable(int i, int nvars); // 1-based index

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    std::uint32_t degree() const; // total degree, 0 for zero poly
    std::uint32_t degree_in(int v) const;
    bool depends_on(int v) const;

    const std::map<Exponents, mpq_class, MonoCmp>& terms() const { return terms_; }
    const mpq_class& leading_coeff() const;
    const Exponents& leading_mono() const;

    void add_term(const Exponents& e, const mpq_class& c);

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly mul_coeff(const mpq_class& c) const;

    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }
    bool operator<(const Poly& o) const; // arbitrary total order for containers

    Poly derivative(int v) const; // d/dx_v, 1-based
    mpq_class eval(const std::vector<mpq_class>& pt) const;
    // substitute x_j -> sum_i m[j][i] * x_i (square matrix of rationals)
    Poly substitute_linear(const std::vector<std::vector<mpq_class>>& m) const;

    // exact division, throws on failure
    Poly div_exact(const Poly& d) const;

    std::string str(const std::vector<std::string>& names) const;
    std::string str() const; // names x1..xn

private:
    int nvars_;
    std::map<Exponents, mpq_class, MonoCmp> terms_;
};

// gcd over Q[x1..xn], normalized with leading coefficient 1 (or 0 for both zero)
Poly poly_gcd(const Poly& a, const Poly& b);

} // namespace purkit

#endif
