#ifndef PURKIT_SCALAR_HPP
#define PURKIT_SCALAR_HPP

#include "purkit/poly.hpp"

#include <string>
#include <vector>

namespace purkit {

// Evaluation point with exact rational coordinates.
struct Point {
    std::vector<mpq_class> coords;
};

// Element of the differential field K = Q(x1..xn), kept in canonical form:
// gcd-reduced fraction with monic leading coefficient in the denominator.
// Equality is structural equality.
class Scalar {
public:
    Scalar() = default;
    explicit Scalar(int nvars)
        : num_(Poly(nvars)), den_(Poly::constant(1, nvars)) {}
    Scalar(Poly num, Poly den);

    static Scalar zero(int nvars) { return Scalar(nvars); }
    static Scalar one(int nvars) { return of(mpq_class(1), nvars); }
    static Scalar of(const mpq_class& q, int nvars) {
        return Scalar(Poly::constant(q, nvars), Poly::constant(1, nvars));
    }
    static Scalar of(const Poly& p) { return Scalar(p, Poly::constant(1, p.nvars())); }
    static Scalar variable(int i, int nvars) { return of(Poly::variable(i, nvars)); }

    int nvars() const { return num_.nvars(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const; // throws Error("zero-divisor")
    Scalar inv() const;

    bool operator==(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    bool operator<(const Scalar& o) const; // container order

    Scalar partial(int i) const; // d/dx_i, 1-based
    mpq_class eval(const Point& p) const; // throws Error("pole")

    std::string str(const std::vector<std::string>& names) const;
    std::string str() const;

private:
    void reduce();
    Poly num_, den_;
};

enum class FieldOp { add, sub, mul, div };
Scalar field_arithmetic(const Scalar& a, const Scalar& b, FieldOp op);

} // namespace purkit

#endif
