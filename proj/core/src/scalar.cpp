#include "purkit/scalar.hpp"

#include "purkit/error.hpp"

namespace purkit {

Scalar::Scalar(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error("zero-divisor", "zero denominator");
    reduce();
}

void Scalar::reduce() {
    if (num_.is_zero()) {
        den_ = Poly::constant(1, num_.nvars());
        return;
    }
    Poly g = poly_gcd(num_, den_);
    if (!g.is_constant() || g.leading_coeff() != 1) {
        num_ = num_.div_exact(g);
        den_ = den_.div_exact(g);
    }
    const mpq_class& lc = den_.leading_coeff();
    if (lc != 1) {
        mpq_class inv = mpq_class(1) / lc;
        num_ = num_.mul_coeff(inv);
        den_ = den_.mul_coeff(inv);
    }
}

bool Scalar::is_one() const {
    return den_.is_constant() && den_.leading_coeff() == 1 && num_.is_constant() &&
           !num_.is_zero() && num_.leading_coeff() == 1;
}

Scalar Scalar::operator-() const {
    Scalar r = *this;
    r.num_ = -r.num_;
    return r;
}

Scalar Scalar::operator+(const Scalar& o) const {
    return Scalar(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Scalar Scalar::operator-(const Scalar& o) const {
    return Scalar(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Scalar Scalar::operator*(const Scalar& o) const {
    return Scalar(num_ * o.num_, den_ * o.den_);
}

Scalar Scalar::operator/(const Scalar& o) const {
    if (o.is_zero()) throw Error("zero-divisor", "division by zero scalar");
    return Scalar(num_ * o.den_, den_ * o.num_);
}

Scalar Scalar::inv() const {
    if (is_zero()) throw Error("zero-divisor", "inverse of zero scalar");
    return Scalar(den_, num_);
}

bool Scalar::operator<(const Scalar& o) const {
    if (num_ != o.num_) return num_ < o.num_;
    return den_ < o.den_;
}

Scalar Scalar::partial(int i) const {
    // quotient rule; reduce() restores canonical form
    return Scalar(num_.derivative(i) * den_ - num_ * den_.derivative(i), den_ * den_);
}

mpq_class Scalar::eval(const Point& p) const {
    mpq_class d = den_.eval(p.coords);
    if (d == 0) throw Error("pole", "denominator vanishes at evaluation point");
    return num_.eval(p.coords) / d;
}

std::string Scalar::str(const std::vector<std::string>& names) const {
    if (den_.is_constant() && den_.leading_coeff() == 1) {
        return num_.str(names);
    }
    std::string n = num_.str(names), d = den_.str(names);
    if (num_.terms().size() > 1) n = "(" + n + ")";
    int den_vars = 0;
    for (auto e : den_.leading_mono()) den_vars += (e > 0);
    if (den_.terms().size() > 1 || den_vars > 1) d = "(" + d + ")";
    return n + "/" + d;
}

std::string Scalar::str() const {
    std::vector<std::string> names;
    for (int i = 1; i <= nvars(); ++i) names.push_back("x" + std::to_string(i));
    return str(names);
}

Scalar field_arithmetic(const Scalar& a, const Scalar& b, FieldOp op) {
    switch (op) {
        case FieldOp::add: return a + b;
        case FieldOp::sub: return a - b;
        case FieldOp::mul: return a * b;
        case FieldOp::div: return a / b;
    }
    throw Error("internal", "bad field op");
}

} // namespace purkit
