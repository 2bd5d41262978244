#pragma once

#include <string>

#include "structid/polynomial.hpp"

namespace structid {

// Quotient of two polynomials over Q, kept normalized: common monomial and
// content factors cancelled, denominator with integer primitive coefficients
// and a positive leading coefficient. Full multivariate gcd is out of scope;
// normalization relies on content extraction, a univariate Euclid when both
// parts are univariate in the same variable, and mutual exact-division tests.
class RationalFunction {
  public:
    RationalFunction() = default;

    static RationalFunction normalized(QPoly num, QPoly den);

    static RationalFunction from_polynomial(const QPoly& p) {
        return normalized(p, QPoly::constant(p.context(), p.ring(), Rat(1)));
    }

    const QPoly& numerator() const { return num_; }
    const QPoly& denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }

    RationalFunction operator-() const;
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    // Evaluates at a full point; throws SpecializationError when the
    // denominator vanishes there.
    Rat evaluate(const std::map<VarId, Rat>& point) const;

    std::string str() const;

  private:
    RationalFunction(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) {}

    QPoly num_;
    QPoly den_;
};

// Univariate polynomial gcd over Q (Euclid), normalized integer-primitive
// with positive leading coefficient. Both arguments must be univariate in v.
QPoly univariate_gcd(const QPoly& a, const QPoly& b, VarId v);

}  // namespace structid
