#include "structid/rational_function.hpp"

namespace structid {

namespace {

// Strips the common monomial factor of num and den.
void cancel_monomial_content(QPoly& num, QPoly& den) {
    Monomial g = Monomial::gcd(monomial_content(num), monomial_content(den));
    if (g.is_one()) return;
    std::vector<QPoly::Term> nt, dt;
    for (const auto& t : num.terms()) nt.push_back({t.mono / g, t.coeff});
    for (const auto& t : den.terms()) dt.push_back({t.mono / g, t.coeff});
    num = QPoly::from_terms(num.context(), num.ring(), std::move(nt));
    den = QPoly::from_terms(den.context(), den.ring(), std::move(dt));
}

// The single variable both polynomials are univariate in, if any.
std::optional<VarId> common_single_variable(const QPoly& a, const QPoly& b) {
    auto va = a.variables();
    auto vb = b.variables();
    va.insert(vb.begin(), vb.end());
    if (va.size() == 1) return *va.begin();
    return std::nullopt;
}

}  // namespace

QPoly univariate_gcd(const QPoly& a, const QPoly& b, VarId v) {
    QPoly r0 = a, r1 = b;
    while (!r1.is_zero()) {
        // Euclidean step: r0 mod r1 in Q[v].
        QPoly rem = r0;
        const auto& lead = r1.leading_term();
        while (!rem.is_zero() && rem.leading_term().mono.exponent(v) >= lead.mono.exponent(v)) {
            Monomial m = rem.leading_term().mono / lead.mono;
            Rat c = rem.leading_term().coeff / lead.coeff;
            rem = rem - r1.shifted(m).scaled(c);
        }
        r0 = std::move(r1);
        r1 = std::move(rem);
    }
    return integer_primitive(r0).first;
}

RationalFunction RationalFunction::normalized(QPoly num, QPoly den) {
    num.check_compatible(den);
    if (den.is_zero()) throw DivisionError("rational function with zero denominator");
    if (num.is_zero())
        return RationalFunction(num, QPoly::constant(num.context(), num.ring(), Rat(1)));

    cancel_monomial_content(num, den);

    if (auto v = common_single_variable(num, den)) {
        QPoly g = univariate_gcd(num, den, *v);
        if (g.degree() > 0) {
            num = *try_divide(num, g);
            den = *try_divide(den, g);
        }
    }

    // Whole-polynomial cancellation in either direction.
    if (den.degree() > 0) {
        if (auto q = try_divide(num, den)) {
            num = std::move(*q);
            den = QPoly::constant(num.context(), num.ring(), Rat(1));
        } else if (auto q2 = try_divide(den, num)) {
            // num/den = 1/q2; fold num into the constant scale below.
            den = std::move(*q2);
            num = QPoly::constant(den.context(), den.ring(), Rat(1));
        }
    }

    auto [den_prim, factor] = integer_primitive(den);
    den = std::move(den_prim);
    num = num.scaled(factor);
    return RationalFunction(std::move(num), std::move(den));
}

RationalFunction RationalFunction::operator-() const { return RationalFunction(-num_, den_); }

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction::normalized(a.num_ + b.num_, a.den_);
    return RationalFunction::normalized(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction::normalized(a.num_ - b.num_, a.den_);
    return RationalFunction::normalized(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    // Cross-cancel before multiplying so quotient-rule chains stay small.
    RationalFunction left = RationalFunction::normalized(a.num_, b.den_);
    RationalFunction right = RationalFunction::normalized(b.num_, a.den_);
    return RationalFunction::normalized(left.num_ * right.num_, left.den_ * right.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.num_.is_zero()) throw DivisionError("division by zero rational function");
    RationalFunction left = RationalFunction::normalized(a.num_, b.num_);
    RationalFunction right = RationalFunction::normalized(b.den_, a.den_);
    return RationalFunction::normalized(left.num_ * right.num_, left.den_ * right.den_);
}

Rat RationalFunction::evaluate(const std::map<VarId, Rat>& point) const {
    Rat d = den_.evaluate(point);
    if (d == 0) throw SpecializationError("denominator vanishes at the sample point");
    return num_.evaluate(point) / d;
}

std::string RationalFunction::str() const {
    if (is_polynomial() && den_.constant_value() == 1) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

}  // namespace structid
