#include "structid/polynomial.hpp"

namespace structid {

std::pair<QPoly, Rat> integer_primitive(const QPoly& p) {
    if (p.is_zero()) return {p, Rat(1)};
    Int den_lcm = 1;
    for (const auto& t : p.terms()) {
        Int d = t.coeff.get_den();
        den_lcm = den_lcm / gcd(den_lcm, d) * d;
    }
    Int num_gcd = 0;
    for (const auto& t : p.terms()) {
        Rat scaled = t.coeff * Rat(den_lcm);
        num_gcd = gcd(num_gcd, scaled.get_num());
    }
    Rat factor = rat(den_lcm, num_gcd);
    if (p.leading_term().coeff * factor < 0) factor = -factor;
    return {p.scaled(factor), factor};
}

FpPoly reduce_mod_prime(const QPoly& p, const PrimeField& field) {
    std::vector<FpPoly::Term> terms;
    terms.reserve(p.terms().size());
    for (const auto& t : p.terms()) {
        std::uint64_t c = field.from_rational(t.coeff);
        if (c != 0) terms.push_back({t.mono, c});
    }
    return FpPoly::from_terms(p.context(), field, std::move(terms));
}

}  // namespace structid
