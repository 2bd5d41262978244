#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "structid/errors.hpp"
#include "structid/monomial.hpp"
#include "structid/prime_field.hpp"
#include "structid/rational.hpp"
#include "structid/variables.hpp"

namespace structid {

// Sparse distributed multivariate polynomial over a coefficient ring R
// (Rationals or PrimeField). Terms are kept sorted descending under
// degrevlex, with no zero coefficients and no duplicate monomials, so equal
// polynomials have identical term lists.
template <typename R>
class Polynomial {
  public:
    using Ring = R;
    using Coeff = typename R::Elem;

    struct Term {
        Monomial mono;
        Coeff coeff;
        friend bool operator==(const Term&, const Term&) = default;
    };

    Polynomial() = default;

    Polynomial(VarTablePtr ctx, R ring) : ctx_(std::move(ctx)), ring_(ring) {}

    static Polynomial zero(VarTablePtr ctx, R ring) { return Polynomial(std::move(ctx), ring); }

    static Polynomial constant(VarTablePtr ctx, R ring, Coeff c) {
        Polynomial p(std::move(ctx), ring);
        if (!ring.is_zero(c)) p.terms_.push_back({Monomial{}, std::move(c)});
        return p;
    }

    static Polynomial variable(VarTablePtr ctx, R ring, VarId v, std::uint32_t e = 1) {
        Polynomial p(std::move(ctx), ring);
        p.terms_.push_back({Monomial::var(v, e), ring.one()});
        return p;
    }

    // Builds canonical form from arbitrary (monomial, coefficient) pairs.
    static Polynomial from_terms(VarTablePtr ctx, R ring, std::vector<Term> terms) {
        Polynomial p(std::move(ctx), ring);
        p.terms_ = std::move(terms);
        p.canonicalize();
        return p;
    }

    const VarTablePtr& context() const { return ctx_; }
    const R& ring() const { return ring_; }
    const std::vector<Term>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }

    Coeff constant_value() const {
        if (terms_.empty()) return ring_.zero();
        if (!is_constant()) throw ArgumentError("polynomial is not constant");
        return terms_[0].coeff;
    }

    // Total degree; -1 for the zero polynomial. Degrevlex is
    // degree-compatible, so the leading term realizes it.
    int degree() const { return terms_.empty() ? -1 : static_cast<int>(terms_[0].mono.degree()); }

    const Term& leading_term() const {
        if (terms_.empty()) throw ArgumentError("leading term of zero polynomial");
        return terms_[0];
    }

    std::set<VarId> variables() const {
        std::set<VarId> vars;
        for (const auto& t : terms_)
            for (const auto& ve : t.mono.entries()) vars.insert(ve.var);
        return vars;
    }

    Polynomial operator-() const {
        Polynomial r(ctx_, ring_);
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) r.terms_.push_back({t.mono, ring_.neg(t.coeff)});
        return r;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge(a, b, false); }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge(a, b, true); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_compatible(b);
        Polynomial r(a.ctx_, a.ring_);
        if (a.terms_.empty() || b.terms_.empty()) return r;
        const Polynomial& outer = a.terms_.size() <= b.terms_.size() ? a : b;
        const Polynomial& inner = a.terms_.size() <= b.terms_.size() ? b : a;
        std::vector<Term> acc;
        acc.reserve(outer.terms_.size() * inner.terms_.size());
        for (const auto& to : outer.terms_)
            for (const auto& ti : inner.terms_)
                acc.push_back({to.mono * ti.mono, a.ring_.mul(to.coeff, ti.coeff)});
        r.terms_ = std::move(acc);
        r.canonicalize();
        return r;
    }

    Polynomial scaled(const Coeff& c) const {
        Polynomial r(ctx_, ring_);
        if (ring_.is_zero(c)) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) {
            Coeff v = ring_.mul(t.coeff, c);
            if (!ring_.is_zero(v)) r.terms_.push_back({t.mono, std::move(v)});
        }
        return r;
    }

    Polynomial shifted(const Monomial& m) const {
        Polynomial r(ctx_, ring_);
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coeff});
        return r;
    }

    // Formal partial derivative with respect to v.
    Polynomial derivative(VarId v) const {
        Polynomial r(ctx_, ring_);
        std::vector<Term> acc;
        for (const auto& t : terms_) {
            std::uint32_t e = t.mono.exponent(v);
            if (e == 0) continue;
            Coeff c = t.coeff;
            // e fits well below any modulus / exactly in Rat.
            Coeff mult = coeff_from_u32(e);
            c = ring_.mul(c, mult);
            if (ring_.is_zero(c)) continue;
            acc.push_back({t.mono / Monomial::var(v, 1), std::move(c)});
        }
        Polynomial out(ctx_, ring_);
        out.terms_ = std::move(acc);
        // Dividing every monomial by v preserves strict descending order.
        return out;
    }

    // Full evaluation; the point must cover every variable occurring in the
    // polynomial.
    Coeff evaluate(const std::map<VarId, Coeff>& point) const {
        Coeff acc = ring_.zero();
        for (const auto& t : terms_) {
            Coeff term = t.coeff;
            for (const auto& ve : t.mono.entries()) {
                auto it = point.find(ve.var);
                if (it == point.end())
                    throw IncompletePointError("no value assigned to variable " +
                                               (ctx_ ? ctx_->name(ve.var) : std::to_string(ve.var)));
                for (std::uint32_t i = 0; i < ve.exp; ++i) term = ring_.mul(term, it->second);
            }
            acc = ring_.add(acc, term);
        }
        return acc;
    }

    // Evaluation against a dense point indexed by variable id.
    Coeff evaluate_full(const std::vector<Coeff>& point) const {
        Coeff acc = ring_.zero();
        for (const auto& t : terms_) {
            Coeff term = t.coeff;
            for (const auto& ve : t.mono.entries()) {
                Coeff p = point.at(ve.var);
                for (std::uint32_t i = 0; i < ve.exp; ++i) term = ring_.mul(term, p);
            }
            acc = ring_.add(acc, term);
        }
        return acc;
    }

    // Replaces one variable by a constant.
    Polynomial substitute(VarId v, const Coeff& value) const {
        std::vector<Term> acc;
        acc.reserve(terms_.size());
        for (const auto& t : terms_) {
            std::uint32_t e = t.mono.exponent(v);
            if (e == 0) {
                acc.push_back(t);
                continue;
            }
            Coeff c = t.coeff;
            for (std::uint32_t i = 0; i < e; ++i) c = ring_.mul(c, value);
            if (!ring_.is_zero(c)) acc.push_back({t.mono / Monomial::var(v, e), std::move(c)});
        }
        return from_terms(ctx_, ring_, std::move(acc));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.ctx_ != b.ctx_ || !(a.ring_ == b.ring_)) return false;
        return a.terms_ == b.terms_;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& t : terms_) {
            std::string c = coeff_str(t.coeff);
            bool neg = !c.empty() && c[0] == '-';
            if (first) {
                if (neg) out += "-";
            } else {
                out += neg ? " - " : " + ";
            }
            if (neg) c = c.substr(1);
            first = false;
            if (t.mono.is_one()) {
                out += c;
            } else {
                if (c != "1") out += c + "*";
                out += t.mono.str(*ctx_);
            }
        }
        return out;
    }

    void check_compatible(const Polynomial& o) const {
        if (ctx_ != o.ctx_) throw ContextError("polynomials from different variable contexts");
        if (!(ring_ == o.ring_)) throw ContextError("polynomials from different coefficient domains");
    }

  private:
    static const MonomialOrder& canonical_order() {
        static const MonomialOrder order = MonomialOrder::degrevlex();
        return order;
    }

    Coeff coeff_from_u32(std::uint32_t n) const {
        if constexpr (std::is_same_v<R, Rationals>) {
            return Rat(static_cast<unsigned long>(n));
        } else {
            return n % ring_.p;
        }
    }

    std::string coeff_str(const Coeff& c) const {
        if constexpr (std::is_same_v<R, Rationals>) {
            return c.get_str();
        } else {
            return std::to_string(c);
        }
    }

    static Polynomial merge(const Polynomial& a, const Polynomial& b, bool subtract) {
        a.check_compatible(b);
        Polynomial r(a.ctx_, a.ring_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        const auto& order = canonical_order();
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        while (ia != a.terms_.end() && ib != b.terms_.end()) {
            int c = order.compare(ia->mono, ib->mono);
            if (c > 0) {
                r.terms_.push_back(*ia++);
            } else if (c < 0) {
                r.terms_.push_back({ib->mono, subtract ? a.ring_.neg(ib->coeff) : ib->coeff});
                ++ib;
            } else {
                Coeff v = subtract ? a.ring_.sub(ia->coeff, ib->coeff) : a.ring_.add(ia->coeff, ib->coeff);
                if (!a.ring_.is_zero(v)) r.terms_.push_back({ia->mono, std::move(v)});
                ++ia;
                ++ib;
            }
        }
        r.terms_.insert(r.terms_.end(), ia, a.terms_.end());
        for (; ib != b.terms_.end(); ++ib)
            r.terms_.push_back({ib->mono, subtract ? a.ring_.neg(ib->coeff) : ib->coeff});
        return r;
    }

    void canonicalize() {
        const auto& order = canonical_order();
        std::sort(terms_.begin(), terms_.end(),
                  [&](const Term& x, const Term& y) { return order.greater(x.mono, y.mono); });
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!out.empty() && out.back().mono == t.mono) {
                out.back().coeff = ring_.add(out.back().coeff, t.coeff);
            } else {
                out.push_back(std::move(t));
            }
        }
        terms_.clear();
        for (auto& t : out)
            if (!ring_.is_zero(t.coeff)) terms_.push_back(std::move(t));
    }

    VarTablePtr ctx_;
    R ring_{};
    std::vector<Term> terms_;
};

using QPoly = Polynomial<Rationals>;
using FpPoly = Polynomial<PrimeField>;

// Exact division test: returns a/b when b divides a exactly, nullopt
// otherwise.
template <typename R>
std::optional<Polynomial<R>> try_divide(const Polynomial<R>& a, const Polynomial<R>& b) {
    a.check_compatible(b);
    if (b.is_zero()) throw DivisionError("division by zero polynomial");
    Polynomial<R> r = a;
    std::vector<typename Polynomial<R>::Term> quotient;
    const auto& lead = b.leading_term();
    const R& ring = a.ring();
    while (!r.is_zero()) {
        const auto& lt = r.leading_term();
        if (!lead.mono.divides(lt.mono)) return std::nullopt;
        Monomial m = lt.mono / lead.mono;
        typename R::Elem c = ring.div(lt.coeff, lead.coeff);
        quotient.push_back({m, c});
        r = r - b.shifted(m).scaled(c);
    }
    return Polynomial<R>::from_terms(a.context(), ring, std::move(quotient));
}

// Common monomial factor of all terms (exponent-wise minimum); 1 for zero.
template <typename R>
Monomial monomial_content(const Polynomial<R>& p) {
    if (p.is_zero()) return Monomial{};
    Monomial g = p.terms()[0].mono;
    for (std::size_t i = 1; i < p.terms().size() && !g.is_one(); ++i)
        g = Monomial::gcd(g, p.terms()[i].mono);
    return g;
}

// Multiplies by the unique positive rational making the coefficients integer,
// collectively coprime, and the leading coefficient positive. Returns the
// scaled polynomial and the factor applied.
std::pair<QPoly, Rat> integer_primitive(const QPoly& p);

// Coefficient-wise image under Z -> F_p extended to prime-safe rationals.
FpPoly reduce_mod_prime(const QPoly& p, const PrimeField& field);

}  // namespace structid
