#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "structid/errors.hpp"
#include "structid/variables.hpp"

namespace structid {

// Sparse power product. Entries are sorted by variable id and carry strictly
// positive exponents; the empty monomial is 1.
class Monomial {
  public:
    struct VarExp {
        VarId var;
        std::uint32_t exp;
        friend bool operator==(const VarExp&, const VarExp&) = default;
    };

    Monomial() = default;

    static Monomial var(VarId v, std::uint32_t e = 1) {
        Monomial m;
        if (e > 0) m.entries_.push_back({v, e});
        m.degree_ = e;
        return m;
    }

    static Monomial from_entries(std::vector<VarExp> entries) {
        Monomial m;
        m.entries_ = std::move(entries);
        std::sort(m.entries_.begin(), m.entries_.end(),
                  [](const VarExp& a, const VarExp& b) { return a.var < b.var; });
        for (const auto& ve : m.entries_) {
            if (ve.exp == 0) throw ArgumentError("zero exponent in monomial");
            m.degree_ += ve.exp;
        }
        return m;
    }

    bool is_one() const { return entries_.empty(); }
    std::uint32_t degree() const { return degree_; }
    const std::vector<VarExp>& entries() const { return entries_; }

    std::uint32_t exponent(VarId v) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                                   [](const VarExp& ve, VarId id) { return ve.var < id; });
        return (it != entries_.end() && it->var == v) ? it->exp : 0;
    }

    bool contains(VarId v) const { return exponent(v) != 0; }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        r.entries_.reserve(entries_.size() + o.entries_.size());
        auto a = entries_.begin(), b = o.entries_.begin();
        while (a != entries_.end() && b != o.entries_.end()) {
            if (a->var < b->var)
                r.entries_.push_back(*a++);
            else if (b->var < a->var)
                r.entries_.push_back(*b++);
            else {
                r.entries_.push_back({a->var, a->exp + b->exp});
                ++a;
                ++b;
            }
        }
        r.entries_.insert(r.entries_.end(), a, entries_.end());
        r.entries_.insert(r.entries_.end(), b, o.entries_.end());
        r.degree_ = degree_ + o.degree_;
        return r;
    }

    bool divides(const Monomial& o) const {
        if (degree_ > o.degree_) return false;
        auto b = o.entries_.begin();
        for (const auto& ve : entries_) {
            while (b != o.entries_.end() && b->var < ve.var) ++b;
            if (b == o.entries_.end() || b->var != ve.var || b->exp < ve.exp) return false;
        }
        return true;
    }

    // Quotient this / o; requires o.divides(*this).
    Monomial operator/(const Monomial& o) const {
        Monomial r;
        auto b = o.entries_.begin();
        for (const auto& ve : entries_) {
            std::uint32_t sub = 0;
            while (b != o.entries_.end() && b->var < ve.var) ++b;
            if (b != o.entries_.end() && b->var == ve.var) sub = b->exp;
            if (sub > ve.exp) throw ArgumentError("monomial quotient is not a monomial");
            if (ve.exp > sub) r.entries_.push_back({ve.var, ve.exp - sub});
        }
        r.degree_ = degree_ - o.degree_;
        return r;
    }

    static Monomial lcm(const Monomial& x, const Monomial& y) {
        Monomial r;
        auto a = x.entries_.begin(), b = y.entries_.begin();
        while (a != x.entries_.end() && b != y.entries_.end()) {
            if (a->var < b->var)
                r.entries_.push_back(*a++);
            else if (b->var < a->var)
                r.entries_.push_back(*b++);
            else {
                r.entries_.push_back({a->var, std::max(a->exp, b->exp)});
                ++a;
                ++b;
            }
        }
        r.entries_.insert(r.entries_.end(), a, x.entries_.end());
        r.entries_.insert(r.entries_.end(), b, y.entries_.end());
        for (const auto& ve : r.entries_) r.degree_ += ve.exp;
        return r;
    }

    static Monomial gcd(const Monomial& x, const Monomial& y) {
        Monomial r;
        auto a = x.entries_.begin(), b = y.entries_.begin();
        while (a != x.entries_.end() && b != y.entries_.end()) {
            if (a->var < b->var)
                ++a;
            else if (b->var < a->var)
                ++b;
            else {
                r.entries_.push_back({a->var, std::min(a->exp, b->exp)});
                r.degree_ += std::min(a->exp, b->exp);
                ++a;
                ++b;
            }
        }
        return r;
    }

    static bool coprime(const Monomial& x, const Monomial& y) {
        auto a = x.entries_.begin(), b = y.entries_.begin();
        while (a != x.entries_.end() && b != y.entries_.end()) {
            if (a->var < b->var)
                ++a;
            else if (b->var < a->var)
                ++b;
            else
                return false;
        }
        return true;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.degree_ == b.degree_ && a.entries_ == b.entries_;
    }

    std::string str(const VarTable& table) const {
        if (entries_.empty()) return "1";
        std::string out;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (i) out += "*";
            out += table.name(entries_[i].var);
            if (entries_[i].exp > 1) out += "^" + std::to_string(entries_[i].exp);
        }
        return out;
    }

  private:
    std::vector<VarExp> entries_;
    std::uint32_t degree_ = 0;
};

// Strict total order on monomials, multiplicative and with 1 minimal.
// Variable id 0 is the largest variable under lex and inside degrevlex ties.
class MonomialOrder {
  public:
    enum class Kind { Degrevlex, Lex, Block };

    static MonomialOrder degrevlex() { return MonomialOrder(Kind::Degrevlex, {}); }
    static MonomialOrder lex() { return MonomialOrder(Kind::Lex, {}); }

    // Elimination order: monomials are compared degrevlex within the
    // eliminated block first, then degrevlex on the remaining variables.
    static MonomialOrder block(std::vector<VarId> eliminated) {
        return MonomialOrder(Kind::Block, std::move(eliminated));
    }

    Kind kind() const { return kind_; }
    const std::vector<VarId>& eliminated() const { return eliminated_; }

    // Returns <0 if a < b, 0 if equal, >0 if a > b.
    int compare(const Monomial& a, const Monomial& b) const {
        switch (kind_) {
            case Kind::Degrevlex:
                return cmp_degrevlex(a, b, nullptr);
            case Kind::Lex:
                return cmp_lex(a, b);
            case Kind::Block: {
                int first = cmp_degrevlex(a, b, &eliminated_);
                if (first != 0) return first;
                return cmp_degrevlex_excluding(a, b, eliminated_);
            }
        }
        return 0;
    }

    bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
    bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

    friend bool operator==(const MonomialOrder& x, const MonomialOrder& y) {
        return x.kind_ == y.kind_ && x.eliminated_ == y.eliminated_;
    }

  private:
    MonomialOrder(Kind kind, std::vector<VarId> eliminated)
        : kind_(kind), eliminated_(std::move(eliminated)) {
        std::sort(eliminated_.begin(), eliminated_.end());
    }

    static bool in_sorted(const std::vector<VarId>& set, VarId v) {
        return std::binary_search(set.begin(), set.end(), v);
    }

    // Degrevlex restricted to `subset` (all variables when null): higher
    // restricted degree wins; on ties the monomial with the smaller exponent
    // at the largest differing variable wins.
    static int cmp_degrevlex(const Monomial& a, const Monomial& b, const std::vector<VarId>* subset) {
        auto deg = [&](const Monomial& m) {
            if (!subset) return m.degree();
            std::uint32_t d = 0;
            for (const auto& ve : m.entries())
                if (in_sorted(*subset, ve.var)) d += ve.exp;
            return d;
        };
        std::uint32_t da = deg(a), db = deg(b);
        if (da != db) return da < db ? -1 : 1;
        // Scan from the largest variable id downwards for the first
        // difference.
        auto ia = a.entries().rbegin();
        auto ib = b.entries().rbegin();
        auto skip = [&](auto& it, auto end) {
            if (subset)
                while (it != end && !in_sorted(*subset, it->var)) ++it;
        };
        for (;;) {
            skip(ia, a.entries().rend());
            skip(ib, b.entries().rend());
            bool ea = (ia == a.entries().rend()), eb = (ib == b.entries().rend());
            if (ea && eb) return 0;
            if (ea) return 1;   // b has an extra high-id factor => a > b
            if (eb) return -1;
            if (ia->var != ib->var) {
                // The larger var id appears in exactly one monomial.
                return ia->var > ib->var ? -1 : 1;
            }
            if (ia->exp != ib->exp) return ia->exp > ib->exp ? -1 : 1;
            ++ia;
            ++ib;
        }
    }

    static int cmp_degrevlex_excluding(const Monomial& a, const Monomial& b,
                                       const std::vector<VarId>& excluded) {
        auto deg = [&](const Monomial& m) {
            std::uint32_t d = 0;
            for (const auto& ve : m.entries())
                if (!in_sorted(excluded, ve.var)) d += ve.exp;
            return d;
        };
        std::uint32_t da = deg(a), db = deg(b);
        if (da != db) return da < db ? -1 : 1;
        auto ia = a.entries().rbegin();
        auto ib = b.entries().rbegin();
        auto skip = [&](auto& it, auto end) {
            while (it != end && in_sorted(excluded, it->var)) ++it;
        };
        for (;;) {
            skip(ia, a.entries().rend());
            skip(ib, b.entries().rend());
            bool ea = (ia == a.entries().rend()), eb = (ib == b.entries().rend());
            if (ea && eb) return 0;
            if (ea) return 1;
            if (eb) return -1;
            if (ia->var != ib->var) return ia->var > ib->var ? -1 : 1;
            if (ia->exp != ib->exp) return ia->exp > ib->exp ? -1 : 1;
            ++ia;
            ++ib;
        }
    }

    static int cmp_lex(const Monomial& a, const Monomial& b) {
        auto ia = a.entries().begin();
        auto ib = b.entries().begin();
        for (;;) {
            bool ea = (ia == a.entries().end()), eb = (ib == b.entries().end());
            if (ea && eb) return 0;
            if (ea) return -1;  // b has a factor in a higher-priority slot
            if (eb) return 1;
            if (ia->var != ib->var) return ia->var < ib->var ? 1 : -1;
            if (ia->exp != ib->exp) return ia->exp > ib->exp ? 1 : -1;
            ++ia;
            ++ib;
        }
    }

    Kind kind_;
    std::vector<VarId> eliminated_;
};

}  // namespace structid
