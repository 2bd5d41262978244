#include "structid/groebner.hpp"

#include <algorithm>
#include <cstddef>
#include <list>

#include "structid/errors.hpp"

namespace structid {

namespace {

// Working representation inside the engine: term vector sorted descending
// under the engine's order (which need not be the canonical storage order).
template <typename R>
using Terms = std::vector<typename Polynomial<R>::Term>;

template <typename R>
Terms<R> to_ordered(const Polynomial<R>& p, const MonomialOrder& order) {
    Terms<R> t = p.terms();
    std::sort(t.begin(), t.end(),
              [&](const auto& a, const auto& b) { return order.greater(a.mono, b.mono); });
    return t;
}

template <typename R>
Polynomial<R> from_ordered(VarTablePtr ctx, const R& ring, Terms<R> t) {
    return Polynomial<R>::from_terms(std::move(ctx), ring, std::move(t));
}

// a - c * x^m * g, all vectors sorted descending under `order`.
template <typename R>
Terms<R> merge_sub(const R& ring, const MonomialOrder& order, const Terms<R>& a, std::size_t a_from,
                   const Terms<R>& g, const Monomial& m, const typename R::Elem& c) {
    Terms<R> out;
    out.reserve(a.size() - a_from + g.size());
    std::size_t i = a_from, j = 0;
    while (i < a.size() && j < g.size()) {
        Monomial gm = g[j].mono * m;
        int cmp = order.compare(a[i].mono, gm);
        if (cmp > 0) {
            out.push_back(a[i++]);
        } else if (cmp < 0) {
            auto v = ring.neg(ring.mul(c, g[j].coeff));
            out.push_back({std::move(gm), std::move(v)});
            ++j;
        } else {
            auto v = ring.sub(a[i].coeff, ring.mul(c, g[j].coeff));
            if (!ring.is_zero(v)) out.push_back({a[i].mono, std::move(v)});
            ++i;
            ++j;
        }
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    for (; j < g.size(); ++j) {
        auto v = ring.neg(ring.mul(c, g[j].coeff));
        out.push_back({g[j].mono * m, std::move(v)});
    }
    return out;
}

// Full reduction of p against the generator list; `steps` accumulates the
// number of cancellation steps for budget accounting.
template <typename R>
Terms<R> reduce_full(const R& ring, const MonomialOrder& order, Terms<R> p,
                     const std::vector<Terms<R>>& basis, std::uint64_t* steps = nullptr) {
    Terms<R> out;
    std::size_t pos = 0;
    while (pos < p.size()) {
        const auto& lt = p[pos];
        const Terms<R>* reducer = nullptr;
        for (const auto& g : basis) {
            if (!g.empty() && g[0].mono.divides(lt.mono)) {
                reducer = &g;
                break;
            }
        }
        if (reducer == nullptr) {
            out.push_back(lt);
            ++pos;
            continue;
        }
        Monomial m = lt.mono / (*reducer)[0].mono;
        auto c = ring.div(lt.coeff, (*reducer)[0].coeff);
        p = merge_sub(ring, order, p, pos, *reducer, m, c);
        pos = 0;
        if (steps != nullptr) ++*steps;
    }
    return out;
}

template <typename R>
void make_monic(const R& ring, Terms<R>& p) {
    if (p.empty()) return;
    auto inv = ring.inv(p[0].coeff);
    for (auto& t : p) t.coeff = ring.mul(t.coeff, inv);
}

template <typename R>
Terms<R> s_poly_terms(const R& ring, const MonomialOrder& order, const Terms<R>& f, const Terms<R>& g) {
    Monomial l = Monomial::lcm(f[0].mono, g[0].mono);
    // (l/lt(f)) f - (l/lt(g)) g
    Terms<R> left;
    left.reserve(f.size());
    Monomial mf = l / f[0].mono;
    auto cf = ring.inv(f[0].coeff);
    for (const auto& t : f) left.push_back({t.mono * mf, ring.mul(t.coeff, cf)});
    Monomial mg = l / g[0].mono;
    auto cg = ring.inv(g[0].coeff);
    return merge_sub(ring, order, left, 0, g, mg, cg);
}

struct Pair {
    std::uint32_t i, j;
    Monomial lcm;
};

// Gebauer-Moeller update: installs pairs of the new element `t` against
// 0..t-1, applying the chain (M, F) and product (B) criteria, and prunes
// existing pairs made redundant by the new leading monomial.
template <typename R>
void update_pairs(std::vector<Pair>& pending, const std::vector<Terms<R>>& basis, std::uint32_t t) {
    const Monomial& lm_t = basis[t][0].mono;

    std::vector<Pair> fresh;
    fresh.reserve(t);
    for (std::uint32_t i = 0; i < t; ++i) {
        if (basis[i].empty()) continue;
        fresh.push_back({i, t, Monomial::lcm(basis[i][0].mono, lm_t)});
    }

    // M: drop (i,t) when some lcm(j,t) properly divides lcm(i,t).
    auto properly_divides = [](const Monomial& a, const Monomial& b) {
        return !(a == b) && a.divides(b);
    };
    std::vector<bool> keep(fresh.size(), true);
    for (std::size_t a = 0; a < fresh.size(); ++a) {
        for (std::size_t b = 0; b < fresh.size() && keep[a]; ++b) {
            if (a != b && keep[b] && properly_divides(fresh[b].lcm, fresh[a].lcm)) keep[a] = false;
        }
    }
    // F: among equal lcms keep the first.
    for (std::size_t a = 0; a < fresh.size(); ++a) {
        if (!keep[a]) continue;
        for (std::size_t b = a + 1; b < fresh.size(); ++b) {
            if (keep[b] && fresh[a].lcm == fresh[b].lcm) keep[b] = false;
        }
    }
    // B: product criterion.
    for (std::size_t a = 0; a < fresh.size(); ++a) {
        if (keep[a] && Monomial::coprime(basis[fresh[a].i][0].mono, lm_t)) keep[a] = false;
    }

    // Prune old pairs whose lcm is divisible by lm_t unless one of their own
    // lcms with t equals it.
    std::vector<Pair> kept_old;
    kept_old.reserve(pending.size());
    for (auto& pr : pending) {
        if (lm_t.divides(pr.lcm)) {
            Monomial li = Monomial::lcm(basis[pr.i][0].mono, lm_t);
            Monomial lj = Monomial::lcm(basis[pr.j][0].mono, lm_t);
            if (!(li == pr.lcm) && !(lj == pr.lcm)) continue;
        }
        kept_old.push_back(std::move(pr));
    }
    pending = std::move(kept_old);
    for (std::size_t a = 0; a < fresh.size(); ++a)
        if (keep[a]) pending.push_back(std::move(fresh[a]));
}

// Normal selection strategy: minimal lcm degree first, ties broken by the
// monomial order and the generator indices for determinism.
template <typename R>
std::size_t select_pair(const std::vector<Pair>& pending, const MonomialOrder& order) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < pending.size(); ++k) {
        const Pair& a = pending[k];
        const Pair& b = pending[best];
        if (a.lcm.degree() != b.lcm.degree()) {
            if (a.lcm.degree() < b.lcm.degree()) best = k;
            continue;
        }
        int cmp = order.compare(a.lcm, b.lcm);
        if (cmp != 0) {
            if (cmp < 0) best = k;
            continue;
        }
        if (std::tie(a.j, a.i) < std::tie(b.j, b.i)) best = k;
    }
    return best;
}

template <typename R>
std::vector<Terms<R>> interreduce(const R& ring, const MonomialOrder& order,
                                  std::vector<Terms<R>> gens) {
    // Minimize: drop generators whose leading monomial is divisible by
    // another's.
    for (;;) {
        bool changed = false;
        for (std::size_t a = 0; a < gens.size() && !changed; ++a) {
            for (std::size_t b = 0; b < gens.size(); ++b) {
                if (a == b) continue;
                if (gens[b][0].mono.divides(gens[a][0].mono)) {
                    gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(a));
                    changed = true;
                    break;
                }
            }
        }
        if (!changed) break;
    }
    // Tail-reduce each against the others until stable.
    for (;;) {
        bool changed = false;
        for (std::size_t a = 0; a < gens.size(); ++a) {
            std::vector<Terms<R>> others;
            others.reserve(gens.size() - 1);
            for (std::size_t b = 0; b < gens.size(); ++b)
                if (b != a) others.push_back(gens[b]);
            Terms<R> red = reduce_full(ring, order, gens[a], others);
            make_monic(ring, red);
            if (!(red == gens[a])) {
                gens[a] = std::move(red);
                changed = true;
            }
        }
        if (!changed) break;
    }
    std::sort(gens.begin(), gens.end(),
              [&](const Terms<R>& x, const Terms<R>& y) { return order.less(x[0].mono, y[0].mono); });
    return gens;
}

}  // namespace

template <typename R>
Polynomial<R> s_polynomial(const Polynomial<R>& f, const Polynomial<R>& g, const MonomialOrder& order) {
    f.check_compatible(g);
    if (f.is_zero() || g.is_zero()) throw ArgumentError("S-polynomial of zero polynomial");
    const R& ring = f.ring();
    Terms<R> tf = to_ordered(f, order);
    Terms<R> tg = to_ordered(g, order);
    return from_ordered(f.context(), ring, s_poly_terms(ring, order, tf, tg));
}

template <typename R>
Polynomial<R> normal_form(const Polynomial<R>& p, const GroebnerBasis<R>& basis) {
    const R& ring = p.ring();
    std::vector<Terms<R>> gens;
    gens.reserve(basis.generators.size());
    for (const auto& g : basis.generators) {
        p.check_compatible(g);
        if (!g.is_zero()) gens.push_back(to_ordered(g, basis.order));
    }
    Terms<R> red = reduce_full(ring, basis.order, to_ordered(p, basis.order), gens);
    return from_ordered(p.context(), ring, std::move(red));
}

template <typename R>
GroebnerBasis<R> buchberger(const std::vector<Polynomial<R>>& generators, const MonomialOrder& order,
                            const GroebnerOptions& options) {
    if (generators.empty()) throw ArgumentError("buchberger requires a nonempty generator list");
    VarTablePtr ctx = generators.front().context();
    const R& ring = generators.front().ring();

    std::vector<Terms<R>> basis;
    std::vector<Pair> pending;
    std::uint64_t pops = 0;
    std::uint64_t steps = 0;

    auto add_element = [&](Terms<R> h) {
        make_monic(ring, h);
        basis.push_back(std::move(h));
        update_pairs<R>(pending, basis, static_cast<std::uint32_t>(basis.size() - 1));
        if (basis.size() > options.max_basis_size)
            throw BudgetError("Groebner basis size budget exceeded", pops, pending.size(), basis.size(),
                              steps);
    };

    for (const auto& g : generators) {
        generators.front().check_compatible(g);
        if (g.is_zero()) continue;
        Terms<R> t = reduce_full(ring, order, to_ordered(g, order), basis, &steps);
        if (!t.empty()) add_element(std::move(t));
    }
    if (basis.empty()) throw ArgumentError("buchberger requires at least one nonzero generator");

    while (!pending.empty()) {
        if (++pops > options.max_pair_reductions)
            throw BudgetError("Groebner S-pair budget exceeded", pops, pending.size(), basis.size(),
                              steps);
        std::size_t k = select_pair<R>(pending, order);
        Pair pr = std::move(pending[k]);
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(k));

        Terms<R> s = s_poly_terms(ring, order, basis[pr.i], basis[pr.j]);
        if (s.empty()) continue;
        Terms<R> h = reduce_full(ring, order, std::move(s), basis, &steps);
        if (!h.empty()) add_element(std::move(h));
    }

    GroebnerBasis<R> out;
    out.order = order;
    out.reduced = true;
    for (auto& g : interreduce(ring, order, std::move(basis)))
        out.generators.push_back(from_ordered(ctx, ring, std::move(g)));
    return out;
}

template <typename R>
bool satisfies_buchberger_criterion(const GroebnerBasis<R>& basis) {
    for (std::size_t i = 0; i < basis.generators.size(); ++i) {
        for (std::size_t j = i + 1; j < basis.generators.size(); ++j) {
            Polynomial<R> s = s_polynomial(basis.generators[i], basis.generators[j], basis.order);
            if (s.is_zero()) continue;
            if (!normal_form(s, basis).is_zero()) return false;
        }
    }
    return true;
}

template Polynomial<Rationals> s_polynomial(const Polynomial<Rationals>&, const Polynomial<Rationals>&,
                                            const MonomialOrder&);
template Polynomial<PrimeField> s_polynomial(const Polynomial<PrimeField>&, const Polynomial<PrimeField>&,
                                             const MonomialOrder&);
template Polynomial<Rationals> normal_form(const Polynomial<Rationals>&, const GroebnerBasis<Rationals>&);
template Polynomial<PrimeField> normal_form(const Polynomial<PrimeField>&,
                                            const GroebnerBasis<PrimeField>&);
template GroebnerBasis<Rationals> buchberger(const std::vector<Polynomial<Rationals>>&,
                                             const MonomialOrder&, const GroebnerOptions&);
template GroebnerBasis<PrimeField> buchberger(const std::vector<Polynomial<PrimeField>>&,
                                              const MonomialOrder&, const GroebnerOptions&);
template bool satisfies_buchberger_criterion(const GroebnerBasis<Rationals>&);
template bool satisfies_buchberger_criterion(const GroebnerBasis<PrimeField>&);

}  // namespace structid
