#pragma once

#include <cstdint>
#include <vector>

#include "structid/polynomial.hpp"

namespace structid {

struct GroebnerOptions {
    // Exceeding either cap raises BudgetError; the caller reports the run as
    // unresolved instead of guessing a label.
    std::uint64_t max_pair_reductions = 10'000'000;
    std::uint64_t max_basis_size = 50'000;
};

template <typename R>
struct GroebnerBasis {
    std::vector<Polynomial<R>> generators;
    MonomialOrder order = MonomialOrder::degrevlex();
    bool reduced = false;
};

// lcm-cancellation combination of f and g; the leading terms cancel.
template <typename R>
Polynomial<R> s_polynomial(const Polynomial<R>& f, const Polynomial<R>& g, const MonomialOrder& order);

// Full remainder of p under division by the basis: no monomial of the result
// is divisible by any leading monomial of the basis.
template <typename R>
Polynomial<R> normal_form(const Polynomial<R>& p, const GroebnerBasis<R>& basis);

// Buchberger's algorithm with the normal selection strategy and the
// Gebauer-Moeller product/chain pair elimination. Returns the reduced basis.
template <typename R>
GroebnerBasis<R> buchberger(const std::vector<Polynomial<R>>& generators, const MonomialOrder& order,
                            const GroebnerOptions& options = {});

// Post-hoc Buchberger criterion: every S-polynomial of basis pairs reduces
// to zero. Intended for verification on small bases.
template <typename R>
bool satisfies_buchberger_criterion(const GroebnerBasis<R>& basis);

using QGroebnerBasis = GroebnerBasis<Rationals>;
using FpGroebnerBasis = GroebnerBasis<PrimeField>;

}  // namespace structid
