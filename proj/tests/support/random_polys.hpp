#pragma once

#include <random>

#include "structid/polynomial.hpp"

namespace structid::testing {

// Random sparse polynomial over Q with small coefficients; shared by the
// property suites.
inline QPoly random_qpoly(std::mt19937_64& rng, const VarTablePtr& table, int max_degree, int max_terms,
                          std::size_t num_vars) {
    Rationals ring;
    std::uniform_int_distribution<int> n_terms(1, max_terms);
    std::uniform_int_distribution<int> coeff_num(-9, 9);
    std::uniform_int_distribution<int> coeff_den(1, 4);
    std::uniform_int_distribution<std::size_t> var_pick(0, num_vars - 1);
    std::uniform_int_distribution<int> exp_pick(0, max_degree);

    std::vector<QPoly::Term> terms;
    int count = n_terms(rng);
    for (int t = 0; t < count; ++t) {
        std::map<VarId, std::uint32_t> exps;
        int remaining = max_degree;
        int factors = std::uniform_int_distribution<int>(0, 3)(rng);
        for (int f = 0; f < factors && remaining > 0; ++f) {
            int e = exp_pick(rng) % (remaining + 1);
            if (e == 0) continue;
            exps[static_cast<VarId>(var_pick(rng))] += static_cast<std::uint32_t>(e);
            remaining -= e;
        }
        std::vector<Monomial::VarExp> entries;
        for (const auto& [v, e] : exps) entries.push_back({v, e});
        int num = coeff_num(rng);
        if (num == 0) num = 1;
        terms.push_back({Monomial::from_entries(std::move(entries)), rat(num, coeff_den(rng))});
    }
    return QPoly::from_terms(table, ring, std::move(terms));
}

inline Rat random_rat(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-12, 12);
    std::uniform_int_distribution<int> den(1, 6);
    return rat(num(rng), den(rng));
}

}  // namespace structid::testing
