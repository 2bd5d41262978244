#pragma once

#include <vector>

#include "structid/polynomial.hpp"

namespace structid::testing {

// Brute-force ideal membership by linear algebra in a truncated monomial
// basis: q lies in the span of { m * g_j : deg(m * g_j) <= degree_cap }
// over F_p. Complete for toy ideals once degree_cap comfortably exceeds the
// degrees reachable in their reduction chains; independent of the Groebner
// engine.
inline bool membership_by_linear_algebra(const FpPoly& q, const std::vector<FpPoly>& generators,
                                         int degree_cap) {
    const PrimeField F = q.ring();
    const VarTablePtr table = q.context();
    std::size_t nvars = table->size();

    // Enumerate all monomials of total degree <= degree_cap.
    std::vector<Monomial> monomials;
    std::vector<std::uint32_t> exps(nvars, 0);
    auto emit = [&]() {
        std::vector<Monomial::VarExp> entries;
        for (std::size_t v = 0; v < nvars; ++v)
            if (exps[v] > 0) entries.push_back({static_cast<VarId>(v), exps[v]});
        monomials.push_back(Monomial::from_entries(std::move(entries)));
    };
    // Odometer over exponent vectors with bounded total degree.
    for (;;) {
        emit();
        std::size_t v = 0;
        bool done = false;
        for (;;) {
            ++exps[v];
            int t = 0;
            for (auto e : exps) t += static_cast<int>(e);
            if (t <= degree_cap) break;
            exps[v] = 0;
            ++v;
            if (v == nvars) {
                done = true;
                break;
            }
        }
        if (done) break;
    }

    // Index monomials for row vectors.
    auto index_of = [&](const Monomial& m) -> std::size_t {
        for (std::size_t i = 0; i < monomials.size(); ++i)
            if (monomials[i] == m) return i;
        return SIZE_MAX;
    };

    std::vector<std::vector<std::uint64_t>> rows;
    for (const auto& g : generators) {
        for (const auto& m : monomials) {
            FpPoly shifted = g.shifted(m);
            if (shifted.degree() > degree_cap) continue;
            std::vector<std::uint64_t> row(monomials.size(), 0);
            for (const auto& t : shifted.terms()) {
                std::size_t idx = index_of(t.mono);
                if (idx == SIZE_MAX) return false;  // cannot happen within cap
                row[idx] = t.coeff;
            }
            rows.push_back(std::move(row));
        }
    }

    std::vector<std::uint64_t> target(monomials.size(), 0);
    for (const auto& t : q.terms()) {
        std::size_t idx = index_of(t.mono);
        if (idx == SIZE_MAX) return false;
        target[idx] = t.coeff;
    }

    // Gaussian elimination: is target in the row span?
    std::size_t cols = monomials.size();
    std::size_t rank_rows = 0;
    for (std::size_t c = 0; c < cols && rank_rows < rows.size(); ++c) {
        std::size_t pivot = SIZE_MAX;
        for (std::size_t r = rank_rows; r < rows.size(); ++r)
            if (rows[r][c] != 0) {
                pivot = r;
                break;
            }
        if (pivot == SIZE_MAX) continue;
        std::swap(rows[rank_rows], rows[pivot]);
        std::uint64_t inv = F.inv(rows[rank_rows][c]);
        for (std::size_t k = 0; k < cols; ++k) rows[rank_rows][k] = F.mul(rows[rank_rows][k], inv);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank_rows || rows[r][c] == 0) continue;
            std::uint64_t f = rows[r][c];
            for (std::size_t k = 0; k < cols; ++k)
                rows[r][k] = F.sub(rows[r][k], F.mul(f, rows[rank_rows][k]));
        }
        if (target[c] != 0) {
            std::uint64_t f = target[c];
            for (std::size_t k = 0; k < cols; ++k)
                target[k] = F.sub(target[k], F.mul(f, rows[rank_rows][k]));
        }
        ++rank_rows;
    }
    for (std::uint64_t v : target)
        if (v != 0) return false;
    return true;
}

}  // namespace structid::testing
