#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace structid {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Mixing values from different variable contexts or coefficient domains.
struct ContextError : Error {
    using Error::Error;
};

// Division by a zero polynomial or zero field element.
struct DivisionError : Error {
    using Error::Error;
};

// A rational coefficient has a denominator divisible by the active prime.
// The caller is expected to retry with a fresh prime.
struct BadPrimeError : Error {
    using Error::Error;
};

// An evaluation point does not cover every variable of the polynomial.
struct IncompletePointError : Error {
    using Error::Error;
};

struct ArgumentError : Error {
    using Error::Error;
};

// Resampling retries exhausted: every sampled point hit a vanishing
// denominator, which indicates a structurally degenerate model.
struct DegenerateModelError : Error {
    using Error::Error;
};

// A specialization value was requested for an expression whose denominator
// vanishes identically at the sample point.
struct SpecializationError : Error {
    using Error::Error;
};

// Gröbner run exceeded its configured resource budget.
struct BudgetError : Error {
    std::uint64_t pairs_processed = 0;
    std::uint64_t pairs_pending = 0;
    std::uint64_t basis_size = 0;
    std::uint64_t reduction_steps = 0;

    BudgetError(const std::string& what, std::uint64_t processed, std::uint64_t pending,
                std::uint64_t basis, std::uint64_t reductions)
        : Error(what),
          pairs_processed(processed),
          pairs_pending(pending),
          basis_size(basis),
          reduction_steps(reductions) {}
};

// Malformed expected-label fixture in the benchmark corpus.
struct FixtureError : Error {
    using Error::Error;
};

}  // namespace structid
