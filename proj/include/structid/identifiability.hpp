#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "structid/groebner.hpp"
#include "structid/jets.hpp"

namespace structid {

enum class Label { GloballyIdentifiable, LocallyNotGlobally, NonIdentifiable, Unresolved };

// Wire token used in JSON reports and expected-label fixtures.
const char* label_token(Label label);
Label label_from_token(const std::string& token);

struct ProbabilityBudget {
    double requested_probability = 0.0;
    std::uint64_t events = 0;        // sampled coordinates plus one prime choice
    std::uint64_t degree_bound = 0;  // over system polynomials and Jacobian minors
    std::int64_t bound = 0;          // sampling bound M
    int input_jet_order = 0;         // highest input jet sampled
};

// ceil(events * degree_bound / (1 - probability)), computed exactly.
std::int64_t sampling_bound(double probability, std::uint64_t events, std::uint64_t degree_bound);

// Budget for one randomized phase at the given per-phase probability.
ProbabilityBudget probability_budget(double probability, const Model& m, const std::vector<int>& orders);

struct SamplePoint {
    std::map<VarId, Rat> values;  // jet-space ids: unknowns and input jets
    std::uint64_t seed = 0;
    std::int64_t bound = 0;
};

// Integers uniform in [1, M], resampled (bounded retries) while any
// denominator base vanishes; deterministic for a fixed seed.
SamplePoint sample_point(const JetEngine& engine, const ProbabilityBudget& budget, std::uint64_t seed);

struct LocalResult {
    std::vector<bool> flags;  // locally identifiable, indexed by unknown id
    std::vector<int> orders;  // per-output orders for the global phase
    int rank = 0;
    int raised_to = 0;        // highest prolongation order evaluated
    bool ambiguous = false;   // rank still growing at the ceiling
    std::uint64_t prime = 0;
    SamplePoint point;
    ProbabilityBudget budget;
};

// Jacobian-rank test of all output jets with respect to the unknowns at a
// random point over a random prime field. The jet order is raised from 0
// until the rank stabilizes across one full extra order (ceiling:
// #unknowns + 1), then per-output orders are trimmed to the smallest
// rank-preserving set and one extra order is kept for the global phase.
LocalResult local_classification(JetEngine& engine, std::uint64_t seed, double phase_probability,
                                 int ceiling);

struct AnalysisOptions {
    double probability = 0.99;
    std::uint64_t seed = 0;
    int max_order = -1;  // override of the prolongation ceiling; -1 = default
    GroebnerOptions groebner;
    int jobs = 1;
};

struct IdentifiabilityReport {
    std::string model;
    double probability = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t local_prime = 0;
    std::uint64_t global_prime = 0;
    std::vector<std::pair<std::string, Label>> labels;  // params, then "<state>*"
    std::vector<std::pair<std::string, int>> orders;    // per output
    ProbabilityBudget local_budget;
    ProbabilityBudget global_budget;
    int jacobian_rank = 0;
    double local_seconds = 0.0;
    double global_seconds = 0.0;
    bool groebner_budget_exceeded = false;
    std::uint64_t groebner_pairs_processed = 0;
    std::uint64_t groebner_basis_size = 0;

    bool has_unresolved() const {
        for (const auto& [name, label] : labels)
            if (label == Label::Unresolved) return true;
        return false;
    }

    Label label_of(const std::string& unknown) const;
};

// Full pipeline: local classification, exact specialization, truncated
// system, Groebner normal-form test. Labels are correct with probability at
// least opts.probability; resource-capped runs surface as Unresolved labels
// rather than guesses.
IdentifiabilityReport global_classification(const Model& m, const AnalysisOptions& opts = {});

}  // namespace structid
