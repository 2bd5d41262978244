#pragma once

#include <map>
#include <vector>

#include "structid/model.hpp"

namespace structid {

// Symbol universe for prolongation: the model's states (read as their
// initial values once everything is specialized at t = 0), its parameters,
// input jet symbols u^(k)(0) up to a fixed order, and one saturation
// variable enforcing that no denominator vanishes. Ids 0..num_unknowns()-1
// are exactly the unknowns (states first, parameters second), matching the
// model table.
class JetSpace {
  public:
    JetSpace(const Model& m, int max_input_order);

    const VarTablePtr& table() const { return table_; }
    const Model& model() const { return *model_; }

    std::size_t num_states() const { return model_->num_states(); }
    std::size_t num_params() const { return model_->num_params(); }
    std::size_t num_unknowns() const { return model_->num_unknowns(); }
    int max_input_order() const { return max_input_order_; }

    VarId state_var(std::size_t i) const { return static_cast<VarId>(i); }
    VarId param_var(std::size_t i) const { return static_cast<VarId>(num_states() + i); }
    VarId input_jet(std::size_t input, int order) const;
    VarId saturation_var() const { return static_cast<VarId>(table_->size() - 1); }

    bool is_input_jet(VarId v) const { return v >= num_unknowns() && v != saturation_var(); }

    // Maps an expression over the model's table (states, params, inputs)
    // into this universe; a plain input symbol becomes its order-0 jet.
    QPoly to_jet_space(const QPoly& p) const;
    RationalFunction to_jet_space(const RationalFunction& e) const;

  private:
    const Model* model_;
    VarTablePtr table_;
    int max_input_order_;
};

// A quotient whose denominator is a power product of registered base
// polynomials. Every denominator reachable by Lie differentiation factors
// over the registry, so reduction is trial division against known bases.
struct JetFraction {
    QPoly num;
    std::vector<std::uint32_t> den;  // exponent per registry base
};

// Polynomial system tying output jets at sampled values to the unknowns:
// numerator(L^k g_i) - yhat_{i,k} * denominator(L^k g_i) for every retained
// order, plus the saturation equation z * (product of distinct denominator
// bases) - 1. Equations are scaled integer-primitive.
struct TruncatedSystem {
    std::vector<QPoly> equations;
    QPoly denominator_product;
    std::vector<int> order_per_output;
    VarId saturation_var = 0;
};

class JetEngine {
  public:
    JetEngine(const Model& m, int max_input_order);

    const JetSpace& space() const { return space_; }
    const Model& model() const { return space_.model(); }

    std::size_t num_bases() const { return bases_.size(); }
    const QPoly& base(std::size_t k) const { return bases_[k]; }

    // L^order of output i, cached; order 0 is the output expression itself.
    const JetFraction& output_jet(std::size_t output, int order);

    // Highest order already cached for an output.
    int cached_order(std::size_t output) const {
        return static_cast<int>(jets_[output].size()) - 1;
    }

    // Lie derivative along the system of an expression over the jet
    // universe (without the saturation variable).
    RationalFunction lie_derivative(const RationalFunction& e) const;

    JetFraction lie(const JetFraction& f);

    // Full jet list L^k g_i for k = 0..orders[i], output-major, normalized.
    std::vector<RationalFunction> prolong_outputs(const std::vector<int>& orders);

    RationalFunction to_rational_function(const JetFraction& f) const;

    // Exact value at a full rational point (unknowns and input jets).
    Rat evaluate_jet(const JetFraction& f, const std::map<VarId, Rat>& point) const;

    // True iff every registry base is nonzero at the point.
    bool denominators_nonzero_at(const std::map<VarId, Rat>& point) const;

    TruncatedSystem build_truncated_system(const std::vector<int>& orders,
                                           const std::vector<std::vector<Rat>>& yhat,
                                           const std::map<VarId, Rat>& input_jet_values);

    QPoly expand_denominator(const std::vector<std::uint32_t>& exps) const;

  private:
    JetFraction frac_zero() const;
    JetFraction frac_from_poly(QPoly p) const;
    JetFraction frac_add(const JetFraction& a, const JetFraction& b) const;
    JetFraction frac_mul_poly(const JetFraction& a, const QPoly& p) const;
    void frac_reduce(JetFraction& f) const;
    JetFraction lie_poly(const QPoly& p) const;

    // Registers the primitive part and returns (index, scale factor applied
    // to reach it); index is SIZE_MAX for constant denominators.
    std::pair<std::size_t, Rat> register_base(const QPoly& den);

    JetSpace space_;
    Rationals ring_;
    std::vector<QPoly> bases_;
    std::vector<JetFraction> rhs_;        // per state, over the jet universe
    std::vector<JetFraction> lie_bases_;  // L of each base, cached
    std::vector<JetFraction> outputs_;    // order-0 jets
    std::vector<std::vector<JetFraction>> jets_;
    mutable std::vector<std::vector<QPoly>> base_powers_;  // base_powers_[k][e] = base_k^e
};

// Convenience form of the Lie derivative against a fresh engine.
RationalFunction lie_derivative(const Model& m, const RationalFunction& e_model_space);

}  // namespace structid
