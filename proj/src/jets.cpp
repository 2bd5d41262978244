#include "structid/jets.hpp"

#include <algorithm>

#include "structid/errors.hpp"

namespace structid {

JetSpace::JetSpace(const Model& m, int max_input_order)
    : model_(&m), max_input_order_(max_input_order) {
    std::vector<std::string> names;
    for (VarId s : m.states) names.push_back(m.table->name(s));
    for (VarId p : m.params) names.push_back(m.table->name(p));
    for (VarId u : m.inputs)
        for (int k = 0; k <= max_input_order_; ++k)
            names.push_back(m.table->name(u) + "^(" + std::to_string(k) + ")");
    names.push_back("#z");
    table_ = VarTable::make(std::move(names));
}

VarId JetSpace::input_jet(std::size_t input, int order) const {
    if (order > max_input_order_) throw ArgumentError("input jet order exceeds the configured bound");
    return static_cast<VarId>(num_unknowns() + input * (max_input_order_ + 1) +
                              static_cast<std::size_t>(order));
}

QPoly JetSpace::to_jet_space(const QPoly& p) const {
    std::vector<QPoly::Term> terms;
    terms.reserve(p.terms().size());
    std::size_t n_model_vars = num_unknowns();  // states and params keep their ids
    for (const auto& t : p.terms()) {
        std::vector<Monomial::VarExp> entries;
        for (const auto& ve : t.mono.entries()) {
            if (ve.var < n_model_vars) {
                entries.push_back({ve.var, ve.exp});
            } else {
                std::size_t input_index = ve.var - n_model_vars;
                entries.push_back({input_jet(input_index, 0), ve.exp});
            }
        }
        terms.push_back({Monomial::from_entries(std::move(entries)), t.coeff});
    }
    return QPoly::from_terms(table_, Rationals{}, std::move(terms));
}

RationalFunction JetSpace::to_jet_space(const RationalFunction& e) const {
    return RationalFunction::normalized(to_jet_space(e.numerator()), to_jet_space(e.denominator()));
}

JetEngine::JetEngine(const Model& m, int max_input_order) : space_(m, max_input_order) {
    // Register every distinct primitive denominator first; Lie derivatives
    // introduce no bases beyond these.
    std::vector<std::pair<std::size_t, Rat>> rhs_base;
    for (const auto& f : m.rhs) rhs_base.push_back(register_base(space_.to_jet_space(f.denominator())));
    std::vector<std::pair<std::size_t, Rat>> out_base;
    for (const auto& o : m.outputs)
        out_base.push_back(register_base(space_.to_jet_space(o.expr.denominator())));

    base_powers_.resize(bases_.size());

    // register_base yields (index, s) with num/den == (num * s) / base.
    auto make_frac = [&](const QPoly& num_model, const std::pair<std::size_t, Rat>& base) {
        JetFraction f;
        f.den.assign(bases_.size(), 0);
        f.num = space_.to_jet_space(num_model).scaled(base.second);
        if (base.first != SIZE_MAX) f.den[base.first] = 1;
        return f;
    };
    for (std::size_t j = 0; j < m.rhs.size(); ++j)
        rhs_.push_back(make_frac(m.rhs[j].numerator(), rhs_base[j]));
    for (std::size_t i = 0; i < m.outputs.size(); ++i)
        outputs_.push_back(make_frac(m.outputs[i].expr.numerator(), out_base[i]));

    for (const auto& b : bases_) lie_bases_.push_back(lie_poly(b));

    jets_.resize(m.outputs.size());
    for (std::size_t i = 0; i < m.outputs.size(); ++i) jets_[i].push_back(outputs_[i]);
}

std::pair<std::size_t, Rat> JetEngine::register_base(const QPoly& den) {
    auto [prim, factor] = integer_primitive(den);
    // prim = den * factor, hence num/den = (num * factor) / prim.
    if (prim.is_constant()) {
        // den itself is a constant; fold it entirely into the numerator.
        return {SIZE_MAX, Rationals{}.div(Rat(1), den.constant_value())};
    }
    for (std::size_t k = 0; k < bases_.size(); ++k)
        if (bases_[k] == prim) return {k, factor};
    bases_.push_back(prim);
    return {bases_.size() - 1, factor};
}

JetFraction JetEngine::frac_zero() const {
    JetFraction f;
    f.num = QPoly::zero(space_.table(), ring_);
    f.den.assign(bases_.size(), 0);
    return f;
}

JetFraction JetEngine::frac_from_poly(QPoly p) const {
    JetFraction f;
    f.num = std::move(p);
    f.den.assign(bases_.size(), 0);
    return f;
}

QPoly JetEngine::expand_denominator(const std::vector<std::uint32_t>& exps) const {
    QPoly acc = QPoly::constant(space_.table(), ring_, Rat(1));
    for (std::size_t k = 0; k < exps.size(); ++k) {
        if (exps[k] == 0) continue;
        auto& cache = base_powers_[k];
        if (cache.empty()) cache.push_back(QPoly::constant(space_.table(), ring_, Rat(1)));
        while (cache.size() <= exps[k]) cache.push_back(cache.back() * bases_[k]);
        acc = acc * cache[exps[k]];
    }
    return acc;
}

JetFraction JetEngine::frac_add(const JetFraction& a, const JetFraction& b) const {
    JetFraction r;
    r.den.resize(bases_.size());
    std::vector<std::uint32_t> comp_a(bases_.size()), comp_b(bases_.size());
    for (std::size_t k = 0; k < bases_.size(); ++k) {
        r.den[k] = std::max(a.den[k], b.den[k]);
        comp_a[k] = r.den[k] - a.den[k];
        comp_b[k] = r.den[k] - b.den[k];
    }
    r.num = a.num * expand_denominator(comp_a) + b.num * expand_denominator(comp_b);
    return r;
}

JetFraction JetEngine::frac_mul_poly(const JetFraction& a, const QPoly& p) const {
    JetFraction r;
    r.num = a.num * p;
    r.den = a.den;
    return r;
}

void JetEngine::frac_reduce(JetFraction& f) const {
    if (f.num.is_zero()) {
        std::fill(f.den.begin(), f.den.end(), 0);
        return;
    }
    for (std::size_t k = 0; k < f.den.size(); ++k) {
        while (f.den[k] > 0) {
            auto q = try_divide(f.num, bases_[k]);
            if (!q) break;
            f.num = std::move(*q);
            --f.den[k];
        }
    }
}

JetFraction JetEngine::lie_poly(const QPoly& p) const {
    JetFraction acc = frac_zero();
    for (std::size_t j = 0; j < space_.num_states(); ++j) {
        QPoly dp = p.derivative(space_.state_var(j));
        if (dp.is_zero()) continue;
        acc = frac_add(acc, frac_mul_poly(rhs_[j], dp));
    }
    const Model& m = space_.model();
    for (std::size_t i = 0; i < m.num_inputs(); ++i) {
        for (int k = 0; k < space_.max_input_order(); ++k) {
            QPoly dp = p.derivative(space_.input_jet(i, k));
            if (dp.is_zero()) continue;
            QPoly next = QPoly::variable(space_.table(), ring_, space_.input_jet(i, k + 1));
            acc = frac_add(acc, frac_from_poly(dp * next));
        }
        // The top-order jet must never be differentiated; the universe is
        // sized so prolongation stays strictly below it.
        if (!p.derivative(space_.input_jet(i, space_.max_input_order())).is_zero())
            throw ArgumentError("expression reaches the top input jet order; enlarge the universe");
    }
    return acc;
}

JetFraction JetEngine::lie(const JetFraction& f) {
    JetFraction result = lie_poly(f.num);
    for (std::size_t k = 0; k < f.den.size(); ++k) {
        if (f.den[k] == 0) continue;
        // d(B^-e) contributes -e * num * L(B) / B^(e+1); the shared prefix
        // B^e is divided out at the end together with result's own factor.
        JetFraction t = frac_mul_poly(lie_bases_[k], f.num.scaled(Rat(-static_cast<long>(f.den[k]))));
        ++t.den[k];
        result = frac_add(result, t);
    }
    for (std::size_t k = 0; k < f.den.size(); ++k) result.den[k] += f.den[k];
    frac_reduce(result);
    return result;
}

const JetFraction& JetEngine::output_jet(std::size_t output, int order) {
    auto& cache = jets_[output];
    while (static_cast<int>(cache.size()) <= order) {
        JetFraction next = lie(cache.back());
        cache.push_back(std::move(next));
    }
    return cache[static_cast<std::size_t>(order)];
}

RationalFunction JetEngine::to_rational_function(const JetFraction& f) const {
    return RationalFunction::normalized(f.num, expand_denominator(f.den));
}

RationalFunction JetEngine::lie_derivative(const RationalFunction& e) const {
    // Quotient rule over plain rational-function arithmetic; independent of
    // the registry-backed fast path used for cached jets.
    auto lie_of_poly = [&](const QPoly& p) {
        RationalFunction acc =
            RationalFunction::from_polynomial(QPoly::zero(space_.table(), ring_));
        for (std::size_t j = 0; j < space_.num_states(); ++j) {
            QPoly dp = p.derivative(space_.state_var(j));
            if (dp.is_zero()) continue;
            acc = acc + RationalFunction::from_polynomial(dp) * to_rational_function(rhs_[j]);
        }
        for (std::size_t i = 0; i < space_.model().num_inputs(); ++i) {
            for (int k = 0; k < space_.max_input_order(); ++k) {
                QPoly dp = p.derivative(space_.input_jet(i, k));
                if (dp.is_zero()) continue;
                QPoly next = QPoly::variable(space_.table(), ring_, space_.input_jet(i, k + 1));
                acc = acc + RationalFunction::from_polynomial(dp * next);
            }
        }
        return acc;
    };
    RationalFunction n = RationalFunction::from_polynomial(e.numerator());
    RationalFunction d = RationalFunction::from_polynomial(e.denominator());
    RationalFunction dn = lie_of_poly(e.numerator());
    RationalFunction dd = lie_of_poly(e.denominator());
    return (dn * d - n * dd) / (d * d);
}

std::vector<RationalFunction> JetEngine::prolong_outputs(const std::vector<int>& orders) {
    if (orders.size() != jets_.size()) throw ArgumentError("one order per output expected");
    std::vector<RationalFunction> out;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] < 0) throw ArgumentError("jet order must be nonnegative");
        for (int k = 0; k <= orders[i]; ++k) out.push_back(to_rational_function(output_jet(i, k)));
    }
    return out;
}

Rat JetEngine::evaluate_jet(const JetFraction& f, const std::map<VarId, Rat>& point) const {
    Rat den(1);
    for (std::size_t k = 0; k < f.den.size(); ++k) {
        if (f.den[k] == 0) continue;
        Rat b = bases_[k].evaluate(point);
        if (b == 0) throw SpecializationError("jet denominator vanishes at the sample point");
        for (std::uint32_t e = 0; e < f.den[k]; ++e) den *= b;
    }
    return f.num.evaluate(point) / den;
}

bool JetEngine::denominators_nonzero_at(const std::map<VarId, Rat>& point) const {
    for (const auto& b : bases_)
        if (b.evaluate(point) == 0) return false;
    return true;
}

TruncatedSystem JetEngine::build_truncated_system(const std::vector<int>& orders,
                                                  const std::vector<std::vector<Rat>>& yhat,
                                                  const std::map<VarId, Rat>& input_jet_values) {
    if (orders.size() != jets_.size() || yhat.size() != jets_.size())
        throw ArgumentError("orders and yhat must cover every output");

    auto substitute_inputs = [&](QPoly p) {
        for (const auto& [var, value] : input_jet_values) p = p.substitute(var, value);
        return p;
    };

    TruncatedSystem system;
    system.order_per_output = orders;
    system.saturation_var = space_.saturation_var();

    std::vector<QPoly> bases_sub;
    for (const auto& b : bases_) {
        QPoly s = substitute_inputs(b);
        if (s.is_zero())
            throw SpecializationError("denominator base vanishes identically at the input values");
        bases_sub.push_back(integer_primitive(s).first);
    }

    for (std::size_t i = 0; i < jets_.size(); ++i) {
        if (static_cast<int>(yhat[i].size()) <= orders[i])
            throw ArgumentError("yhat misses jet values for output " + std::to_string(i));
        for (int k = 0; k <= orders[i]; ++k) {
            const JetFraction& jet = output_jet(i, k);
            QPoly num = substitute_inputs(jet.num);
            QPoly den = substitute_inputs(expand_denominator(jet.den));
            if (den.is_zero())
                throw SpecializationError("jet denominator vanishes identically at the input values");
            QPoly eq = num - den.scaled(yhat[i][static_cast<std::size_t>(k)]);
            if (eq.is_zero()) continue;
            system.equations.push_back(integer_primitive(eq).first);
        }
    }

    // Saturation: z times the product of the distinct denominator bases.
    QPoly product = QPoly::constant(space_.table(), ring_, Rat(1));
    std::vector<QPoly> seen;
    for (const auto& b : bases_sub) {
        bool dup = false;
        for (const auto& s : seen) dup = dup || s == b;
        if (dup || b.is_constant()) continue;
        seen.push_back(b);
        product = product * b;
    }
    system.denominator_product = product;
    QPoly z = QPoly::variable(space_.table(), ring_, space_.saturation_var());
    system.equations.push_back(
        integer_primitive(z * product - QPoly::constant(space_.table(), ring_, Rat(1))).first);
    return system;
}

RationalFunction lie_derivative(const Model& m, const RationalFunction& e_model_space) {
    JetEngine engine(m, 1);
    return engine.lie_derivative(engine.space().to_jet_space(e_model_space));
}

}  // namespace structid
