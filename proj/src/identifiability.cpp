#include "structid/identifiability.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <thread>

#include "structid/errors.hpp"

namespace structid {

namespace {

constexpr std::uint64_t kPointSalt = 0x9e3779b97f4a7c15ull;
constexpr std::uint64_t kPrimeSalt = 0xc2b2ae3d27d4eb4full;
constexpr std::uint64_t kGlobalSalt = 0x165667b19e3779f9ull;
constexpr int kMaxPointRetries = 64;
constexpr int kMaxPrimeRetries = 32;

std::uint64_t uniform_u64(std::mt19937_64& rng, std::uint64_t range) {
    // Rejection sampling; unbiased and platform-independent.
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % range;
}

double phase_probability(double p) { return 1.0 - (1.0 - p) / 2.0; }

// --- dense linear algebra over F_p ---

using FpRow = std::vector<std::uint64_t>;

int fp_rank(const PrimeField& F, std::vector<FpRow> rows) {
    if (rows.empty()) return 0;
    std::size_t cols = rows[0].size();
    int rank = 0;
    for (std::size_t c = 0; c < cols; ++c) {
        std::size_t pivot = SIZE_MAX;
        for (std::size_t r = static_cast<std::size_t>(rank); r < rows.size(); ++r) {
            if (rows[r][c] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot == SIZE_MAX) continue;
        std::swap(rows[static_cast<std::size_t>(rank)], rows[pivot]);
        FpRow& pr = rows[static_cast<std::size_t>(rank)];
        std::uint64_t inv = F.inv(pr[c]);
        for (std::size_t k = c; k < cols; ++k) pr[k] = F.mul(pr[k], inv);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == static_cast<std::size_t>(rank) || rows[r][c] == 0) continue;
            std::uint64_t f = rows[r][c];
            for (std::size_t k = c; k < cols; ++k) rows[r][k] = F.sub(rows[r][k], F.mul(f, pr[k]));
        }
        ++rank;
        if (static_cast<std::size_t>(rank) == rows.size()) break;
    }
    return rank;
}

// Reduced row echelon form; returns pivot row per column (-1 when free).
std::vector<int> fp_rref(const PrimeField& F, std::vector<FpRow>& rows, std::size_t cols) {
    std::vector<int> pivot_row(cols, -1);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t pivot = SIZE_MAX;
        for (std::size_t r = rank; r < rows.size(); ++r) {
            if (rows[r][c] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot == SIZE_MAX) continue;
        std::swap(rows[rank], rows[pivot]);
        FpRow& pr = rows[rank];
        std::uint64_t inv = F.inv(pr[c]);
        for (std::size_t k = 0; k < cols; ++k) pr[k] = F.mul(pr[k], inv);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][c] == 0) continue;
            std::uint64_t f = rows[r][c];
            for (std::size_t k = 0; k < cols; ++k) rows[r][k] = F.sub(rows[r][k], F.mul(f, pr[k]));
        }
        pivot_row[c] = static_cast<int>(rank);
        ++rank;
    }
    return pivot_row;
}

// --- forward-mode jet evaluation over F_p ---

struct GradVal {
    std::uint64_t v = 0;
    FpRow g;  // gradient over the unknowns
};

GradVal grad_mul(const PrimeField& F, const GradVal& a, const GradVal& b) {
    GradVal r;
    r.v = F.mul(a.v, b.v);
    r.g.resize(a.g.size());
    for (std::size_t i = 0; i < a.g.size(); ++i)
        r.g[i] = F.add(F.mul(a.v, b.g[i]), F.mul(b.v, a.g[i]));
    return r;
}

// Value and gradient of a polynomial at a dense point whose first `ngrad`
// coordinates are the differentiation variables. All point coordinates are
// nonzero mod p (they are integers in [1, M] with M << p).
GradVal eval_gradient(const PrimeField& F, const FpPoly& poly, const FpRow& point, const FpRow& inv_point,
                      std::size_t ngrad) {
    GradVal out;
    out.g.assign(ngrad, 0);
    for (const auto& t : poly.terms()) {
        std::uint64_t tv = t.coeff;
        for (const auto& ve : t.mono.entries()) {
            std::uint64_t base = point[ve.var];
            for (std::uint32_t e = 0; e < ve.exp; ++e) tv = F.mul(tv, base);
        }
        out.v = F.add(out.v, tv);
        for (const auto& ve : t.mono.entries()) {
            if (ve.var >= ngrad) continue;
            std::uint64_t d = F.mul(F.mul(tv, ve.exp % F.p), inv_point[ve.var]);
            out.g[ve.var] = F.add(out.g[ve.var], d);
        }
    }
    return out;
}

// Modular reductions of the jets of one prime; numerators are reduced on
// demand and cached.
struct FpJetCache {
    PrimeField F;
    std::vector<FpPoly> bases;
    std::vector<std::vector<FpPoly>> nums;

    FpJetCache(const PrimeField& field, const JetEngine& engine) : F(field) {
        for (std::size_t k = 0; k < engine.num_bases(); ++k)
            bases.push_back(reduce_mod_prime(engine.base(k), F));
        nums.resize(engine.model().outputs.size());
    }

    const FpPoly& num(JetEngine& engine, std::size_t output, int order) {
        auto& cache = nums[output];
        while (static_cast<int>(cache.size()) <= order) {
            int next = static_cast<int>(cache.size());
            cache.push_back(reduce_mod_prime(engine.output_jet(output, next).num, F));
        }
        return cache[static_cast<std::size_t>(order)];
    }
};

// Gradient row of one jet L^order g_i with respect to the unknowns.
FpRow jet_gradient_row(const PrimeField& F, FpJetCache& cache, JetEngine& engine, std::size_t output,
                       int order, const FpRow& point, const FpRow& inv_point,
                       std::vector<GradVal>& base_vals) {
    std::size_t ngrad = engine.space().num_unknowns();
    if (base_vals.empty()) {
        for (std::size_t k = 0; k < cache.bases.size(); ++k)
            base_vals.push_back(eval_gradient(F, cache.bases[k], point, inv_point, ngrad));
    }
    GradVal num = eval_gradient(F, cache.num(engine, output, order), point, inv_point, ngrad);
    const auto& exps = engine.output_jet(output, order).den;
    GradVal den;
    den.v = 1;
    den.g.assign(ngrad, 0);
    for (std::size_t k = 0; k < exps.size(); ++k)
        for (std::uint32_t e = 0; e < exps[k]; ++e) den = grad_mul(F, den, base_vals[k]);
    if (den.v == 0) throw BadPrimeError("jet denominator vanished mod p");
    // grad(n/d) = (grad n - (n/d) grad d) / d
    std::uint64_t inv_d = F.inv(den.v);
    std::uint64_t h = F.mul(num.v, inv_d);
    FpRow row(ngrad);
    for (std::size_t i = 0; i < ngrad; ++i)
        row[i] = F.mul(F.sub(num.g[i], F.mul(h, den.g[i])), inv_d);
    return row;
}

FpRow dense_point(const JetEngine& engine, const SamplePoint& point, const PrimeField& F) {
    FpRow dense(engine.space().table()->size(), 1);
    for (const auto& [var, value] : point.values) dense[var] = F.from_rational(value);
    return dense;
}

}  // namespace

const char* label_token(Label label) {
    switch (label) {
        case Label::GloballyIdentifiable:
            return "global";
        case Label::LocallyNotGlobally:
            return "local";
        case Label::NonIdentifiable:
            return "none";
        case Label::Unresolved:
            return "unresolved";
    }
    return "unresolved";
}

Label label_from_token(const std::string& token) {
    if (token == "global") return Label::GloballyIdentifiable;
    if (token == "local") return Label::LocallyNotGlobally;
    if (token == "none") return Label::NonIdentifiable;
    if (token == "unresolved") return Label::Unresolved;
    throw ArgumentError("unknown label token '" + token + "'");
}

std::int64_t sampling_bound(double probability, std::uint64_t events, std::uint64_t degree_bound) {
    if (!(probability > 0.0 && probability < 1.0))
        throw ArgumentError("probability must lie strictly between 0 and 1");
    Rat failure = Rat(1) - Rat(probability);  // exact value of the double
    Rat target = Rat(Int(events) * Int(degree_bound)) / failure;
    Int bound = target.get_num() / target.get_den();
    if (Rat(bound) < target) bound += 1;  // ceiling
    if (!bound.fits_slong_p() || bound > Int(INT64_C(1) << 62))
        throw ArgumentError("sampling bound is not exactly representable");
    std::int64_t m = static_cast<std::int64_t>(bound.get_si());
    return std::max<std::int64_t>(m, 1);
}

ProbabilityBudget probability_budget(double probability, const Model& m, const std::vector<int>& orders) {
    if (!(probability > 0.0 && probability < 1.0))
        throw ArgumentError("probability must lie strictly between 0 and 1");
    if (orders.size() != m.outputs.size()) throw ArgumentError("one jet order per output expected");

    int max_order = 0;
    for (int d : orders) {
        if (d < 0) throw ArgumentError("jet orders must be nonnegative");
        max_order = std::max(max_order, d);
    }

    // Conservative per-step degree growth: one Lie step multiplies by a
    // right-hand side numerator and by the registry denominator product.
    std::vector<QPoly> distinct;
    auto note_base = [&](const QPoly& den) {
        QPoly prim = integer_primitive(den).first;
        if (prim.is_constant()) return;
        for (const auto& b : distinct)
            if (b == prim) return;
        distinct.push_back(prim);
    };
    for (const auto& f : m.rhs) note_base(f.denominator());
    for (const auto& o : m.outputs) note_base(o.expr.denominator());
    std::uint64_t registry_degree = 0;
    for (const auto& b : distinct) registry_degree += static_cast<std::uint64_t>(b.degree());

    std::uint64_t step = 1;
    for (const auto& f : m.rhs) {
        std::uint64_t d = static_cast<std::uint64_t>(std::max(f.numerator().degree(), 0) +
                                                     std::max(f.denominator().degree(), 0));
        step = std::max(step, d);
    }
    step += registry_degree;

    std::uint64_t eq_degree = 1 + registry_degree;  // saturation equation
    for (std::size_t i = 0; i < m.outputs.size(); ++i) {
        std::uint64_t base = static_cast<std::uint64_t>(std::max(
            {m.outputs[i].expr.numerator().degree(), m.outputs[i].expr.denominator().degree(), 1}));
        eq_degree = std::max(eq_degree, base + static_cast<std::uint64_t>(orders[i]) * step);
    }

    ProbabilityBudget budget;
    budget.requested_probability = probability;
    budget.degree_bound = static_cast<std::uint64_t>(m.num_unknowns()) * eq_degree;
    budget.input_jet_order = max_order + 2;
    budget.events = m.num_unknowns() +
                    m.num_inputs() * static_cast<std::uint64_t>(budget.input_jet_order + 1) + 1;
    budget.bound = sampling_bound(probability, budget.events, budget.degree_bound);
    return budget;
}

SamplePoint sample_point(const JetEngine& engine, const ProbabilityBudget& budget, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ kPointSalt);
    const JetSpace& space = engine.space();
    int jet_order = std::min(budget.input_jet_order, space.max_input_order());

    SamplePoint point;
    point.seed = seed;
    point.bound = budget.bound;
    for (int attempt = 0; attempt < kMaxPointRetries; ++attempt) {
        point.values.clear();
        for (VarId v = 0; v < space.num_unknowns(); ++v)
            point.values[v] = Rat(static_cast<unsigned long>(
                1 + uniform_u64(rng, static_cast<std::uint64_t>(budget.bound))));
        for (std::size_t i = 0; i < space.model().num_inputs(); ++i)
            for (int k = 0; k <= jet_order; ++k)
                point.values[space.input_jet(i, k)] = Rat(static_cast<unsigned long>(
                    1 + uniform_u64(rng, static_cast<std::uint64_t>(budget.bound))));
        if (engine.denominators_nonzero_at(point.values)) return point;
    }
    throw DegenerateModelError("could not sample a point avoiding all denominators");
}

LocalResult local_classification(JetEngine& engine, std::uint64_t seed, double phase_prob, int ceiling) {
    const JetSpace& space = engine.space();
    std::size_t n_unknowns = space.num_unknowns();
    std::size_t n_outputs = space.model().outputs.size();

    LocalResult result;
    std::vector<int> ceiling_orders(n_outputs, ceiling);
    result.budget = probability_budget(phase_prob, space.model(), ceiling_orders);
    result.point = sample_point(engine, result.budget, seed);

    std::mt19937_64 prime_rng(seed ^ kPrimeSalt);
    for (int attempt = 0; attempt < kMaxPrimeRetries; ++attempt) {
        PrimeField F = random_prime_field(prime_rng);
        try {
            FpJetCache cache(F, engine);
            FpRow point = dense_point(engine, result.point, F);
            FpRow inv_point(n_unknowns);
            for (std::size_t i = 0; i < n_unknowns; ++i) inv_point[i] = F.inv(point[i]);
            std::vector<GradVal> base_vals;

            std::vector<FpRow> rows;
            std::vector<std::pair<std::size_t, int>> row_tags;  // (output, order)
            int prev_rank = -1;
            int final_order = 0;
            bool stabilized = false;
            for (int d = 0; d <= ceiling; ++d) {
                for (std::size_t i = 0; i < n_outputs; ++i) {
                    rows.push_back(
                        jet_gradient_row(F, cache, engine, i, d, point, inv_point, base_vals));
                    row_tags.emplace_back(i, d);
                }
                int r = fp_rank(F, rows);
                final_order = d;
                if (r == prev_rank) {
                    stabilized = true;
                    break;
                }
                prev_rank = r;
            }
            result.rank = prev_rank;
            result.raised_to = final_order;
            result.ambiguous = !stabilized;
            result.prime = F.p;

            // Local flags: an unknown is locally identifiable iff no null
            // vector of the Jacobian touches its column.
            std::vector<FpRow> rref_rows = rows;
            std::vector<int> pivot_row = fp_rref(F, rref_rows, n_unknowns);
            result.flags.assign(n_unknowns, false);
            for (std::size_t c = 0; c < n_unknowns; ++c) {
                if (pivot_row[c] < 0) continue;  // free column: not identifiable
                bool clean = true;
                for (std::size_t f = 0; f < n_unknowns && clean; ++f)
                    if (pivot_row[f] < 0 &&
                        rref_rows[static_cast<std::size_t>(pivot_row[c])][f] != 0)
                        clean = false;
                result.flags[c] = clean;
            }

            // Trim per-output orders to the smallest rank-preserving set;
            // removing rank-neutral rows cannot change the null space.
            std::vector<int> kept(n_outputs, final_order);
            auto rank_with = [&](const std::vector<int>& limit) {
                std::vector<FpRow> subset;
                for (std::size_t r = 0; r < rows.size(); ++r)
                    if (row_tags[r].second <= limit[row_tags[r].first]) subset.push_back(rows[r]);
                return fp_rank(F, std::move(subset));
            };
            for (bool changed = true; changed;) {
                changed = false;
                for (std::size_t i = 0; i < n_outputs; ++i) {
                    while (kept[i] > 0) {
                        std::vector<int> trial = kept;
                        --trial[i];
                        if (rank_with(trial) == result.rank) {
                            kept = std::move(trial);
                            changed = true;
                        } else {
                            break;
                        }
                    }
                }
            }
            // One extra order per output guards the global phase.
            result.orders.resize(n_outputs);
            for (std::size_t i = 0; i < n_outputs; ++i) result.orders[i] = kept[i] + 1;
            return result;
        } catch (const BadPrimeError&) {
            continue;  // fresh prime, same point
        }
    }
    throw DegenerateModelError("no usable prime found for the local phase");
}

IdentifiabilityReport global_classification(const Model& m, const AnalysisOptions& opts) {
    using clock = std::chrono::steady_clock;
    IdentifiabilityReport report;
    report.model = m.name;
    report.probability = opts.probability;
    report.seed = opts.seed;

    int ceiling = opts.max_order >= 0 ? opts.max_order : static_cast<int>(m.num_unknowns()) + 1;
    JetEngine engine(m, ceiling + 3);
    std::size_t n_unknowns = m.num_unknowns();
    double phase_prob = phase_probability(opts.probability);

    auto t0 = clock::now();
    LocalResult local = local_classification(engine, opts.seed, phase_prob, ceiling);
    report.local_prime = local.prime;
    report.local_budget = local.budget;
    report.jacobian_rank = local.rank;
    report.local_seconds = std::chrono::duration<double>(clock::now() - t0).count();

    std::vector<Label> labels(n_unknowns, Label::NonIdentifiable);
    auto publish = [&]() {
        // Report order: parameters first, then initial conditions.
        for (std::size_t i = 0; i < m.num_params(); ++i)
            report.labels.emplace_back(m.table->name(m.params[i]),
                                       labels[engine.space().param_var(i)]);
        for (std::size_t i = 0; i < m.num_states(); ++i)
            report.labels.emplace_back(m.table->name(m.states[i]) + "*",
                                       labels[engine.space().state_var(i)]);
        for (std::size_t i = 0; i < m.outputs.size(); ++i)
            report.orders.emplace_back(m.outputs[i].name,
                                       local.orders.empty() ? 0 : local.orders[i]);
    };

    if (local.ambiguous) {
        std::fill(labels.begin(), labels.end(), Label::Unresolved);
        publish();
        return report;
    }

    std::vector<std::size_t> flagged;
    for (std::size_t u = 0; u < n_unknowns; ++u)
        if (local.flags[u]) flagged.push_back(u);
    if (flagged.empty()) {
        publish();
        return report;
    }

    auto t1 = clock::now();
    report.global_budget = probability_budget(phase_prob, m, local.orders);
    std::uint64_t global_seed = opts.seed ^ kGlobalSalt;
    SamplePoint point = sample_point(engine, report.global_budget, global_seed);

    // Exact jet values at the sampled point.
    std::vector<std::vector<Rat>> yhat(m.outputs.size());
    for (std::size_t i = 0; i < m.outputs.size(); ++i)
        for (int k = 0; k <= local.orders[i]; ++k)
            yhat[i].push_back(engine.evaluate_jet(engine.output_jet(i, static_cast<int>(k)), point.values));

    std::map<VarId, Rat> input_values;
    for (const auto& [var, value] : point.values)
        if (engine.space().is_input_jet(var)) input_values[var] = value;

    TruncatedSystem system = engine.build_truncated_system(local.orders, yhat, input_values);

    std::mt19937_64 prime_rng(global_seed ^ kPrimeSalt);
    MonomialOrder order = MonomialOrder::block({engine.space().saturation_var()});
    for (int attempt = 0; attempt < kMaxPrimeRetries; ++attempt) {
        PrimeField F = random_prime_field(prime_rng);
        if (F.p == local.prime) continue;  // fresh prime for the global phase
        report.global_prime = F.p;
        std::vector<FpPoly> equations;
        try {
            for (const auto& eq : system.equations) equations.push_back(reduce_mod_prime(eq, F));
        } catch (const BadPrimeError&) {
            continue;
        }

        FpGroebnerBasis basis;
        try {
            basis = buchberger(equations, order, opts.groebner);
        } catch (const BudgetError& budget) {
            report.groebner_budget_exceeded = true;
            report.groebner_pairs_processed = budget.pairs_processed;
            report.groebner_basis_size = budget.basis_size;
            for (std::size_t u : flagged) labels[u] = Label::Unresolved;
            break;
        }

        // Normal-form queries are independent and read-only; fan out.
        std::vector<Label> verdicts(flagged.size(), Label::Unresolved);
        bool anomaly = false;
        auto classify = [&](std::size_t idx) {
            std::size_t u = flagged[idx];
            FpPoly theta = FpPoly::variable(engine.space().table(), F, static_cast<VarId>(u));
            FpPoly nf = normal_form(theta, basis);
            if (nf.is_constant()) {
                std::uint64_t expected = F.from_rational(point.values.at(static_cast<VarId>(u)));
                verdicts[idx] = nf.constant_value() == expected ? Label::GloballyIdentifiable
                                                                : Label::Unresolved;
            } else {
                verdicts[idx] = Label::LocallyNotGlobally;
            }
        };
        int jobs = std::max(1, opts.jobs);
        if (jobs == 1 || flagged.size() < 2) {
            for (std::size_t idx = 0; idx < flagged.size(); ++idx) classify(idx);
        } else {
            std::vector<std::thread> workers;
            std::size_t per = (flagged.size() + static_cast<std::size_t>(jobs) - 1) /
                              static_cast<std::size_t>(jobs);
            for (int w = 0; w < jobs; ++w) {
                std::size_t lo = static_cast<std::size_t>(w) * per;
                std::size_t hi = std::min(flagged.size(), lo + per);
                if (lo >= hi) break;
                workers.emplace_back([&, lo, hi]() {
                    for (std::size_t idx = lo; idx < hi; ++idx) classify(idx);
                });
            }
            for (auto& w : workers) w.join();
        }
        for (std::size_t idx = 0; idx < flagged.size(); ++idx) {
            if (verdicts[idx] == Label::Unresolved) anomaly = true;
            labels[flagged[idx]] = verdicts[idx];
        }
        if (!anomaly) break;
        // A constant normal form differing from the sampled value points at a
        // degenerate prime; retry before reporting Unresolved.
        if (attempt + 1 < kMaxPrimeRetries) continue;
        break;
    }

    report.global_seconds = std::chrono::duration<double>(clock::now() - t1).count();
    publish();
    return report;
}

Label IdentifiabilityReport::label_of(const std::string& unknown) const {
    for (const auto& [name, label] : labels)
        if (name == unknown) return label;
    throw ArgumentError("unknown '" + unknown + "' not present in report");
}

}  // namespace structid
