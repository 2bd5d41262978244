#pragma once

#include <optional>
#include <string>
#include <vector>

#include "structid/rational_function.hpp"

namespace structid {

// A parsed ODE system: states with rational right-hand sides, scalar
// parameters, experimenter-chosen inputs, and at least one output. The
// unknowns of the identifiability question are the parameters together with
// the symbolic initial conditions of all states.
struct Model {
    struct Output {
        std::string name;
        RationalFunction expr;
    };

    std::string name;
    VarTablePtr table;  // states, then params, then inputs
    std::vector<VarId> states;
    std::vector<VarId> params;
    std::vector<VarId> inputs;
    std::vector<RationalFunction> rhs;  // aligned with states
    std::vector<Output> outputs;

    std::size_t num_states() const { return states.size(); }
    std::size_t num_params() const { return params.size(); }
    std::size_t num_inputs() const { return inputs.size(); }
    std::size_t num_unknowns() const { return states.size() + params.size(); }

    // Report keys: parameters by name, then initial conditions as "<state>*".
    std::vector<std::string> unknown_names() const {
        std::vector<std::string> names;
        names.reserve(num_unknowns());
        for (VarId p : params) names.push_back(table->name(p));
        for (VarId s : states) names.push_back(table->name(s) + "*");
        return names;
    }
};

enum class Severity { Error, Warning, Info };

struct SourceSpan {
    int line = 0;  // 1-based; 0 when no location applies
    int column = 0;
};

struct Diagnostic {
    Severity severity = Severity::Error;
    SourceSpan span;
    std::string message;
};

struct Diagnostics {
    std::vector<Diagnostic> items;

    bool has_errors() const {
        for (const auto& d : items)
            if (d.severity == Severity::Error) return true;
        return false;
    }

    void error(SourceSpan span, std::string message) {
        items.push_back({Severity::Error, span, std::move(message)});
    }
    void warning(SourceSpan span, std::string message) {
        items.push_back({Severity::Warning, span, std::move(message)});
    }
    void info(SourceSpan span, std::string message) {
        items.push_back({Severity::Info, span, std::move(message)});
    }
};

struct ParseResult {
    std::optional<Model> model;  // present iff no error-severity diagnostics
    Diagnostics diagnostics;
};

// Parses the line-oriented model format (see README for the grammar).
// Parsing is total: invalid input yields diagnostics, never an exception.
ParseResult parse_model(const std::string& text);

// Structural warnings: constant outputs and states that never influence any
// output. Warnings are informational and never change labels.
Diagnostics validate_model(const Model& m);

// Canonical text form; serialize(parse(text)) reparses to an equal model.
std::string serialize_model(const Model& m);

bool models_equal(const Model& a, const Model& b);

}  // namespace structid
