#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "structid/model.hpp"

namespace structid {

namespace {

struct Token {
    enum class Kind { Ident, Integer, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    SourceSpan span;
};

const std::set<std::string> kKeywords = {"model", "states", "params", "inputs", "eq", "output"};
const std::set<std::string> kTranscendental = {"exp", "log", "ln", "sin", "cos", "tan", "sqrt", "pow"};

class Lexer {
  public:
    Lexer(const std::string& text, int line) : text_(text), line_(line) {}

    Token next() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
        Token t;
        t.span = {line_, static_cast<int>(pos_) + 1};
        if (pos_ >= text_.size() || text_[pos_] == '#') {
            t.kind = Token::Kind::End;
            return t;
        }
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            t.kind = Token::Kind::Ident;
            t.text = text_.substr(start, pos_ - start);
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            t.kind = Token::Kind::Integer;
            t.text = text_.substr(start, pos_ - start);
            return t;
        }
        t.kind = Token::Kind::Punct;
        t.text = std::string(1, c);
        ++pos_;
        return t;
    }

  private:
    const std::string& text_;
    std::size_t pos_ = 0;
    int line_;
};

std::vector<Token> tokenize(const std::string& line, int lineno) {
    Lexer lex(line, lineno);
    std::vector<Token> out;
    for (;;) {
        Token t = lex.next();
        bool end = t.kind == Token::Kind::End;
        out.push_back(std::move(t));
        if (end) break;
    }
    return out;
}

// Thrown internally and converted to a diagnostic; parse_model never lets it
// escape.
struct ParseAbort {
    SourceSpan span;
    std::string message;
};

class ExprParser {
  public:
    ExprParser(const std::vector<Token>& tokens, std::size_t start, const VarTablePtr& table,
               const Rationals& ring)
        : tokens_(tokens), pos_(start), table_(table), ring_(ring) {}

    RationalFunction parse() {
        RationalFunction e = parse_sum();
        if (!at_end()) throw ParseAbort{peek().span, "unexpected '" + peek().text + "' after expression"};
        return e;
    }

  private:
    const Token& peek() const { return tokens_[pos_]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    const Token& advance() { return tokens_[pos_++]; }

    bool match_punct(const char* p) {
        if (peek().kind == Token::Kind::Punct && peek().text == p) {
            ++pos_;
            return true;
        }
        return false;
    }

    RationalFunction parse_sum() {
        RationalFunction acc = parse_product();
        for (;;) {
            if (match_punct("+"))
                acc = acc + parse_product();
            else if (match_punct("-"))
                acc = acc - parse_product();
            else
                return acc;
        }
    }

    RationalFunction parse_product() {
        RationalFunction acc = parse_unary();
        for (;;) {
            if (match_punct("*")) {
                acc = acc * parse_unary();
            } else if (match_punct("/")) {
                SourceSpan span = tokens_[pos_ - 1].span;
                RationalFunction d = parse_unary();
                if (d.is_zero()) throw ParseAbort{span, "division by zero"};
                acc = acc / d;
            } else {
                return acc;
            }
        }
    }

    RationalFunction parse_unary() {
        if (match_punct("-")) return -parse_unary();
        return parse_power();
    }

    RationalFunction parse_power() {
        RationalFunction base = parse_primary();
        if (!match_punct("^")) return base;
        const Token& t = peek();
        if (t.kind == Token::Kind::Punct && t.text == "-")
            throw ParseAbort{t.span,
                             "negative exponent is not a rational construct; rewrite via division "
                             "(see README, \"Rationalizing a model\")"};
        if (t.kind != Token::Kind::Integer)
            throw ParseAbort{t.span,
                             "exponent must be a positive integer literal; symbolic powers are not "
                             "rational constructs (see README, \"Rationalizing a model\")"};
        advance();
        long e = 0;
        try {
            e = std::stol(t.text);
        } catch (...) {
            throw ParseAbort{t.span, "exponent literal out of range"};
        }
        if (e <= 0) throw ParseAbort{t.span, "exponent must be a positive integer literal"};
        RationalFunction acc = base;
        for (long i = 1; i < e; ++i) acc = acc * base;
        return acc;
    }

    RationalFunction parse_primary() {
        const Token& t = peek();
        if (t.kind == Token::Kind::Integer) {
            advance();
            Rat value(t.text, 10);
            value.canonicalize();
            return RationalFunction::from_polynomial(
                QPoly::constant(table_, ring_, std::move(value)));
        }
        if (t.kind == Token::Kind::Ident) {
            advance();
            if (peek().kind == Token::Kind::Punct && peek().text == "(") {
                if (kTranscendental.count(t.text))
                    throw ParseAbort{t.span, "'" + t.text +
                                                 "(...)' is not a rational construct; introduce an "
                                                 "auxiliary state with rational dynamics instead (see "
                                                 "README, \"Rationalizing a model\")"};
                throw ParseAbort{t.span, "function application is not part of the model format"};
            }
            if (!table_->contains(t.text)) throw ParseAbort{t.span, "use of undeclared symbol '" + t.text + "'"};
            return RationalFunction::from_polynomial(
                QPoly::variable(table_, ring_, table_->id_of(t.text)));
        }
        if (t.kind == Token::Kind::Punct && t.text == "(") {
            advance();
            RationalFunction inner = parse_sum();
            if (!match_punct(")")) throw ParseAbort{peek().span, "expected ')'"};
            return inner;
        }
        throw ParseAbort{t.span, t.kind == Token::Kind::End ? std::string("unexpected end of expression")
                                                            : "unexpected '" + t.text + "'"};
    }

    const std::vector<Token>& tokens_;
    std::size_t pos_;
    VarTablePtr table_;
    Rationals ring_;
};

struct Line {
    int number;
    std::vector<Token> tokens;
};

std::vector<std::string> parse_ident_list(const std::vector<Token>& tokens, std::size_t pos,
                                          Diagnostics& diags) {
    std::vector<std::string> names;
    bool expect_ident = true;
    for (; tokens[pos].kind != Token::Kind::End; ++pos) {
        const Token& t = tokens[pos];
        if (expect_ident) {
            if (t.kind != Token::Kind::Ident) {
                diags.error(t.span, "expected identifier");
                return names;
            }
            if (kKeywords.count(t.text)) {
                diags.error(t.span, "'" + t.text + "' is a reserved word");
                return names;
            }
            names.push_back(t.text);
            expect_ident = false;
        } else {
            if (t.kind != Token::Kind::Punct || t.text != ",") {
                diags.error(t.span, "expected ',' between identifiers");
                return names;
            }
            expect_ident = true;
        }
    }
    if (expect_ident && !names.empty())
        diags.error(tokens[pos].span, "trailing ',' in identifier list");
    return names;
}

}  // namespace

ParseResult parse_model(const std::string& text) {
    ParseResult result;
    Diagnostics& diags = result.diagnostics;

    std::vector<Line> lines;
    {
        std::istringstream in(text);
        std::string raw;
        int number = 0;
        while (std::getline(in, raw)) {
            ++number;
            if (!raw.empty() && raw.back() == '\r') raw.pop_back();
            std::vector<Token> tokens = tokenize(raw, number);
            if (tokens.size() > 1) lines.push_back({number, std::move(tokens)});
        }
    }

    if (lines.empty()) {
        diags.error({1, 1}, "empty model file");
        return result;
    }

    // --- header: model <name> ---
    std::size_t li = 0;
    std::string model_name;
    {
        const auto& toks = lines[0].tokens;
        if (toks[0].kind == Token::Kind::Ident && toks[0].text == "model" && toks.size() >= 3 &&
            toks[1].kind == Token::Kind::Ident && toks[2].kind == Token::Kind::End) {
            model_name = toks[1].text;
            ++li;
        } else {
            diags.error(toks[0].span, "expected 'model <name>' as the first line");
            return result;
        }
    }

    // --- declaration sections ---
    std::vector<std::string> states, params, inputs;
    std::set<std::string> seen_sections;
    while (li < lines.size()) {
        const auto& toks = lines[li].tokens;
        if (toks[0].kind != Token::Kind::Ident) break;
        const std::string& head = toks[0].text;
        if (head != "states" && head != "params" && head != "inputs") break;
        if (toks[1].kind != Token::Kind::Punct || toks[1].text != ":") {
            diags.error(toks[1].span, "expected ':' after '" + head + "'");
            return result;
        }
        if (!seen_sections.insert(head).second) {
            diags.error(toks[0].span, "duplicate '" + head + ":' section");
            return result;
        }
        std::vector<std::string> names = parse_ident_list(toks, 2, diags);
        if (diags.has_errors()) return result;
        if (head == "states")
            states = std::move(names);
        else if (head == "params")
            params = std::move(names);
        else
            inputs = std::move(names);
        ++li;
    }

    if (!seen_sections.count("states") || states.empty()) {
        diags.error({lines[std::min(li, lines.size() - 1)].number, 1},
                    "a model requires a nonempty 'states:' section");
        return result;
    }

    // Duplicate declarations.
    {
        std::map<std::string, int> counts;
        for (const auto& lists : {&states, &params, &inputs})
            for (const auto& n : *lists) ++counts[n];
        bool dup = false;
        for (const auto& [n, c] : counts) {
            if (c > 1) {
                diags.error({0, 0}, "duplicate declaration of '" + n + "'");
                dup = true;
            }
        }
        if (dup) return result;
    }

    std::vector<std::string> all_names;
    all_names.insert(all_names.end(), states.begin(), states.end());
    all_names.insert(all_names.end(), params.begin(), params.end());
    all_names.insert(all_names.end(), inputs.begin(), inputs.end());
    VarTablePtr table = VarTable::make(all_names);
    Rationals ring;

    // --- equations and outputs ---
    std::map<std::string, RationalFunction> rhs_by_state;
    std::map<std::string, SourceSpan> rhs_span;
    std::vector<Model::Output> outputs;
    std::set<std::string> output_names;

    for (; li < lines.size(); ++li) {
        const auto& toks = lines[li].tokens;
        const Token& head = toks[0];
        try {
            if (head.kind == Token::Kind::Ident && head.text == "eq") {
                if (toks[1].kind != Token::Kind::Ident)
                    throw ParseAbort{toks[1].span, "expected state name after 'eq'"};
                const std::string& state = toks[1].text;
                if (std::find(states.begin(), states.end(), state) == states.end())
                    throw ParseAbort{toks[1].span, "'" + state + "' is not a declared state"};
                std::size_t pos = 2;
                if (toks[pos].kind != Token::Kind::Punct || toks[pos].text != "'")
                    throw ParseAbort{toks[pos].span, "expected ' after the state name"};
                ++pos;
                if (toks[pos].kind != Token::Kind::Punct || toks[pos].text != "=")
                    throw ParseAbort{toks[pos].span, "expected '=' in equation"};
                ++pos;
                if (rhs_by_state.count(state))
                    throw ParseAbort{toks[1].span, "duplicate equation for state '" + state + "'"};
                ExprParser parser(toks, pos, table, ring);
                rhs_by_state.emplace(state, parser.parse());
                rhs_span[state] = toks[1].span;
            } else if (head.kind == Token::Kind::Ident && head.text == "output") {
                if (toks[1].kind != Token::Kind::Ident)
                    throw ParseAbort{toks[1].span, "expected output name after 'output'"};
                const std::string& oname = toks[1].text;
                if (kKeywords.count(oname)) throw ParseAbort{toks[1].span, "'" + oname + "' is a reserved word"};
                if (table->contains(oname))
                    throw ParseAbort{toks[1].span, "output name '" + oname + "' collides with a declared symbol"};
                if (!output_names.insert(oname).second)
                    throw ParseAbort{toks[1].span, "duplicate output '" + oname + "'"};
                std::size_t pos = 2;
                if (toks[pos].kind != Token::Kind::Punct || toks[pos].text != "=")
                    throw ParseAbort{toks[pos].span, "expected '=' after the output name"};
                ++pos;
                ExprParser parser(toks, pos, table, ring);
                outputs.push_back({oname, parser.parse()});
            } else {
                throw ParseAbort{head.span, "expected an 'eq' or 'output' line"};
            }
        } catch (const ParseAbort& abort) {
            diags.error(abort.span, abort.message);
            return result;
        } catch (const DivisionError&) {
            diags.error(head.span, "expression has an identically zero denominator");
            return result;
        }
    }

    for (const auto& s : states) {
        if (!rhs_by_state.count(s)) diags.error({0, 0}, "missing equation for state '" + s + "'");
    }
    if (outputs.empty()) diags.error({0, 0}, "a model requires at least one output");
    if (diags.has_errors()) return result;

    Model m;
    m.name = model_name;
    m.table = table;
    for (const auto& s : states) m.states.push_back(table->id_of(s));
    for (const auto& p : params) m.params.push_back(table->id_of(p));
    for (const auto& u : inputs) m.inputs.push_back(table->id_of(u));
    for (const auto& s : states) m.rhs.push_back(rhs_by_state.at(s));
    m.outputs = std::move(outputs);
    result.model = std::move(m);
    return result;
}

Diagnostics validate_model(const Model& m) {
    Diagnostics diags;

    for (const auto& out : m.outputs) {
        if (out.expr.numerator().is_constant() && out.expr.denominator().is_constant())
            diags.warning({0, 0}, "output '" + out.name + "' is a constant");
    }

    // Reachability: a state matters if it appears in an output, or in the
    // right-hand side of a state that matters.
    std::set<VarId> reached;
    std::vector<VarId> frontier;
    auto visit_vars = [&](const RationalFunction& e) {
        for (const auto& vars : {e.numerator().variables(), e.denominator().variables()})
            for (VarId v : vars)
                if (std::find(m.states.begin(), m.states.end(), v) != m.states.end() &&
                    reached.insert(v).second)
                    frontier.push_back(v);
    };
    for (const auto& out : m.outputs) visit_vars(out.expr);
    while (!frontier.empty()) {
        VarId s = frontier.back();
        frontier.pop_back();
        std::size_t idx = static_cast<std::size_t>(
            std::find(m.states.begin(), m.states.end(), s) - m.states.begin());
        visit_vars(m.rhs[idx]);
    }
    for (VarId s : m.states) {
        if (!reached.count(s))
            diags.info({0, 0}, "state '" + m.table->name(s) + "' never influences any output");
    }
    return diags;
}

std::string serialize_model(const Model& m) {
    std::ostringstream out;
    out << "model " << m.name << "\n";
    auto list = [&](const char* head, const std::vector<VarId>& ids) {
        out << head << ":";
        for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? ", " : " ") << m.table->name(ids[i]);
        out << "\n";
    };
    list("states", m.states);
    list("params", m.params);
    list("inputs", m.inputs);
    for (std::size_t i = 0; i < m.states.size(); ++i)
        out << "eq " << m.table->name(m.states[i]) << "' = " << m.rhs[i].str() << "\n";
    for (const auto& o : m.outputs) out << "output " << o.name << " = " << o.expr.str() << "\n";
    return out.str();
}

bool models_equal(const Model& a, const Model& b) {
    if (a.name != b.name) return false;
    auto names = [](const Model& m, const std::vector<VarId>& ids) {
        std::vector<std::string> out;
        for (VarId v : ids) out.push_back(m.table->name(v));
        return out;
    };
    if (names(a, a.states) != names(b, b.states) || names(a, a.params) != names(b, b.params) ||
        names(a, a.inputs) != names(b, b.inputs))
        return false;
    // Distinct tables: compare expression text in the canonical form.
    for (std::size_t i = 0; i < a.rhs.size(); ++i)
        if (a.rhs[i].str() != b.rhs[i].str()) return false;
    if (a.outputs.size() != b.outputs.size()) return false;
    for (std::size_t i = 0; i < a.outputs.size(); ++i) {
        if (a.outputs[i].name != b.outputs[i].name) return false;
        if (a.outputs[i].expr.str() != b.outputs[i].expr.str()) return false;
    }
    return true;
}

}  // namespace structid
