#include "momentprop/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "momentprop/errors.hpp"

namespace momentprop {

namespace {

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail_at(int line, int col, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + msg);
}

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}
bool is_ident_char(char c) {
    return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c)) != 0;
}
bool is_identifier(const std::string& s) {
    if (s.empty() || !is_ident_start(s[0])) return false;
    return std::all_of(s.begin(), s.end(), is_ident_char);
}

struct Token {
    enum Kind { number, ident, punct, end };
    Kind kind = end;
    std::string text;   // ident spelling
    double value = 0.0; // number payload
    char ch = 0;        // punct payload
    int line = 0, col = 0;
};

// Tokens of one expression or value string, with positions relative to where
// the string sits in the original file.
std::vector<Token> tokenize(const std::string& text, int line, int col0) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        const int col = col0 + static_cast<int>(i);
        if (c == ' ' || c == '\t') {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
            std::size_t j = i;
            while (j < text.size() &&
                   std::isdigit(static_cast<unsigned char>(text[j])) != 0)
                ++j;
            if (j < text.size() && text[j] == '.') {
                ++j;
                while (j < text.size() &&
                       std::isdigit(static_cast<unsigned char>(text[j])) != 0)
                    ++j;
            }
            if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
                if (k >= text.size() ||
                    std::isdigit(static_cast<unsigned char>(text[k])) == 0) {
                    fail_at(line, col, "malformed number '" +
                                           text.substr(i, k - i) + "'");
                }
                j = k;
                while (j < text.size() &&
                       std::isdigit(static_cast<unsigned char>(text[j])) != 0)
                    ++j;
            }
            double v = 0.0;
            const auto [p, ec] =
                std::from_chars(text.data() + i, text.data() + j, v);
            if (ec != std::errc{} || p != text.data() + j) {
                fail_at(line, col, "malformed number '" +
                                       text.substr(i, j - i) + "'");
            }
            Token t;
            t.kind = Token::number;
            t.value = v;
            t.line = line;
            t.col = col;
            out.push_back(std::move(t));
            i = j;
            continue;
        }
        if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && is_ident_char(text[j])) ++j;
            Token t;
            t.kind = Token::ident;
            t.text = text.substr(i, j - i);
            t.line = line;
            t.col = col;
            out.push_back(std::move(t));
            i = j;
            continue;
        }
        if (std::string("+-*/^(),").find(c) != std::string::npos) {
            Token t;
            t.kind = Token::punct;
            t.ch = c;
            t.line = line;
            t.col = col;
            out.push_back(std::move(t));
            ++i;
            continue;
        }
        fail_at(line, col, std::string("unexpected character '") + c + "'");
    }
    Token t;
    t.kind = Token::end;
    t.line = line;
    t.col = col0 + static_cast<int>(text.size());
    out.push_back(std::move(t));
    return out;
}

// Recursive-descent parser over a token stream.  A null symbol table means
// only constants (numbers, pi) are allowed; aside from that, identifiers
// resolve through the table.
class ExprParser {
public:
    ExprParser(std::vector<Token> tokens, const SymbolTable* table)
        : toks_(std::move(tokens)), table_(table) {}

    MtpExpr parse_expression() {
        bool negate = false;
        if (at_punct('+') || at_punct('-')) {
            negate = peek().ch == '-';
            advance();
        }
        MtpExpr e = parse_term();
        if (negate) e = e * -1.0;
        while (at_punct('+') || at_punct('-')) {
            const bool minus = peek().ch == '-';
            advance();
            const MtpExpr rhs = parse_term();
            e = minus ? e - rhs : e + rhs;
        }
        return e;
    }

    const Token& peek() const { return toks_[pos_]; }
    void expect_end(const char* what) {
        if (peek().kind != Token::end) {
            fail_here(std::string("unexpected trailing input in ") + what);
        }
    }
    bool at_punct(char c) const {
        return peek().kind == Token::punct && peek().ch == c;
    }
    void advance() { ++pos_; }
    void expect_punct(char c, const std::string& context) {
        if (!at_punct(c)) {
            fail_here("expected '" + std::string(1, c) + "' " + context);
        }
        advance();
    }

private:
    [[noreturn]] void fail_here(const std::string& msg) {
        fail_at(peek().line, peek().col, msg);
    }

    static std::optional<double> as_constant(const MtpExpr& e) {
        if (e.is_zero()) return 0.0;
        if (e.terms().size() == 1 && e.terms()[0].factors.empty()) {
            return e.terms()[0].coef;
        }
        return std::nullopt;
    }

    MtpExpr parse_term() {
        MtpExpr e = parse_powered();
        while (at_punct('*') || at_punct('/')) {
            const bool divide = peek().ch == '/';
            const Token op = peek();
            advance();
            const MtpExpr rhs = parse_powered();
            if (divide) {
                const auto c = as_constant(rhs);
                if (!c) {
                    fail_at(op.line, op.col,
                            "division requires a constant divisor");
                }
                if (*c == 0.0) fail_at(op.line, op.col, "division by zero");
                e = e * (1.0 / *c);
            } else {
                e = e * rhs;
            }
        }
        return e;
    }

    MtpExpr parse_powered() {
        MtpExpr e = parse_atom();
        if (at_punct('^')) {
            advance();
            if (peek().kind != Token::number) {
                fail_here("expected an integer exponent after '^'");
            }
            const double v = peek().value;
            const int n = static_cast<int>(v);
            if (v != static_cast<double>(n) || n < 0) {
                fail_here("exponents must be nonnegative integers");
            }
            advance();
            e = e.pow(n);
        }
        return e;
    }

    MtpExpr parse_atom() {
        const Token t = peek();
        if (t.kind == Token::number) {
            advance();
            return MtpExpr::constant(t.value);
        }
        if (t.kind == Token::punct && t.ch == '(') {
            advance();
            MtpExpr e = parse_expression();
            expect_punct(')', "to close the parenthesis");
            return e;
        }
        if (t.kind == Token::ident) {
            if (t.text == "pi") {
                advance();
                return MtpExpr::constant(kPi);
            }
            if (t.text == "cos" || t.text == "sin") {
                const bool is_sin = t.text == "sin";
                advance();
                expect_punct('(', "after '" + t.text + "'");
                const MtpExpr arg = parse_expression();
                expect_punct(')', "to close the '" + t.text + "' argument");
                const auto aff = arg.affine_view();
                if (!aff) {
                    fail_at(t.line, t.col,
                            "'" + t.text +
                                "' argument must be affine in symbols");
                }
                if (aff->linear.empty()) {
                    return MtpExpr::constant(is_sin ? std::sin(aff->constant)
                                                   : std::cos(aff->constant));
                }
                if (aff->linear.size() == 1) {
                    // exact single-symbol atom, offset carried as the phase
                    const auto& [sym, coef] = aff->linear[0];
                    return MtpExpr::atom(sym, coef, aff->constant,
                                         is_sin ? 0 : 1, is_sin ? 1 : 0);
                }
                return expand_affine_trig(is_sin, aff->linear, aff->constant);
            }
            if (table_ == nullptr) {
                fail_at(t.line, t.col,
                        "only constants are allowed here, got '" + t.text + "'");
            }
            const auto id = table_->find(t.text);
            if (!id) {
                fail_at(t.line, t.col, "unknown symbol '" + t.text + "'");
            }
            advance();
            return MtpExpr::symbol(*id);
        }
        fail_at(t.line, t.col, "expected a number, symbol, or parenthesis");
    }

    std::vector<Token> toks_;
    const SymbolTable* table_;
    std::size_t pos_ = 0;
};

double parse_constant_value(ExprParser& p, const char* what) {
    const Token start = p.peek();
    const MtpExpr e = p.parse_expression();
    if (e.is_zero()) return 0.0;
    if (e.terms().size() == 1 && e.terms()[0].factors.empty()) {
        return e.terms()[0].coef;
    }
    fail_at(start.line, start.col, std::string(what) + " must be constant");
}

Distribution make_distribution(const std::string& family,
                               const std::vector<double>& args, int line,
                               int col) {
    const auto want = [&](std::size_t n) {
        if (args.size() != n) {
            fail_at(line, col,
                    "'" + family + "' takes " + std::to_string(n) +
                        (n == 1 ? " argument" : " arguments") + ", got " +
                        std::to_string(args.size()));
        }
    };
    if (family == "point") {
        want(1);
        return Distribution::normal(args[0], 0.0);
    }
    if (family == "normal") {
        want(2);
        return Distribution::normal(args[0], args[1]);
    }
    if (family == "uniform") {
        want(2);
        if (args[0] == args[1]) return Distribution::normal(args[0], 0.0);
        return Distribution::uniform(args[0], args[1]);
    }
    if (family == "beta") {
        want(2);
        return Distribution::beta(args[0], args[1]);
    }
    if (family == "gamma") {
        want(2);
        return Distribution::gamma(args[0], args[1]);
    }
    fail_at(line, col, "unknown distribution '" + family +
                           "' (expected normal, uniform, beta, gamma, or "
                           "point)");
}

Distribution parse_distribution_at(const std::string& text, int line,
                                   int col0) {
    ExprParser p(tokenize(text, line, col0), nullptr);
    const Token head = p.peek();
    if (head.kind != Token::ident) {
        fail_at(head.line, head.col, "expected a distribution name");
    }
    p.advance();
    p.expect_punct('(', "after the distribution name");
    std::vector<double> args;
    if (!p.at_punct(')')) {
        args.push_back(parse_constant_value(p, "distribution parameters"));
        while (p.at_punct(',')) {
            p.advance();
            args.push_back(parse_constant_value(p, "distribution parameters"));
        }
    }
    p.expect_punct(')', "to close the distribution arguments");
    p.expect_end("distribution");
    return make_distribution(head.text, args, head.line, head.col);
}

// Control schedules: either a comma-separated list of constants or a single
// expression over the step index k, evaluated for k = 0..horizon-1.
std::vector<double> parse_schedule(const std::string& text, int line, int col0,
                                   int horizon, const std::string& ctrl_name) {
    SymbolTable ktab;
    const SymbolId kid = ktab.declare("k", SymbolKind::state);
    ExprParser p(tokenize(text, line, col0), &ktab);
    std::vector<MtpExpr> pieces;
    pieces.push_back(p.parse_expression());
    while (p.at_punct(',')) {
        p.advance();
        pieces.push_back(p.parse_expression());
    }
    p.expect_end("control schedule");

    const auto as_const = [&](const MtpExpr& e) -> std::optional<double> {
        if (e.is_zero()) return 0.0;
        if (e.terms().size() == 1 && e.terms()[0].factors.empty()) {
            return e.terms()[0].coef;
        }
        return std::nullopt;
    };

    if (pieces.size() > 1) {
        std::vector<double> values;
        for (const auto& e : pieces) {
            const auto c = as_const(e);
            if (!c) {
                fail_at(line, col0, "per-step schedule entries for '" +
                                        ctrl_name + "' must be constants");
            }
            values.push_back(*c);
        }
        return values;
    }
    if (const auto c = as_const(pieces[0])) return {*c};
    std::vector<double> values;
    std::vector<double> binding(1, 0.0);
    for (int k = 0; k < std::max(1, horizon); ++k) {
        binding[kid] = static_cast<double>(k);
        values.push_back(pieces[0].eval(binding));
    }
    return values;
}

struct SectionLine {
    int number;
    int col0;  // 1-based column of the first non-space character
    std::string text;
};

struct KeyedLine {
    int number;
    int value_col;  // 1-based column where the value starts
    std::string key;
    std::string value;
};

std::string strip(const std::string& s, std::size_t* lead = nullptr) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) {
        if (lead != nullptr) *lead = 0;
        return "";
    }
    std::size_t e = s.find_last_not_of(" \t");
    if (lead != nullptr) *lead = b;
    return s.substr(b, e - b + 1);
}

KeyedLine split_key_value(const SectionLine& ln, const std::string& section) {
    const std::size_t eq = ln.text.find('=');
    if (eq == std::string::npos) {
        fail_at(ln.number, 1,
                "expected 'name = value' in section [" + section + "]");
    }
    KeyedLine out;
    out.number = ln.number;
    out.key = strip(ln.text.substr(0, eq));
    std::size_t lead = 0;
    out.value = strip(ln.text.substr(eq + 1), &lead);
    out.value_col = ln.col0 + static_cast<int>(eq + 1 + lead);
    if (!is_identifier(out.key)) {
        fail_at(ln.number, 1, "'" + out.key + "' is not a valid name");
    }
    if (out.value.empty()) {
        fail_at(ln.number, out.value_col, "missing value for '" + out.key + "'");
    }
    return out;
}

const std::unordered_set<std::string>& reserved_names() {
    static const std::unordered_set<std::string> r{"pi", "cos", "sin", "k"};
    return r;
}

std::vector<std::string> split_names(const std::string& text, int line) {
    std::string s = text;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::vector<std::string> names;
    std::istringstream is(s);
    std::string w;
    while (is >> w) {
        if (!is_identifier(w)) {
            fail_at(line, 1, "'" + w + "' is not a valid name");
        }
        names.push_back(w);
    }
    return names;
}

int parse_int_strict(const std::string& text, int line, int col,
                     const char* what) {
    int v = 0;
    const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size()) {
        fail_at(line, col, std::string(what) + " must be an integer, got '" +
                               text + "'");
    }
    return v;
}

std::vector<int> parse_orders(const std::string& text, int line, int col) {
    std::vector<int> orders;
    const std::size_t dots = text.find("..");
    if (dots != std::string::npos) {
        const int lo = parse_int_strict(strip(text.substr(0, dots)), line, col,
                                        "order range start");
        const int hi = parse_int_strict(strip(text.substr(dots + 2)), line, col,
                                        "order range end");
        if (lo < 1 || hi < lo) {
            fail_at(line, col, "order range must satisfy 1 <= a <= b");
        }
        for (int a = lo; a <= hi; ++a) orders.push_back(a);
        return orders;
    }
    std::string s = text;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream is(s);
    std::string w;
    while (is >> w) {
        const int a = parse_int_strict(w, line, col, "moment order");
        if (a < 1) fail_at(line, col, "moment orders must be positive");
        orders.push_back(a);
    }
    if (orders.empty()) fail_at(line, col, "empty order list");
    std::sort(orders.begin(), orders.end());
    orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
    return orders;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

MtpExpr parse_dynamics_expression(const std::string& text,
                                  const SymbolTable& table, int base_line) {
    ExprParser p(tokenize(text, base_line, 1), &table);
    MtpExpr e = p.parse_expression();
    p.expect_end("expression");
    return e;
}

Distribution parse_distribution_text(const std::string& text) {
    return parse_distribution_at(text, 1, 1);
}

Scenario parse_scenario_text(const std::string& text, const std::string& name) {
    static const std::unordered_set<std::string> kSections{
        "states", "dynamics", "disturbances", "initial", "controls", "run"};

    // pass 1: split into sections, stripping comments
    std::unordered_map<std::string, std::vector<SectionLine>> sections;
    std::string current;
    int line_no = 0;
    std::istringstream is(text);
    std::string raw;
    while (std::getline(is, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::size_t lead = 0;
        const std::string ln = strip(raw, &lead);
        if (ln.empty()) continue;
        const int col0 = static_cast<int>(lead) + 1;
        if (ln.front() == '[') {
            if (ln.back() != ']') {
                fail_at(line_no, 1, "unterminated section header");
            }
            const std::string sec = strip(ln.substr(1, ln.size() - 2));
            if (kSections.count(sec) == 0) {
                fail_at(line_no, 1, "unknown section '[" + sec + "]'");
            }
            if (sections.count(sec) != 0) {
                fail_at(line_no, 1, "duplicate section '[" + sec + "]'");
            }
            sections[sec];
            current = sec;
            continue;
        }
        if (current.empty()) {
            fail_at(line_no, 1, "content before the first section header");
        }
        sections[current].push_back({line_no, col0, ln});
    }
    for (const char* required : {"states", "dynamics", "initial", "run"}) {
        if (sections.count(required) == 0) {
            throw ParseError("missing [" + std::string(required) +
                             "] section");
        }
    }

    Scenario sc;
    sc.name = name;
    SystemSpec& spec = sc.spec;

    const auto declare = [&](const std::string& sym_name, SymbolKind kind,
                             int line) {
        if (reserved_names().count(sym_name) != 0) {
            fail_at(line, 1, "'" + sym_name + "' is a reserved name");
        }
        try {
            return spec.table.declare(sym_name, kind);
        } catch (const ValidationError& e) {
            fail_at(line, 1, e.what());
        }
    };

    // states
    for (const auto& ln : sections["states"]) {
        for (const auto& n : split_names(ln.text, ln.number)) {
            spec.states.push_back(declare(n, SymbolKind::state, ln.number));
        }
    }
    if (spec.states.empty()) throw ParseError("no states declared");

    // disturbances
    if (sections.count("disturbances") != 0) {
        for (const auto& ln : sections["disturbances"]) {
            const KeyedLine kv = split_key_value(ln, "disturbances");
            spec.disturbances.push_back(
                declare(kv.key, SymbolKind::disturbance, kv.number));
            spec.noise_laws.push_back(
                {parse_distribution_at(kv.value, kv.number, kv.value_col)});
        }
    }

    // controls: declare first, schedules once the horizon is known
    std::vector<KeyedLine> control_lines;
    if (sections.count("controls") != 0) {
        for (const auto& ln : sections["controls"]) {
            KeyedLine kv = split_key_value(ln, "controls");
            spec.controls.push_back(
                declare(kv.key, SymbolKind::control, kv.number));
            control_lines.push_back(std::move(kv));
        }
    }

    // run settings
    bool have_horizon = false;
    std::vector<std::string> target_names;
    for (const auto& ln : sections["run"]) {
        const KeyedLine kv = split_key_value(ln, "run");
        if (kv.key == "horizon") {
            const int h = parse_int_strict(kv.value, kv.number, kv.value_col,
                                           "horizon");
            if (h < 0) {
                fail_at(kv.number, kv.value_col, "horizon must be >= 0");
            }
            spec.horizon = h;
            have_horizon = true;
        } else if (kv.key == "targets") {
            target_names = split_names(kv.value, kv.number);
        } else if (kv.key == "orders") {
            sc.orders = parse_orders(kv.value, kv.number, kv.value_col);
        } else {
            fail_at(kv.number, 1, "unknown [run] key '" + kv.key +
                                      "' (expected horizon, targets, or "
                                      "orders)");
        }
    }
    if (!have_horizon) throw ParseError("missing 'horizon' in [run]");
    if (sc.orders.empty()) sc.orders = {1, 2, 3, 4, 5, 6};

    // control schedules
    for (const auto& kv : control_lines) {
        spec.schedules.push_back(parse_schedule(kv.value, kv.number,
                                                kv.value_col, spec.horizon,
                                                kv.key));
    }

    // dynamics, one update per state
    spec.updates.resize(spec.states.size());
    std::vector<char> has_update(spec.states.size(), 0);
    for (const auto& ln : sections["dynamics"]) {
        const KeyedLine kv = split_key_value(ln, "dynamics");
        const auto id = spec.table.find(kv.key);
        std::optional<std::size_t> idx;
        if (id) idx = spec.state_index(*id);
        if (!idx) {
            throw ValidationError("'" + kv.key +
                                  "' has a dynamics entry but is not a "
                                  "declared state");
        }
        if (has_update[*idx] != 0) {
            fail_at(kv.number, 1, "state '" + kv.key +
                                      "' already has a dynamics entry");
        }
        ExprParser p(tokenize(kv.value, kv.number, kv.value_col), &spec.table);
        spec.updates[*idx] = p.parse_expression();
        p.expect_end("dynamics expression");
        has_update[*idx] = 1;
    }
    for (std::size_t i = 0; i < spec.states.size(); ++i) {
        if (has_update[i] == 0) {
            throw ValidationError("state '" + spec.table.name(spec.states[i]) +
                                  "' has no dynamics entry");
        }
    }

    // initial laws, one per state
    spec.initial.resize(spec.states.size(), Distribution::normal(0.0, 0.0));
    std::vector<char> has_initial(spec.states.size(), 0);
    for (const auto& ln : sections["initial"]) {
        const KeyedLine kv = split_key_value(ln, "initial");
        const auto id = spec.table.find(kv.key);
        std::optional<std::size_t> idx;
        if (id) idx = spec.state_index(*id);
        if (!idx) {
            throw ValidationError("'" + kv.key +
                                  "' has an initial law but is not a declared "
                                  "state");
        }
        if (has_initial[*idx] != 0) {
            fail_at(kv.number, 1, "state '" + kv.key +
                                      "' already has an initial law");
        }
        spec.initial[*idx] =
            parse_distribution_at(kv.value, kv.number, kv.value_col);
        has_initial[*idx] = 1;
    }
    for (std::size_t i = 0; i < spec.states.size(); ++i) {
        if (has_initial[i] == 0) {
            throw ValidationError("state '" + spec.table.name(spec.states[i]) +
                                  "' has no initial law");
        }
    }

    // targets
    if (target_names.empty()) {
        sc.targets = spec.states;
    } else {
        for (const auto& n : target_names) {
            const auto id = spec.table.find(n);
            if (!id || !spec.state_index(*id)) {
                throw ValidationError("target '" + n +
                                      "' is not a declared state");
            }
            sc.targets.push_back(*id);
        }
    }

    spec.validate();
    return sc;
}

namespace {

std::string serialize_distribution(const Distribution& d) {
    if (d.affine_scale() != 1.0 || d.affine_shift() != 0.0) {
        throw ValidationError(
            "scenario files cannot express affine-wrapped laws");
    }
    switch (d.kind()) {
        case Distribution::Kind::normal:
            if (d.param2() == 0.0) {
                return "point(" + format_double(d.param1()) + ")";
            }
            return "normal(" + format_double(d.param1()) + ", " +
                   format_double(d.param2()) + ")";
        case Distribution::Kind::uniform:
            return "uniform(" + format_double(d.param1()) + ", " +
                   format_double(d.param2()) + ")";
        case Distribution::Kind::beta:
            return "beta(" + format_double(d.param1()) + ", " +
                   format_double(d.param2()) + ")";
        case Distribution::Kind::gamma:
            return "gamma(" + format_double(d.param1()) + ", " +
                   format_double(d.param2()) + ")";
    }
    throw ValidationError("unknown distribution kind");
}

}  // namespace

std::string serialize_scenario(const Scenario& sc) {
    const SystemSpec& spec = sc.spec;
    std::string out;
    out += "[states]\n";
    for (std::size_t i = 0; i < spec.states.size(); ++i) {
        out += (i == 0 ? "" : " ") + spec.table.name(spec.states[i]);
    }
    out += "\n\n[dynamics]\n";
    for (std::size_t i = 0; i < spec.states.size(); ++i) {
        out += spec.table.name(spec.states[i]) + " = " +
               spec.updates[i].to_string(spec.table) + "\n";
    }
    if (!spec.disturbances.empty()) {
        out += "\n[disturbances]\n";
        for (std::size_t i = 0; i < spec.disturbances.size(); ++i) {
            if (spec.noise_laws[i].size() != 1) {
                throw ValidationError(
                    "scenario files cannot express per-step noise laws");
            }
            out += spec.table.name(spec.disturbances[i]) + " = " +
                   serialize_distribution(spec.noise_laws[i][0]) + "\n";
        }
    }
    out += "\n[initial]\n";
    for (std::size_t i = 0; i < spec.states.size(); ++i) {
        out += spec.table.name(spec.states[i]) + " = " +
               serialize_distribution(spec.initial[i]) + "\n";
    }
    if (!spec.controls.empty()) {
        out += "\n[controls]\n";
        for (std::size_t i = 0; i < spec.controls.size(); ++i) {
            out += spec.table.name(spec.controls[i]) + " = ";
            for (std::size_t k = 0; k < spec.schedules[i].size(); ++k) {
                out += (k == 0 ? "" : ", ") + format_double(spec.schedules[i][k]);
            }
            out += "\n";
        }
    }
    out += "\n[run]\nhorizon = " + std::to_string(spec.horizon) + "\n";
    out += "targets =";
    for (const SymbolId t : sc.targets) out += " " + spec.table.name(t);
    out += "\norders = ";
    bool contiguous = true;
    for (std::size_t i = 1; i < sc.orders.size(); ++i) {
        contiguous = contiguous && sc.orders[i] == sc.orders[i - 1] + 1;
    }
    if (contiguous && sc.orders.size() > 1) {
        out += std::to_string(sc.orders.front()) + ".." +
               std::to_string(sc.orders.back());
    } else {
        for (std::size_t i = 0; i < sc.orders.size(); ++i) {
            out += (i == 0 ? "" : ", ") + std::to_string(sc.orders[i]);
        }
    }
    out += "\n";
    return out;
}

bool scenario_equivalent(const Scenario& a, const Scenario& b) {
    const SystemSpec& sa = a.spec;
    const SystemSpec& sb = b.spec;
    const auto names_equal = [&](const std::vector<SymbolId>& xa,
                                 const std::vector<SymbolId>& xb) {
        if (xa.size() != xb.size()) return false;
        for (std::size_t i = 0; i < xa.size(); ++i) {
            if (sa.table.name(xa[i]) != sb.table.name(xb[i])) return false;
        }
        return true;
    };
    if (!names_equal(sa.states, sb.states) ||
        !names_equal(sa.disturbances, sb.disturbances) ||
        !names_equal(sa.controls, sb.controls) ||
        !names_equal(a.targets, b.targets)) {
        return false;
    }
    // equal name sets declared in the same order make symbol ids line up,
    // so structural expression equality is meaningful
    if (sa.updates != sb.updates) return false;
    if (sa.initial != sb.initial) return false;
    if (sa.noise_laws != sb.noise_laws) return false;
    if (sa.schedules != sb.schedules) return false;
    return sa.horizon == sb.horizon && a.orders == b.orders;
}

Scenario load_scenario(const std::string& name_or_path) {
    if (is_builtin_scenario(name_or_path)) {
        Scenario sc =
            parse_scenario_text(builtin_scenario_text(name_or_path), name_or_path);
        for (const auto& b : builtin_scenarios()) {
            if (b.name == name_or_path) sc.summary = b.summary;
        }
        return sc;
    }
    std::ifstream in(name_or_path, std::ios::binary);
    if (!in) {
        std::string msg = "cannot read scenario '" + name_or_path +
                          "' (not a built-in name or readable file; "
                          "built-ins:";
        for (const auto& b : builtin_scenarios()) msg += " " + b.name;
        throw IoError(msg + ")");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(),
                               std::filesystem::path(name_or_path)
                                   .stem()
                                   .string());
}

}  // namespace momentprop
