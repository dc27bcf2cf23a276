#include "nsr/lang/smt.hpp"

#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nsr::lang {

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}

Rational Rational::operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
}

bool Rational::operator<(const Rational& o) const {
    return num * o.den < o.num * den;
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    // Emit a decimal whenever the denominator divides a power of ten (its
    // prime factors are 2 and 5), fractions otherwise.
    long long d = den, n = num < 0 ? -num : num;
    int tens = 0;
    while (d % 2 == 0) {
        d /= 2;
        n *= 5;
        ++tens;
    }
    while (d % 5 == 0) {
        d /= 5;
        n *= 2;
        ++tens;
    }
    if (d == 1) {
        std::string digits = std::to_string(n);
        while (static_cast<int>(digits.size()) <= tens) digits.insert(digits.begin(), '0');
        digits.insert(digits.end() - tens, '.');
        return (num < 0 ? "-" : "") + digits;
    }
    return std::to_string(num) + "/" + std::to_string(den);
}

std::string to_string(SmtSort s) {
    switch (s) {
        case SmtSort::int_sort: return "Int";
        case SmtSort::real_sort: return "Real";
        case SmtSort::bool_sort: return "Bool";
    }
    return "?";
}

const SmtDecl* SmtScript::find_decl(const std::string& name) const {
    for (const auto& d : declarations)
        if (d.name == name) return &d;
    return nullptr;
}

namespace {

// Minimal s-expression tree.
struct Sexp {
    bool is_list = false;
    std::string atom;
    std::vector<Sexp> items;
    int line = 1, column = 1;
};

struct Reader {
    const std::string& text;
    size_t pos = 0;
    int line = 1, column = 1;
    std::vector<ParseDiagnostic>& diags;

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++pos;
    }

    void skip_ws() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == ';') {
                while (pos < text.size() && text[pos] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    bool read(Sexp& out) {
        skip_ws();
        if (pos >= text.size()) {
            diags.push_back({line, column, "s-expression", "end of input"});
            return false;
        }
        out.line = line;
        out.column = column;
        if (text[pos] == '(') {
            advance();
            out.is_list = true;
            while (true) {
                skip_ws();
                if (pos >= text.size()) {
                    diags.push_back({line, column, "')'", "end of input"});
                    return false;
                }
                if (text[pos] == ')') {
                    advance();
                    return true;
                }
                Sexp child;
                if (!read(child)) return false;
                out.items.push_back(std::move(child));
            }
        }
        if (text[pos] == ')') {
            diags.push_back({line, column, "atom or '('", ")"});
            return false;
        }
        size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')' && text[pos] != ';')
            advance();
        out.atom = text.substr(start, pos - start);
        return true;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }
};

bool parse_numeral(const std::string& s, Rational& out) {
    if (s.empty()) return false;
    size_t i = 0;
    bool neg = false;
    if (s[0] == '-') {
        neg = true;
        i = 1;
        if (s.size() == 1) return false;
    }
    long long whole = 0, frac = 0, scale = 1;
    bool any_digit = false, in_frac = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            if (in_frac) return false;
            in_frac = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        any_digit = true;
        if (in_frac) {
            frac = frac * 10 + (c - '0');
            scale *= 10;
        } else {
            whole = whole * 10 + (c - '0');
        }
    }
    if (!any_digit) return false;
    out = Rational(whole * scale + frac, scale);
    if (neg) out = Rational(0) - out;
    return true;
}

struct TermBuilder {
    const SmtScript& script;
    std::vector<ParseDiagnostic>& diags;

    // Builds a term and reports its sort; nullopt on error.
    std::optional<SmtSort> build(const Sexp& e, SmtTerm& out) {
        if (!e.is_list) {
            if (e.atom == "true" || e.atom == "false") {
                out = SmtTerm::boolean(e.atom == "true");
                return SmtSort::bool_sort;
            }
            Rational r;
            if (parse_numeral(e.atom, r)) {
                out = SmtTerm::num(r);
                return r.is_integer() ? SmtSort::int_sort : SmtSort::real_sort;
            }
            const SmtDecl* d = script.find_decl(e.atom);
            if (!d) {
                diags.push_back({e.line, e.column, "declared constant", e.atom});
                return std::nullopt;
            }
            out = SmtTerm::sym(e.atom);
            return d->sort;
        }
        if (e.items.empty() || e.items[0].is_list) {
            diags.push_back({e.line, e.column, "operator", "("});
            return std::nullopt;
        }
        const std::string& op = e.items[0].atom;
        std::vector<SmtTerm> args;
        std::vector<SmtSort> sorts;
        for (size_t i = 1; i < e.items.size(); ++i) {
            SmtTerm t;
            auto s = build(e.items[i], t);
            if (!s) return std::nullopt;
            args.push_back(std::move(t));
            sorts.push_back(*s);
        }
        auto numeric = [](SmtSort s) {
            return s == SmtSort::int_sort || s == SmtSort::real_sort;
        };
        if (op == "and" || op == "or") {
            if (args.empty()) {
                diags.push_back({e.line, e.column, "at least one argument for " + op, ""});
                return std::nullopt;
            }
            for (size_t i = 0; i < sorts.size(); ++i)
                if (sorts[i] != SmtSort::bool_sort) {
                    diags.push_back({e.line, e.column, "boolean arguments for " + op, ""});
                    return std::nullopt;
                }
            out = SmtTerm::app(op, std::move(args));
            return SmtSort::bool_sort;
        }
        if (op == "not") {
            if (args.size() != 1 || sorts[0] != SmtSort::bool_sort) {
                diags.push_back({e.line, e.column, "one boolean argument for not", ""});
                return std::nullopt;
            }
            out = SmtTerm::app(op, std::move(args));
            return SmtSort::bool_sort;
        }
        if (op == ">" || op == "<" || op == ">=" || op == "<=") {
            if (args.size() != 2 || !numeric(sorts[0]) || !numeric(sorts[1])) {
                diags.push_back({e.line, e.column, "two numeric arguments for " + op, ""});
                return std::nullopt;
            }
            out = SmtTerm::app(op, std::move(args));
            return SmtSort::bool_sort;
        }
        if (op == "=") {
            if (args.size() != 2) {
                diags.push_back({e.line, e.column, "two arguments for =", ""});
                return std::nullopt;
            }
            bool both_numeric = numeric(sorts[0]) && numeric(sorts[1]);
            bool both_bool = sorts[0] == SmtSort::bool_sort && sorts[1] == SmtSort::bool_sort;
            if (!both_numeric && !both_bool) {
                diags.push_back({e.line, e.column, "matching argument sorts for =", ""});
                return std::nullopt;
            }
            out = SmtTerm::app(op, std::move(args));
            return SmtSort::bool_sort;
        }
        diags.push_back({e.line, e.column, "supported operator (and/or/not/>/</>=/<=/=)", op});
        return std::nullopt;
    }
};

}  // namespace

ParseResult<SmtScript> parse_smt(const std::string& text) {
    ParseResult<SmtScript> res;
    SmtScript script;
    Reader reader{text, 0, 1, 1, res.diagnostics};

    while (!reader.at_end()) {
        Sexp cmd;
        if (!reader.read(cmd)) return res;
        if (!cmd.is_list || cmd.items.empty() || cmd.items[0].is_list) {
            res.diagnostics.push_back({cmd.line, cmd.column, "command list", cmd.atom});
            return res;
        }
        const std::string& head = cmd.items[0].atom;
        if (head == "declare-const") {
            if (cmd.items.size() != 3 || cmd.items[1].is_list || cmd.items[2].is_list) {
                res.diagnostics.push_back({cmd.line, cmd.column, "(declare-const name sort)", ""});
                return res;
            }
            SmtDecl d;
            d.name = cmd.items[1].atom;
            const std::string& sort = cmd.items[2].atom;
            if (sort == "Int")
                d.sort = SmtSort::int_sort;
            else if (sort == "Real")
                d.sort = SmtSort::real_sort;
            else if (sort == "Bool")
                d.sort = SmtSort::bool_sort;
            else {
                res.diagnostics.push_back(
                    {cmd.items[2].line, cmd.items[2].column, "Int, Real or Bool", sort});
                return res;
            }
            if (script.find_decl(d.name)) {
                res.diagnostics.push_back(
                    {cmd.items[1].line, cmd.items[1].column, "fresh constant name", d.name});
                return res;
            }
            script.declarations.push_back(std::move(d));
            continue;
        }
        if (head == "assert") {
            if (cmd.items.size() != 2) {
                res.diagnostics.push_back({cmd.line, cmd.column, "(assert term)", ""});
                return res;
            }
            SmtTerm t;
            TermBuilder builder{script, res.diagnostics};
            auto sort = builder.build(cmd.items[1], t);
            if (!sort) return res;
            if (*sort != SmtSort::bool_sort) {
                res.diagnostics.push_back(
                    {cmd.items[1].line, cmd.items[1].column, "boolean assertion", ""});
                return res;
            }
            script.assertions.push_back(std::move(t));
            continue;
        }
        if (head == "check-sat") {
            if (cmd.items.size() != 1) {
                res.diagnostics.push_back({cmd.line, cmd.column, "(check-sat)", ""});
                return res;
            }
            ++script.check_sat_count;
            continue;
        }
        res.diagnostics.push_back(
            {cmd.line, cmd.column, "declare-const, assert or check-sat", head});
        return res;
    }

    if (script.check_sat_count != 1) {
        res.diagnostics.push_back(
            {1, 1, "exactly one (check-sat)", std::to_string(script.check_sat_count)});
        return res;
    }

    res.value = std::move(script);
    return res;
}

std::string to_string(const SmtTerm& t) {
    switch (t.kind) {
        case SmtTerm::Kind::symbol: return t.symbol;
        case SmtTerm::Kind::numeral: return t.number.str();
        case SmtTerm::Kind::boolean: return t.boolean_value ? "true" : "false";
        case SmtTerm::Kind::app: {
            std::string out = "(" + t.op;
            for (const auto& a : t.args) out += " " + to_string(a);
            return out + ")";
        }
    }
    return "?";
}

std::string pretty_print(const SmtScript& s) {
    std::ostringstream os;
    for (const auto& d : s.declarations)
        os << "(declare-const " << d.name << " " << to_string(d.sort) << ")\n";
    for (const auto& a : s.assertions) os << "(assert " << to_string(a) << ")\n";
    os << "(check-sat)\n";
    return os.str();
}

}  // namespace nsr::lang
