#include "nsr/lang/lp.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace nsr::lang {

std::string ParseDiagnostic::message() const {
    std::ostringstream os;
    os << "line " << line << ", col " << column << ": expected " << expected;
    if (!found.empty()) os << ", found '" << found << "'";
    return os.str();
}

namespace {

struct Line {
    int number;
    std::string text;
};

std::vector<Line> split_lines(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream is(text);
    std::string l;
    int n = 0;
    while (std::getline(is, l)) {
        ++n;
        if (!l.empty() && l.back() == '\r') l.pop_back();
        lines.push_back({n, l});
    }
    return lines;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

// Parses "name(arg, ..., True|False)" starting at pos; advances pos past it.
bool parse_atom_text(const std::string& s, size_t& pos, int line, LpAtom& out,
                     std::vector<ParseDiagnostic>& diags) {
    auto fail = [&](const std::string& what) {
        std::string found = pos < s.size() ? s.substr(pos, 12) : "end of line";
        diags.push_back({line, static_cast<int>(pos) + 1, what, found});
        return false;
    };
    while (pos < s.size() && s[pos] == ' ') ++pos;
    size_t start = pos;
    while (pos < s.size() && is_ident_char(s[pos]) && s[pos] != '$') ++pos;
    if (pos == start) return fail("predicate name");
    out.predicate = s.substr(start, pos - start);
    if (pos >= s.size() || s[pos] != '(') return fail("'('");
    ++pos;
    std::vector<std::string> raw;
    while (true) {
        while (pos < s.size() && s[pos] == ' ') ++pos;
        size_t a = pos;
        while (pos < s.size() && is_ident_char(s[pos])) ++pos;
        if (pos == a) return fail("argument");
        raw.push_back(s.substr(a, pos - a));
        while (pos < s.size() && s[pos] == ' ') ++pos;
        if (pos < s.size() && s[pos] == ',') {
            ++pos;
            continue;
        }
        break;
    }
    if (pos >= s.size() || s[pos] != ')') return fail("')'");
    ++pos;
    if (raw.empty()) return fail("boolean slot");
    const std::string& last = raw.back();
    if (last == "True")
        out.value = true;
    else if (last == "False")
        out.value = false;
    else
        return fail("True or False in the last argument slot");
    raw.pop_back();
    out.args = std::move(raw);
    return true;
}

}  // namespace

ParseResult<LpProgram> parse_lp(const std::string& text) {
    ParseResult<LpProgram> res;
    LpProgram p;
    std::vector<ParseDiagnostic>& diags = res.diagnostics;

    enum class Section { none, predicates, facts, rules, query };
    Section sec = Section::none;
    bool saw_predicates = false, saw_query_header = false;
    int query_count = 0;

    for (const Line& ln : split_lines(text)) {
        std::string t = trim(ln.text);
        if (t.empty()) continue;
        if (t == "Predicates:") {
            sec = Section::predicates;
            saw_predicates = true;
            continue;
        }
        if (t == "Facts:") {
            sec = Section::facts;
            continue;
        }
        if (t == "Rules:") {
            sec = Section::rules;
            continue;
        }
        if (t == "Query:") {
            sec = Section::query;
            saw_query_header = true;
            continue;
        }
        if (sec == Section::none) {
            diags.push_back({ln.number, 1, "section header (Predicates:/Facts:/Rules:/Query:)", t});
            continue;
        }

        std::string body = t, gloss;
        if (size_t g = t.find(":::"); g != std::string::npos) {
            body = trim(t.substr(0, g));
            gloss = trim(t.substr(g + 3));
        }

        size_t pos = 0;
        switch (sec) {
            case Section::predicates: {
                LpPredicateDecl d;
                // Declaration form: name($x, ..., bool)
                size_t start = pos;
                while (pos < body.size() && is_ident_char(body[pos]) && body[pos] != '$') ++pos;
                if (pos == start || pos >= body.size() || body[pos] != '(') {
                    diags.push_back({ln.number, 1, "predicate declaration 'name($x, bool)'", body});
                    break;
                }
                d.name = body.substr(start, pos - start);
                ++pos;
                int args = 0;
                bool saw_bool = false, bad = false;
                while (pos < body.size() && body[pos] != ')') {
                    while (pos < body.size() && (body[pos] == ' ' || body[pos] == ',')) ++pos;
                    size_t a = pos;
                    while (pos < body.size() && is_ident_char(body[pos])) ++pos;
                    if (pos == a) {
                        bad = true;
                        break;
                    }
                    std::string arg = body.substr(a, pos - a);
                    if (arg == "bool")
                        saw_bool = true;
                    else if (saw_bool)
                        bad = true;  // bool must be the last slot
                    else
                        ++args;
                    while (pos < body.size() && body[pos] == ' ') ++pos;
                }
                if (bad || !saw_bool || pos >= body.size()) {
                    diags.push_back(
                        {ln.number, 1, "declaration with trailing bool slot", body});
                    break;
                }
                d.arity = args;
                d.gloss = gloss;
                p.predicates.push_back(std::move(d));
                break;
            }
            case Section::facts: {
                LpAtom a;
                if (!parse_atom_text(body, pos, ln.number, a, diags)) break;
                p.facts.push_back({std::move(a), gloss});
                break;
            }
            case Section::rules: {
                LpRule r;
                LpAtom a;
                if (!parse_atom_text(body, pos, ln.number, a, diags)) break;
                r.antecedents.push_back(std::move(a));
                while (true) {
                    while (pos < body.size() && body[pos] == ' ') ++pos;
                    if (body.compare(pos, 2, "&&") == 0) {
                        pos += 2;
                        LpAtom b;
                        if (!parse_atom_text(body, pos, ln.number, b, diags)) break;
                        r.antecedents.push_back(std::move(b));
                        continue;
                    }
                    break;
                }
                while (pos < body.size() && body[pos] == ' ') ++pos;
                if (body.compare(pos, 3, ">>>") != 0) {
                    diags.push_back({ln.number, static_cast<int>(pos) + 1, "'>>>'",
                                     pos < body.size() ? body.substr(pos, 8) : "end of line"});
                    break;
                }
                pos += 3;
                if (!parse_atom_text(body, pos, ln.number, r.consequent, diags)) break;
                r.gloss = gloss;
                p.rules.push_back(std::move(r));
                break;
            }
            case Section::query: {
                LpAtom a;
                if (!parse_atom_text(body, pos, ln.number, a, diags)) break;
                ++query_count;
                p.query = std::move(a);
                p.query_gloss = gloss;
                break;
            }
            case Section::none: break;
        }
    }

    if (!saw_predicates) diags.push_back({1, 1, "'Predicates:' section", ""});
    if (!saw_query_header || query_count == 0)
        diags.push_back({1, 1, "'Query:' section with one query atom", ""});
    if (query_count > 1) diags.push_back({1, 1, "exactly one query atom", ""});

    if (!diags.empty()) return res;

    // Semantic checks.
    std::map<std::string, int> decl;
    for (const auto& d : p.predicates) decl[d.name] = d.arity;
    auto check_atom = [&](const LpAtom& a, const char* where) {
        auto it = decl.find(a.predicate);
        if (it == decl.end()) {
            diags.push_back({1, 1, std::string("declared predicate in ") + where, a.predicate});
        } else if (it->second != static_cast<int>(a.args.size())) {
            diags.push_back({1, 1,
                             std::string("arity ") + std::to_string(it->second) + " for " +
                                 a.predicate + " in " + where,
                             std::to_string(a.args.size()) + " arguments"});
        }
    };
    for (const auto& f : p.facts) {
        check_atom(f.atom, "fact");
        for (const auto& arg : f.atom.args)
            if (!arg.empty() && arg[0] == '$')
                diags.push_back({1, 1, "ground fact", arg});
    }
    for (const auto& r : p.rules) {
        std::set<std::string> bound;
        for (const auto& a : r.antecedents) {
            check_atom(a, "rule antecedent");
            for (const auto& arg : a.args)
                if (!arg.empty() && arg[0] == '$') bound.insert(arg);
        }
        check_atom(r.consequent, "rule consequent");
        for (const auto& arg : r.consequent.args)
            if (!arg.empty() && arg[0] == '$' && !bound.count(arg))
                diags.push_back({1, 1, "consequent variable bound in antecedent", arg});
    }
    check_atom(p.query, "query");
    for (const auto& arg : p.query.args)
        if (!arg.empty() && arg[0] == '$')
            diags.push_back({1, 1, "ground query", arg});

    if (diags.empty()) res.value = std::move(p);
    return res;
}

std::string to_string(const LpAtom& a) {
    std::string out = a.predicate + "(";
    for (const auto& arg : a.args) out += arg + ", ";
    out += a.value ? "True)" : "False)";
    return out;
}

std::string pretty_print(const LpProgram& p) {
    std::ostringstream os;
    os << "Predicates:\n";
    for (const auto& d : p.predicates) {
        os << d.name << "(";
        for (int i = 0; i < d.arity; ++i) os << "$" << static_cast<char>('x' + i % 3) << ", ";
        os << "bool)";
        if (!d.gloss.empty()) os << " ::: " << d.gloss;
        os << "\n";
    }
    os << "\nFacts:\n";
    for (const auto& f : p.facts) {
        os << to_string(f.atom);
        if (!f.gloss.empty()) os << " ::: " << f.gloss;
        os << "\n";
    }
    os << "\nRules:\n";
    for (const auto& r : p.rules) {
        for (size_t i = 0; i < r.antecedents.size(); ++i) {
            if (i) os << " && ";
            os << to_string(r.antecedents[i]);
        }
        os << " >>> " << to_string(r.consequent);
        if (!r.gloss.empty()) os << " ::: " << r.gloss;
        os << "\n";
    }
    os << "\nQuery:\n" << to_string(p.query);
    if (!p.query_gloss.empty()) os << " ::: " << p.query_gloss;
    os << "\n";
    return os.str();
}

}  // namespace nsr::lang
