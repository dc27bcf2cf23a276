#include "nsr/lang/fol.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace nsr::lang {

bool is_fol_variable(const std::string& name) {
    return name.size() == 1 &&
           (name == "x" || name == "y" || name == "z" || name == "w");
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

enum class Tok { lparen, rparen, comma, tnot, tand, tor, timplies, tiff, tforall, texists, ident, end };

struct Token {
    Tok kind;
    std::string text;
    int column;
};

bool tokenize(const std::string& s, int line, std::vector<Token>& out,
              std::vector<ParseDiagnostic>& diags) {
    size_t i = 0;
    auto push = [&](Tok k, std::string t, size_t col) { out.push_back({k, std::move(t), static_cast<int>(col) + 1}); };
    while (i < s.size()) {
        char c = s[i];
        if (c == ' ' || c == '\t') {
            ++i;
            continue;
        }
        size_t col = i;
        // Unicode connectives.
        if (s.compare(i, 3, "\xE2\x88\x80") == 0) { push(Tok::tforall, "forall", col); i += 3; continue; }
        if (s.compare(i, 3, "\xE2\x88\x83") == 0) { push(Tok::texists, "exists", col); i += 3; continue; }
        if (s.compare(i, 2, "\xC2\xAC") == 0) { push(Tok::tnot, "~", col); i += 2; continue; }
        if (s.compare(i, 3, "\xE2\x88\xA7") == 0) { push(Tok::tand, "&", col); i += 3; continue; }
        if (s.compare(i, 3, "\xE2\x88\xA8") == 0) { push(Tok::tor, "|", col); i += 3; continue; }
        if (s.compare(i, 3, "\xE2\x86\x92") == 0) { push(Tok::timplies, "->", col); i += 3; continue; }
        if (s.compare(i, 3, "\xE2\x86\x94") == 0) { push(Tok::tiff, "<->", col); i += 3; continue; }
        if (s.compare(i, 3, "<->") == 0) { push(Tok::tiff, "<->", col); i += 3; continue; }
        if (s.compare(i, 2, "->") == 0) { push(Tok::timplies, "->", col); i += 2; continue; }
        switch (c) {
            case '(': push(Tok::lparen, "(", col); ++i; continue;
            case ')': push(Tok::rparen, ")", col); ++i; continue;
            case ',': push(Tok::comma, ",", col); ++i; continue;
            case '~': push(Tok::tnot, "~", col); ++i; continue;
            case '&': push(Tok::tand, "&", col); ++i; continue;
            case '|': push(Tok::tor, "|", col); ++i; continue;
            default: break;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t a = i;
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                ++i;
            std::string word = s.substr(a, i - a);
            if (word == "forall")
                push(Tok::tforall, word, col);
            else if (word == "exists")
                push(Tok::texists, word, col);
            else
                push(Tok::ident, word, col);
            continue;
        }
        diags.push_back({line, static_cast<int>(i) + 1, "formula token", s.substr(i, 4)});
        return false;
    }
    out.push_back({Tok::end, "", static_cast<int>(s.size()) + 1});
    return true;
}

class FormulaParser {
public:
    FormulaParser(std::vector<Token> toks, int line, std::vector<ParseDiagnostic>& diags)
        : toks_(std::move(toks)), line_(line), diags_(diags) {}

    bool parse(FolFormula& out) {
        if (!parse_iff(out)) return false;
        if (peek().kind != Tok::end) {
            error("end of formula");
            return false;
        }
        return true;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_++]; }
    void error(const std::string& expected) {
        diags_.push_back({line_, peek().column, expected,
                          peek().kind == Tok::end ? "end of line" : peek().text});
    }

    bool parse_iff(FolFormula& out) {
        if (!parse_implies(out)) return false;
        while (peek().kind == Tok::tiff) {
            take();
            FolFormula rhs;
            if (!parse_implies(rhs)) return false;
            out = FolFormula::binary(FolFormula::Kind::iff, std::move(out), std::move(rhs));
        }
        return true;
    }

    bool parse_implies(FolFormula& out) {
        if (!parse_or(out)) return false;
        if (peek().kind == Tok::timplies) {
            take();
            FolFormula rhs;
            if (!parse_implies(rhs)) return false;  // right-associative
            out = FolFormula::binary(FolFormula::Kind::implies, std::move(out), std::move(rhs));
        }
        return true;
    }

    bool parse_or(FolFormula& out) {
        if (!parse_and(out)) return false;
        while (peek().kind == Tok::tor) {
            take();
            FolFormula rhs;
            if (!parse_and(rhs)) return false;
            out = FolFormula::binary(FolFormula::Kind::logical_or, std::move(out), std::move(rhs));
        }
        return true;
    }

    bool parse_and(FolFormula& out) {
        if (!parse_unary(out)) return false;
        while (peek().kind == Tok::tand) {
            take();
            FolFormula rhs;
            if (!parse_unary(rhs)) return false;
            out = FolFormula::binary(FolFormula::Kind::logical_and, std::move(out), std::move(rhs));
        }
        return true;
    }

    bool parse_unary(FolFormula& out) {
        if (peek().kind == Tok::tnot) {
            take();
            FolFormula inner;
            if (!parse_unary(inner)) return false;
            out = FolFormula::unary(FolFormula::Kind::logical_not, std::move(inner));
            return true;
        }
        if (peek().kind == Tok::tforall || peek().kind == Tok::texists) {
            bool universal = take().kind == Tok::tforall;
            if (peek().kind != Tok::ident || !is_fol_variable(peek().text)) {
                error("quantified variable (x, y, z or w)");
                return false;
            }
            std::string var = take().text;
            FolFormula body;
            if (!parse_unary(body)) return false;
            out = FolFormula::quantified(
                universal ? FolFormula::Kind::forall : FolFormula::Kind::exists,
                std::move(var), std::move(body));
            return true;
        }
        if (peek().kind == Tok::lparen) {
            take();
            if (!parse_iff(out)) return false;
            if (peek().kind != Tok::rparen) {
                error("')'");
                return false;
            }
            take();
            return true;
        }
        return parse_atom(out);
    }

    bool parse_atom(FolFormula& out) {
        if (peek().kind != Tok::ident) {
            error("atom");
            return false;
        }
        Token name = take();
        if (!std::isupper(static_cast<unsigned char>(name.text[0]))) {
            diags_.push_back({line_, name.column, "capitalized predicate name", name.text});
            return false;
        }
        if (peek().kind != Tok::lparen) {
            error("'('");
            return false;
        }
        take();
        std::vector<std::string> args;
        while (true) {
            if (peek().kind != Tok::ident) {
                error("term");
                return false;
            }
            Token term = take();
            if (std::isupper(static_cast<unsigned char>(term.text[0]))) {
                diags_.push_back({line_, term.column, "lowercase constant or variable", term.text});
                return false;
            }
            args.push_back(term.text);
            if (peek().kind == Tok::comma) {
                take();
                continue;
            }
            break;
        }
        if (peek().kind != Tok::rparen) {
            error("')'");
            return false;
        }
        take();
        out = FolFormula::make_atom(name.text, std::move(args));
        return true;
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
    int line_;
    std::vector<ParseDiagnostic>& diags_;
};

void collect_free_vars(const FolFormula& f, std::set<std::string>& bound,
                       std::set<std::string>& free) {
    switch (f.kind) {
        case FolFormula::Kind::atom:
            for (const auto& a : f.args)
                if (is_fol_variable(a) && !bound.count(a)) free.insert(a);
            break;
        case FolFormula::Kind::forall:
        case FolFormula::Kind::exists: {
            bool was_bound = bound.count(f.name) > 0;
            bound.insert(f.name);
            collect_free_vars(f.children[0], bound, free);
            if (!was_bound) bound.erase(f.name);
            break;
        }
        default:
            for (const auto& c : f.children) collect_free_vars(c, bound, free);
            break;
    }
}

void check_formula(const FolFormula& f, const std::map<std::string, int>& decls, int line,
                   std::vector<ParseDiagnostic>& diags) {
    if (f.kind == FolFormula::Kind::atom) {
        auto it = decls.find(f.name);
        if (it == decls.end())
            diags.push_back({line, 1, "declared predicate", f.name});
        else if (it->second != static_cast<int>(f.args.size()))
            diags.push_back({line, 1,
                             "arity " + std::to_string(it->second) + " for " + f.name,
                             std::to_string(f.args.size()) + " arguments"});
    }
    for (const auto& c : f.children) check_formula(c, decls, line, diags);
}

}  // namespace

ParseResult<FolProgram> parse_fol(const std::string& text) {
    ParseResult<FolProgram> res;
    FolProgram p;
    std::vector<ParseDiagnostic>& diags = res.diagnostics;

    enum class Section { none, predicates, premises, conclusions };
    Section sec = Section::none;
    bool saw_predicates = false;
    int conclusion_count = 0;

    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string t = trim(raw);
        if (t.empty()) continue;
        if (t == "Predicates:") { sec = Section::predicates; saw_predicates = true; continue; }
        if (t == "Premises:") { sec = Section::premises; continue; }
        if (t == "Conclusions:") { sec = Section::conclusions; continue; }
        if (sec == Section::none) {
            diags.push_back({line_no, 1, "section header (Predicates:/Premises:/Conclusions:)", t});
            continue;
        }

        std::string body = t, gloss;
        if (size_t g = t.find(":::"); g != std::string::npos) {
            body = trim(t.substr(0, g));
            gloss = trim(t.substr(g + 3));
        }

        if (sec == Section::predicates) {
            std::vector<Token> toks;
            if (!tokenize(body, line_no, toks, diags)) continue;
            // Declaration shape: Name(x, y)
            if (toks.size() < 4 || toks[0].kind != Tok::ident ||
                !std::isupper(static_cast<unsigned char>(toks[0].text[0])) ||
                toks[1].kind != Tok::lparen) {
                diags.push_back({line_no, 1, "predicate declaration 'Name(x)'", body});
                continue;
            }
            int arity = 0;
            bool bad = false;
            size_t i = 2;
            while (i < toks.size() && toks[i].kind != Tok::rparen) {
                if (toks[i].kind != Tok::ident) { bad = true; break; }
                ++arity;
                ++i;
                if (i < toks.size() && toks[i].kind == Tok::comma) ++i;
            }
            if (bad || i >= toks.size() || arity == 0) {
                diags.push_back({line_no, 1, "predicate declaration 'Name(x)'", body});
                continue;
            }
            p.predicates.push_back({toks[0].text, arity, gloss});
            continue;
        }

        std::vector<Token> toks;
        if (!tokenize(body, line_no, toks, diags)) continue;
        FormulaParser fp(std::move(toks), line_no, diags);
        FolFormula f;
        if (!fp.parse(f)) continue;
        std::set<std::string> bound, free;
        collect_free_vars(f, bound, free);
        for (const auto& v : free)
            diags.push_back({line_no, 1, "closed formula (no free variables)", v});
        if (sec == Section::premises) {
            p.premises.push_back({std::move(f), gloss});
        } else {
            ++conclusion_count;
            p.conclusion = {std::move(f), gloss};
        }
    }

    if (!saw_predicates) diags.push_back({1, 1, "'Predicates:' section", ""});
    if (conclusion_count != 1)
        diags.push_back({1, 1, "exactly one conclusion", std::to_string(conclusion_count)});

    if (!diags.empty()) return res;

    std::map<std::string, int> decls;
    for (const auto& d : p.predicates) decls[d.name] = d.arity;
    for (const auto& st : p.premises) check_formula(st.formula, decls, 1, diags);
    check_formula(p.conclusion.formula, decls, 1, diags);

    if (diags.empty()) res.value = std::move(p);
    return res;
}

std::string to_string(const FolFormula& f) {
    using K = FolFormula::Kind;
    switch (f.kind) {
        case K::atom: {
            std::string out = f.name + "(";
            for (size_t i = 0; i < f.args.size(); ++i) {
                if (i) out += ", ";
                out += f.args[i];
            }
            return out + ")";
        }
        case K::logical_not:
            return "~" + (f.children[0].kind == K::atom
                              ? to_string(f.children[0])
                              : "(" + to_string(f.children[0]) + ")");
        case K::logical_and:
            return "(" + to_string(f.children[0]) + " & " + to_string(f.children[1]) + ")";
        case K::logical_or:
            return "(" + to_string(f.children[0]) + " | " + to_string(f.children[1]) + ")";
        case K::implies:
            return "(" + to_string(f.children[0]) + " -> " + to_string(f.children[1]) + ")";
        case K::iff:
            return "(" + to_string(f.children[0]) + " <-> " + to_string(f.children[1]) + ")";
        case K::forall:
            return "forall " + f.name + " (" + to_string(f.children[0]) + ")";
        case K::exists:
            return "exists " + f.name + " (" + to_string(f.children[0]) + ")";
    }
    return "?";
}

std::string pretty_print(const FolProgram& p) {
    std::ostringstream os;
    os << "Predicates:\n";
    for (const auto& d : p.predicates) {
        os << d.name << "(";
        for (int i = 0; i < d.arity; ++i) {
            if (i) os << ", ";
            os << static_cast<char>('x' + i % 3);
        }
        os << ")";
        if (!d.gloss.empty()) os << " ::: " << d.gloss;
        os << "\n";
    }
    os << "\nPremises:\n";
    for (const auto& st : p.premises) {
        os << to_string(st.formula);
        if (!st.gloss.empty()) os << " ::: " << st.gloss;
        os << "\n";
    }
    os << "\nConclusions:\n" << to_string(p.conclusion.formula);
    if (!p.conclusion.gloss.empty()) os << " ::: " << p.conclusion.gloss;
    os << "\n";
    return os.str();
}

}  // namespace nsr::lang
