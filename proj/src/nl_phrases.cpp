#include <algorithm>
#include <cctype>
#include <sstream>

#include "nl_phrases.hpp"

namespace nsr::phrases {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Sentences end at a '.' followed by whitespace or end of text; a '.'
// between digits is a decimal point.
std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> out;
    std::string current;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            bool decimal = i + 1 < text.size() && isdigit(static_cast<unsigned char>(text[i + 1]));
            if (!decimal) {
                std::string t = trim(current);
                if (!t.empty()) out.push_back(t);
                current.clear();
                continue;
            }
        }
        current.push_back(c);
    }
    std::string t = trim(current);
    if (!t.empty()) out.push_back(t);
    return out;
}

std::vector<std::string> tokens_of(const std::string& sentence) {
    std::vector<std::string> out;
    std::stringstream ss(sentence);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

std::string capitalize(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(toupper(static_cast<unsigned char>(s[0])));
    return s;
}

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(tolower(static_cast<unsigned char>(c)));
    return s;
}

bool is_article(const std::string& t) { return t == "a" || t == "an"; }

void fail(std::string* error, const std::string& message) {
    if (error) *error = message;
}

const char* kNumberWords[] = {"zero", "one", "two",   "three", "four",
                              "five", "six", "seven", "eight", "nine"};

std::string number_word(long long n) {
    if (n >= 0 && n <= 9) return kNumberWords[n];
    return std::to_string(n);
}

const std::vector<std::pair<std::string, long long>>& ordinal_words() {
    static const std::vector<std::pair<std::string, long long>> words = {
        {"first", 1}, {"second", 2}, {"third", 3},   {"fourth", 4}, {"fifth", 5},
        {"sixth", 6}, {"seventh", 7}, {"eighth", 8}, {"ninth", 9},
    };
    return words;
}

std::string ordinal_word(long long k) {
    for (const auto& [w, v] : ordinal_words())
        if (v == k) return w;
    return std::to_string(k) + "th";
}

std::optional<long long> ordinal_value(const std::string& word) {
    for (const auto& [w, v] : ordinal_words())
        if (w == word) return v;
    return std::nullopt;
}

// Oxford-comma name list: "A", "A and B", "A, B, and C".
std::string name_list(const std::vector<std::string>& names) {
    std::string out;
    for (size_t i = 0; i < names.size(); ++i) {
        if (i > 0) out += names.size() == 2 ? " and " : ", ";
        if (i + 1 == names.size() && names.size() > 2) out += "and ";
        out += names[i];
    }
    return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
    std::vector<std::string> out;
    std::string rest = text;
    size_t pos;
    while ((pos = rest.find(',')) != std::string::npos) {
        out.push_back(trim(rest.substr(0, pos)));
        rest = trim(rest.substr(pos + 1));
    }
    if (rest.rfind("and ", 0) == 0) rest = trim(rest.substr(4));
    size_t and_pos = rest.find(" and ");
    if (and_pos != std::string::npos) {
        out.push_back(trim(rest.substr(0, and_pos)));
        rest = trim(rest.substr(and_pos + 5));
    }
    if (!rest.empty()) out.push_back(rest);
    return out;
}

std::optional<lang::Rational> parse_number(const std::string& token) {
    if (token.empty()) return std::nullopt;
    size_t i = 0;
    bool negative = false;
    if (token[0] == '-') {
        negative = true;
        i = 1;
    }
    long long whole = 0, frac = 0, den = 1;
    bool any = false, in_frac = false;
    for (; i < token.size(); ++i) {
        char c = token[i];
        if (c == '.') {
            if (in_frac) return std::nullopt;
            in_frac = true;
            continue;
        }
        if (!isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        any = true;
        if (in_frac) {
            frac = frac * 10 + (c - '0');
            den *= 10;
        } else {
            whole = whole * 10 + (c - '0');
        }
    }
    if (!any) return std::nullopt;
    lang::Rational r(whole * den + frac, den);
    if (negative) r = lang::Rational(0) - r;
    return r;
}

}  // namespace

// --- LP ---

std::string lp_fact_sentence(const std::string& name, const std::string& cls) {
    return name + " is a " + cls + ".";
}

std::string lp_rule_sentence(const std::string& a, const std::string& b, bool b_is_class,
                             bool positive) {
    std::string s = "Every " + a + " is ";
    if (!positive) s += "not ";
    if (b_is_class) s += "a ";
    return s + b + ".";
}

std::string lp_query_sentence(const std::string& name, const std::string& pred,
                              bool is_class, bool positive) {
    std::string s = name + " is ";
    if (!positive) s += "not ";
    if (is_class) s += "a ";
    return s + pred + ".";
}

namespace {

struct LpBuilder {
    std::vector<lang::LpPredicateDecl> predicates;

    void declare(const std::string& name, bool is_class) {
        for (const auto& p : predicates)
            if (p.name == name) return;
        std::string gloss = is_class ? "Is x a " + name + "?" : "Is x " + name + "?";
        predicates.push_back({name, 1, gloss});
    }
};

}  // namespace

std::optional<lang::LpProgram> lp_from_nl(const std::string& premise,
                                          const std::string& hypothesis,
                                          std::string* error) {
    lang::LpProgram program;
    LpBuilder builder;

    for (const auto& sentence : split_sentences(premise)) {
        auto toks = tokens_of(sentence);
        if (toks.size() >= 4 && toks[0] == "Every" && toks[2] == "is") {
            const std::string& antecedent = toks[1];
            size_t i = 3;
            bool positive = true;
            if (i < toks.size() && toks[i] == "not") {
                positive = false;
                ++i;
            }
            bool is_class = i < toks.size() && is_article(toks[i]);
            if (is_class) ++i;
            if (i + 1 != toks.size()) {
                fail(error, "unrecognized rule sentence: " + sentence);
                return std::nullopt;
            }
            const std::string& consequent = toks[i];
            builder.declare(antecedent, true);
            builder.declare(consequent, is_class);
            lang::LpRule rule;
            rule.antecedents.push_back({antecedent, {"$x"}, true});
            rule.consequent = {consequent, {"$x"}, positive};
            rule.gloss = sentence + ".";
            program.rules.push_back(std::move(rule));
        } else if (toks.size() == 4 && toks[1] == "is" && is_article(toks[2])) {
            builder.declare(toks[3], true);
            program.facts.push_back({{toks[3], {toks[0]}, true}, sentence + "."});
        } else {
            fail(error, "unrecognized premise sentence: " + sentence);
            return std::nullopt;
        }
    }

    auto query_sentences = split_sentences(hypothesis);
    if (query_sentences.size() != 1) {
        fail(error, "hypothesis must be a single sentence");
        return std::nullopt;
    }
    auto toks = tokens_of(query_sentences[0]);
    if (toks.size() < 3 || toks[1] != "is") {
        fail(error, "unrecognized hypothesis: " + query_sentences[0]);
        return std::nullopt;
    }
    size_t i = 2;
    bool positive = true;
    if (toks[i] == "not") {
        positive = false;
        ++i;
    }
    bool is_class = i < toks.size() && is_article(toks[i]);
    if (is_class) ++i;
    if (i + 1 != toks.size()) {
        fail(error, "unrecognized hypothesis: " + query_sentences[0]);
        return std::nullopt;
    }
    builder.declare(toks[i], is_class);
    program.query = {toks[i], {toks[0]}, positive};
    program.query_gloss = query_sentences[0] + ".";
    program.predicates = std::move(builder.predicates);
    return program;
}

// --- FOL ---

std::string fol_all_sentence(const std::string& a, const std::string& b) {
    return "All " + a + "s are " + b + "s.";
}

std::string fol_no_sentence(const std::string& a, const std::string& b) {
    return "No " + a + "s are " + b + "s.";
}

std::string fol_some_sentence(const std::string& a, const std::string& b, bool positive) {
    return "Some " + a + "s are " + (positive ? "" : "not ") + b + "s.";
}

std::string fol_fact_sentence(const std::string& name, const std::string& cls,
                              bool positive) {
    return capitalize(name) + " is " + (positive ? "a " : "not a ") + cls + ".";
}

std::string fol_neither_sentence(const std::string& name, const std::string& a,
                                 const std::string& b) {
    return capitalize(name) + " is neither a " + a + " nor a " + b + ".";
}

namespace {

struct FolBuilder {
    std::vector<lang::FolPredicateDecl> predicates;

    // Class words arrive as plural or singular lowercase nouns.
    std::string declare_plural(const std::string& plural) {
        std::string singular = plural;
        if (!singular.empty() && singular.back() == 's') singular.pop_back();
        return declare_singular(singular);
    }
    std::string declare_singular(const std::string& singular) {
        std::string pred = capitalize(singular);
        for (const auto& p : predicates)
            if (p.name == pred) return pred;
        predicates.push_back({pred, 1, "x is a " + singular + "."});
        return pred;
    }
};

std::optional<lang::FolFormula> fol_sentence_formula(const std::string& sentence,
                                                     FolBuilder& builder,
                                                     std::string* error) {
    using F = lang::FolFormula;
    auto toks = tokens_of(sentence);
    if (toks.size() == 4 && (toks[0] == "All" || toks[0] == "No") && toks[2] == "are") {
        std::string a = builder.declare_plural(lowercase(toks[1]));
        std::string b = builder.declare_plural(lowercase(toks[3]));
        F body = F::make_atom(b, {"x"});
        if (toks[0] == "No") body = F::unary(F::Kind::logical_not, std::move(body));
        return F::quantified(F::Kind::forall, "x",
                             F::binary(F::Kind::implies, F::make_atom(a, {"x"}),
                                       std::move(body)));
    }
    if ((toks.size() == 4 || toks.size() == 5) && toks[0] == "Some" && toks[2] == "are") {
        bool positive = toks.size() == 4;
        if (!positive && toks[3] != "not") {
            fail(error, "unrecognized sentence: " + sentence);
            return std::nullopt;
        }
        std::string a = builder.declare_plural(lowercase(toks[1]));
        std::string b = builder.declare_plural(lowercase(toks.back()));
        F body = F::make_atom(b, {"x"});
        if (!positive) body = F::unary(F::Kind::logical_not, std::move(body));
        return F::quantified(F::Kind::exists, "x",
                             F::binary(F::Kind::logical_and, F::make_atom(a, {"x"}),
                                       std::move(body)));
    }
    if (toks.size() >= 4 && toks[1] == "is" && toks[2] == "neither") {
        // "{Name} is neither a {A} nor a {B}."
        if (toks.size() != 8 || !is_article(toks[3]) || toks[5] != "nor" ||
            !is_article(toks[6])) {
            fail(error, "unrecognized sentence: " + sentence);
            return std::nullopt;
        }
        std::string c = lowercase(toks[0]);
        std::string a = builder.declare_singular(lowercase(toks[4]));
        std::string b = builder.declare_singular(lowercase(toks[7]));
        return F::binary(F::Kind::logical_and,
                         F::unary(F::Kind::logical_not, F::make_atom(a, {c})),
                         F::unary(F::Kind::logical_not, F::make_atom(b, {c})));
    }
    if (toks.size() >= 4 && toks[1] == "is") {
        size_t i = 2;
        bool positive = true;
        if (toks[i] == "not") {
            positive = false;
            ++i;
        }
        if (i + 2 != toks.size() || !is_article(toks[i])) {
            fail(error, "unrecognized sentence: " + sentence);
            return std::nullopt;
        }
        std::string c = lowercase(toks[0]);
        std::string a = builder.declare_singular(lowercase(toks[i + 1]));
        F atom = F::make_atom(a, {c});
        if (!positive) return F::unary(F::Kind::logical_not, std::move(atom));
        return atom;
    }
    fail(error, "unrecognized sentence: " + sentence);
    return std::nullopt;
}

}  // namespace

std::optional<lang::FolProgram> fol_from_nl(const std::string& premise,
                                            const std::string& hypothesis,
                                            std::string* error) {
    lang::FolProgram program;
    FolBuilder builder;
    for (const auto& sentence : split_sentences(premise)) {
        auto f = fol_sentence_formula(sentence, builder, error);
        if (!f) return std::nullopt;
        program.premises.push_back({std::move(*f), sentence + "."});
    }
    auto conclusion_sentences = split_sentences(hypothesis);
    if (conclusion_sentences.size() != 1) {
        fail(error, "hypothesis must be a single sentence");
        return std::nullopt;
    }
    auto f = fol_sentence_formula(conclusion_sentences[0], builder, error);
    if (!f) return std::nullopt;
    program.conclusion = {std::move(*f), conclusion_sentences[0] + "."};
    program.predicates = std::move(builder.predicates);
    return program;
}

// --- CSP ---

namespace {

const std::string kGolfListMarker = "golfers: ";
const std::string kShelfListMarker = "left to right: ";

std::string shelf_item(const std::string& member) {
    return "a " + lowercase(member) + " book";
}

}  // namespace

std::string csp_intro(CspTheme theme, const std::vector<std::string>& members) {
    std::string n = number_word(static_cast<long long>(members.size()));
    if (theme == CspTheme::golf) {
        return "The following paragraphs each describe a set of " + n +
               " objects arranged in a fixed order. The statements are logically "
               "consistent within each paragraph. In a golf tournament, there were " +
               n + " golfers: " + name_list(members) + ".";
    }
    std::vector<std::string> items;
    for (const auto& m : members) items.push_back(shelf_item(m));
    return "On a shelf, " + n + " books are arranged in a fixed order from " +
           kShelfListMarker + name_list(items) + ".";
}

std::string csp_before_sentence(CspTheme theme, const std::string& a, const std::string& b) {
    if (theme == CspTheme::golf) return a + " finished above " + b + ".";
    return "The " + lowercase(a) + " book is to the left of the " + lowercase(b) + " book.";
}

std::string csp_after_sentence(CspTheme theme, const std::string& a, const std::string& b) {
    if (theme == CspTheme::golf) return a + " finished below " + b + ".";
    return "The " + lowercase(a) + " book is to the right of the " + lowercase(b) + " book.";
}

std::string csp_position_sentence(CspTheme theme, const std::string& a, long long k,
                                  long long n) {
    if (theme == CspTheme::golf) {
        std::string where = k == n ? "last" : ordinal_word(k);
        return a + " finished " + where + ".";
    }
    std::string book = "The " + lowercase(a) + " book is ";
    if (k == 1) return book + "the leftmost.";
    if (k == n) return book + "the rightmost.";
    return book + "in position " + std::to_string(k) + " from the left.";
}

namespace {

struct CspSentenceParse {
    bool is_constraint = false;
    CspOptionPredicate predicate;
};

std::optional<std::string> member_of(const lang::CspModel& model, const std::string& name) {
    for (const auto& e : model.enums)
        for (const auto& m : e.members)
            if (m == name) return m;
    return std::nullopt;
}

// Parses one golf/shelf claim sentence into a comparison over pos.
std::optional<CspOptionPredicate> parse_claim(const std::string& sentence,
                                              const lang::CspModel& model,
                                              std::string* error) {
    if (model.arrays.empty() || model.enums.empty()) {
        fail(error, "model has no position array");
        return std::nullopt;
    }
    const std::string arr = model.arrays[0].name;
    const long long n = static_cast<long long>(model.enums[0].members.size());
    auto toks = tokens_of(sentence);
    auto var = [&](const std::string& m) { return lang::CspOperand::var(arr, m); };

    CspOptionPredicate p;
    if (toks.size() >= 3 && toks[1] == "finished") {
        auto a = member_of(model, toks[0]);
        if (!a) {
            fail(error, "unknown name: " + toks[0]);
            return std::nullopt;
        }
        if (toks.size() == 3) {
            if (toks[2] == "last") {
                p = {var(*a), lang::CspOperand::lit(n), lang::CmpOp::eq};
                return p;
            }
            if (auto k = ordinal_value(toks[2])) {
                p = {var(*a), lang::CspOperand::lit(*k), lang::CmpOp::eq};
                return p;
            }
        }
        if (toks.size() == 4 && (toks[2] == "above" || toks[2] == "below")) {
            auto b = member_of(model, toks[3]);
            if (!b) {
                fail(error, "unknown name: " + toks[3]);
                return std::nullopt;
            }
            p = {var(*a), var(*b), toks[2] == "above" ? lang::CmpOp::lt : lang::CmpOp::gt};
            return p;
        }
    }
    if (toks.size() >= 5 && toks[0] == "The" && toks[2] == "book" && toks[3] == "is") {
        auto a = member_of(model, capitalize(toks[1]));
        if (!a) {
            fail(error, "unknown book: " + toks[1]);
            return std::nullopt;
        }
        // "... is the leftmost" | "... is the rightmost"
        if (toks.size() == 6 && toks[4] == "the") {
            if (toks[5] == "leftmost") {
                p = {var(*a), lang::CspOperand::lit(1), lang::CmpOp::eq};
                return p;
            }
            if (toks[5] == "rightmost") {
                p = {var(*a), lang::CspOperand::lit(n), lang::CmpOp::eq};
                return p;
            }
        }
        // "... is in position {k} from the left"
        if (toks.size() == 10 && toks[4] == "in" && toks[5] == "position") {
            if (auto k = parse_number(toks[6]); k && k->is_integer()) {
                p = {var(*a), lang::CspOperand::lit(k->num), lang::CmpOp::eq};
                return p;
            }
        }
        // "... is to the left/right of the {b} book"
        if (toks.size() == 11 && toks[4] == "to" && toks[5] == "the" && toks[7] == "of") {
            auto b = member_of(model, capitalize(toks[9]));
            if (!b) {
                fail(error, "unknown book: " + toks[9]);
                return std::nullopt;
            }
            if (toks[6] == "left") {
                p = {var(*a), var(*b), lang::CmpOp::lt};
                return p;
            }
            if (toks[6] == "right") {
                p = {var(*a), var(*b), lang::CmpOp::gt};
                return p;
            }
        }
    }
    fail(error, "unrecognized claim: " + sentence);
    return std::nullopt;
}

}  // namespace

std::optional<lang::CspModel> csp_from_nl(const std::string& context, std::string* error) {
    auto sentences = split_sentences(context);

    // Locate the sentence holding the member list and infer the theme.
    CspTheme theme = CspTheme::golf;
    std::vector<std::string> members;
    size_t list_index = sentences.size();
    for (size_t i = 0; i < sentences.size(); ++i) {
        size_t pos = sentences[i].find(kGolfListMarker);
        if (pos != std::string::npos) {
            theme = CspTheme::golf;
            members = parse_name_list(sentences[i].substr(pos + kGolfListMarker.size()));
            list_index = i;
            break;
        }
        pos = sentences[i].find(kShelfListMarker);
        if (pos != std::string::npos) {
            theme = CspTheme::shelf;
            for (auto& item : parse_name_list(sentences[i].substr(pos + kShelfListMarker.size()))) {
                auto toks = tokens_of(item);  // "a {color} book"
                if (toks.size() != 3 || !is_article(toks[0]) || toks[2] != "book") {
                    fail(error, "unrecognized book item: " + item);
                    return std::nullopt;
                }
                members.push_back(capitalize(toks[1]));
            }
            list_index = i;
            break;
        }
    }
    if (list_index == sentences.size() || members.empty()) {
        fail(error, "no object list found in context");
        return std::nullopt;
    }

    lang::CspModel model;
    std::string enum_name = theme == CspTheme::golf ? "GOLFER" : "BOOK";
    model.enums.push_back({enum_name, members});
    model.arrays.push_back({"pos", enum_name, 1, static_cast<long long>(members.size())});
    lang::CspConstraint all_diff;
    all_diff.kind = lang::CspConstraint::Kind::all_different;
    all_diff.array = "pos";
    model.constraints.push_back(all_diff);

    for (size_t i = list_index + 1; i < sentences.size(); ++i) {
        auto claim = parse_claim(sentences[i], model, error);
        if (!claim) return std::nullopt;
        lang::CspConstraint c;
        c.kind = lang::CspConstraint::Kind::compare;
        c.lhs = claim->lhs;
        c.rhs = claim->rhs;
        c.op = claim->op;
        model.constraints.push_back(std::move(c));
    }
    return model;
}

std::optional<CspOptionPredicate> csp_option_from_nl(const std::string& option_text,
                                                     const lang::CspModel& model,
                                                     std::string* error) {
    auto sentences = split_sentences(option_text);
    if (sentences.size() != 1) {
        fail(error, "option must be a single claim");
        return std::nullopt;
    }
    return parse_claim(sentences[0], model, error);
}

// --- SMT ---

namespace {

// Sentences carry decimal numerals, never p/q fractions.
std::string nl_number(const lang::Rational& r) {
    if (r.den == 1) return std::to_string(r.num);
    long long num = r.num < 0 ? -r.num : r.num;
    long long whole = num / r.den, rem = num % r.den;
    std::string frac;
    for (int i = 0; i < 9 && rem != 0; ++i) {
        rem *= 10;
        frac += static_cast<char>('0' + rem / r.den);
        rem %= r.den;
    }
    if (rem != 0) return r.str();  // not a finite decimal
    return (r.num < 0 ? "-" : "") + std::to_string(whole) + "." + frac;
}

}  // namespace

std::string smt_criterion_sentence(bool inclusion, const std::string& var,
                                   const std::string& cmp_word,
                                   const lang::Rational& value) {
    return std::string(inclusion ? "Requires " : "Excludes ") + var + " " + cmp_word + " " +
           nl_number(value) + ".";
}

std::string smt_criterion_sentence(bool inclusion, const std::string& var) {
    return std::string(inclusion ? "Requires " : "Excludes ") + var + ".";
}

std::string smt_patient_sentence(const std::string& var, const lang::Rational& value) {
    return "The patient has " + var + " equal to " + nl_number(value) + ".";
}

std::string smt_patient_sentence(const std::string& var, bool value) {
    if (value) return "The patient has " + var + ".";
    return "The patient does not have " + var + ".";
}

namespace {

struct SmtCriterion {
    std::string var;
    bool is_bool = false;
    std::string op;  // ">", "<", ">=", "<=", "="
    lang::Rational value;
};

std::optional<std::string> cmp_op_for_words(const std::string& w1, const std::string& w2) {
    std::string phrase = w1 + " " + w2;
    if (phrase == "greater than") return ">";
    if (phrase == "less than") return "<";
    if (phrase == "at least") return ">=";
    if (phrase == "at most") return "<=";
    if (phrase == "equal to") return "=";
    return std::nullopt;
}

std::optional<SmtCriterion> parse_criterion(const std::string& sentence, bool inclusion,
                                            std::string* error) {
    auto toks = tokens_of(sentence);
    const std::string head = inclusion ? "Requires" : "Excludes";
    if (toks.empty() || toks[0] != head) {
        fail(error, "unrecognized criterion: " + sentence);
        return std::nullopt;
    }
    SmtCriterion c;
    if (toks.size() == 2) {
        c.var = toks[1];
        c.is_bool = true;
        return c;
    }
    if (toks.size() == 5) {
        auto op = cmp_op_for_words(toks[2], toks[3]);
        auto value = parse_number(toks[4]);
        if (op && value) {
            c.var = toks[1];
            c.op = *op;
            c.value = *value;
            return c;
        }
    }
    fail(error, "unrecognized criterion: " + sentence);
    return std::nullopt;
}

struct SmtPatientFact {
    std::string var;
    bool is_bool = false;
    bool bool_value = false;
    lang::Rational value;
};

std::optional<SmtPatientFact> parse_patient_fact(const std::string& sentence,
                                                 std::string* error) {
    auto toks = tokens_of(sentence);
    SmtPatientFact f;
    if (toks.size() == 4 && toks[0] == "The" && toks[1] == "patient" && toks[2] == "has") {
        f.var = toks[3];
        f.is_bool = true;
        f.bool_value = true;
        return f;
    }
    if (toks.size() == 6 && toks[2] == "does" && toks[3] == "not" && toks[4] == "have") {
        f.var = toks[5];
        f.is_bool = true;
        f.bool_value = false;
        return f;
    }
    if (toks.size() == 7 && toks[2] == "has" && toks[4] == "equal" && toks[5] == "to") {
        auto value = parse_number(toks[6]);
        if (value) {
            f.var = toks[3];
            f.value = *value;
            return f;
        }
    }
    fail(error, "unrecognized patient sentence: " + sentence);
    return std::nullopt;
}

}  // namespace

std::optional<lang::SmtScript> smt_from_nl(const std::string& trial,
                                           const std::string& patient,
                                           std::string* error) {
    const std::string kInclusion = "Inclusion Criteria:";
    const std::string kExclusion = "Exclusion Criteria:";

    size_t incl_pos = trial.find(kInclusion);
    size_t excl_pos = trial.find(kExclusion);
    std::string incl_text, excl_text;
    if (incl_pos != std::string::npos) {
        size_t start = incl_pos + kInclusion.size();
        size_t end = excl_pos == std::string::npos ? trial.size() : excl_pos;
        incl_text = trial.substr(start, end - start);
    }
    if (excl_pos != std::string::npos) excl_text = trial.substr(excl_pos + kExclusion.size());
    if (incl_text.empty() && excl_text.empty()) {
        fail(error, "no criteria sections found in trial text");
        return std::nullopt;
    }

    std::vector<SmtCriterion> inclusions, exclusions;
    for (const auto& s : split_sentences(incl_text)) {
        auto c = parse_criterion(s, true, error);
        if (!c) return std::nullopt;
        inclusions.push_back(std::move(*c));
    }
    for (const auto& s : split_sentences(excl_text)) {
        auto c = parse_criterion(s, false, error);
        if (!c) return std::nullopt;
        exclusions.push_back(std::move(*c));
    }

    std::vector<SmtPatientFact> facts;
    for (const auto& s : split_sentences(patient)) {
        auto f = parse_patient_fact(s, error);
        if (!f) return std::nullopt;
        facts.push_back(std::move(*f));
    }

    // Sort inference: booleans from bare usage, Int when every literal
    // mentioning the variable is integral, Real otherwise.
    lang::SmtScript script;
    auto declare = [&](const std::string& var, bool is_bool, bool integral) {
        for (const auto& d : script.declarations)
            if (d.name == var) return;
        lang::SmtSort sort = is_bool ? lang::SmtSort::bool_sort
                             : integral ? lang::SmtSort::int_sort
                                        : lang::SmtSort::real_sort;
        script.declarations.push_back({var, sort});
    };
    auto integral_everywhere = [&](const std::string& var) {
        for (const auto& c : inclusions)
            if (c.var == var && !c.is_bool && !c.value.is_integer()) return false;
        for (const auto& c : exclusions)
            if (c.var == var && !c.is_bool && !c.value.is_integer()) return false;
        for (const auto& f : facts)
            if (f.var == var && !f.is_bool && !f.value.is_integer()) return false;
        return true;
    };
    for (const auto& c : inclusions) declare(c.var, c.is_bool, integral_everywhere(c.var));
    for (const auto& c : exclusions) declare(c.var, c.is_bool, integral_everywhere(c.var));
    for (const auto& f : facts) declare(f.var, f.is_bool, integral_everywhere(f.var));

    using T = lang::SmtTerm;
    auto criterion_term = [](const SmtCriterion& c) {
        if (c.is_bool) return T::sym(c.var);
        return T::app(c.op, {T::sym(c.var), T::num(c.value)});
    };
    if (!inclusions.empty()) {
        std::vector<T> terms;
        for (const auto& c : inclusions) terms.push_back(criterion_term(c));
        script.assertions.push_back(T::app("and", std::move(terms)));
    }
    if (!exclusions.empty()) {
        std::vector<T> terms;
        for (const auto& c : exclusions) terms.push_back(criterion_term(c));
        script.assertions.push_back(T::app("not", {T::app("or", std::move(terms))}));
    }
    for (const auto& f : facts) {
        if (f.is_bool)
            script.assertions.push_back(T::app("=", {T::sym(f.var), T::boolean(f.bool_value)}));
        else
            script.assertions.push_back(T::app("=", {T::sym(f.var), T::num(f.value)}));
    }
    script.check_sat_count = 1;
    return script;
}

}  // namespace nsr::phrases
