#include "nsr/lang/csp.hpp"

#include <cctype>
#include <sstream>

namespace nsr::lang {

std::string to_string(CmpOp op) {
    switch (op) {
        case CmpOp::lt: return "<";
        case CmpOp::gt: return ">";
        case CmpOp::eq: return "=";
        case CmpOp::le: return "<=";
        case CmpOp::ge: return ">=";
    }
    return "?";
}

bool eval_cmp(CmpOp op, long long lhs, long long rhs) {
    switch (op) {
        case CmpOp::lt: return lhs < rhs;
        case CmpOp::gt: return lhs > rhs;
        case CmpOp::eq: return lhs == rhs;
        case CmpOp::le: return lhs <= rhs;
        case CmpOp::ge: return lhs >= rhs;
    }
    return false;
}

const CspEnum* CspModel::find_enum(const std::string& name) const {
    for (const auto& e : enums)
        if (e.name == name) return &e;
    return nullptr;
}

const CspArray* CspModel::find_array(const std::string& name) const {
    for (const auto& a : arrays)
        if (a.name == name) return &a;
    return nullptr;
}

namespace {

struct Token {
    std::string text;
    int line;
    int column;
    bool is_string = false;
};

bool tokenize(const std::string& text, std::vector<Token>& out,
              std::vector<ParseDiagnostic>& diags) {
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '%') {  // comment to end of line
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        if (c == '"') {
            size_t end = text.find('"', i + 1);
            if (end == std::string::npos) {
                diags.push_back({line, col, "closing '\"'", ""});
                return false;
            }
            t.text = text.substr(i + 1, end - i - 1);
            t.is_string = true;
            advance(end - i + 1);
            out.push_back(std::move(t));
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t a = i;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
                advance(1);
            t.text = text.substr(a, i - a);
            out.push_back(std::move(t));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t a = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                advance(1);
            t.text = text.substr(a, i - a);
            out.push_back(std::move(t));
            continue;
        }
        // Multi-char operators.
        if (text.compare(i, 2, "..") == 0 || text.compare(i, 2, "<=") == 0 ||
            text.compare(i, 2, ">=") == 0 || text.compare(i, 2, "==") == 0 ||
            text.compare(i, 2, "!=") == 0) {
            t.text = text.substr(i, 2);
            advance(2);
            out.push_back(std::move(t));
            continue;
        }
        if (std::string("{}[]()=<>,;:|+-").find(c) != std::string::npos) {
            t.text = std::string(1, c);
            advance(1);
            out.push_back(std::move(t));
            continue;
        }
        diags.push_back({line, col, "model token", std::string(1, c)});
        return false;
    }
    return true;
}

class CspParser {
public:
    CspParser(std::vector<Token> toks, std::vector<ParseDiagnostic>& diags)
        : toks_(std::move(toks)), diags_(diags) {}

    bool parse(CspModel& model) {
        bool saw_satisfy = false;
        while (pos_ < toks_.size()) {
            const std::string& head = peek_text();
            bool ok;
            if (head == "include")
                ok = parse_include();
            else if (head == "enum")
                ok = parse_enum(model);
            else if (head == "array")
                ok = parse_array(model);
            else if (head == "constraint")
                ok = parse_constraint(model);
            else if (head == "solve")
                ok = parse_solve(saw_satisfy);
            else {
                error("statement (include/enum/array/constraint/solve)");
                return false;
            }
            if (!ok) return false;
        }
        if (!saw_satisfy) {
            diags_.push_back({1, 1, "'solve satisfy;'", ""});
            return false;
        }
        return true;
    }

private:
    const Token& peek() const {
        static Token end{"", 0, 0, false};
        return pos_ < toks_.size() ? toks_[pos_] : end;
    }
    const std::string& peek_text() const { return peek().text; }
    bool at_end() const { return pos_ >= toks_.size(); }
    void error(const std::string& expected) {
        if (at_end())
            diags_.push_back({last_line_, last_col_, expected, "end of input"});
        else
            diags_.push_back({peek().line, peek().column, expected, peek().text});
    }
    bool expect(const std::string& text) {
        if (at_end() || peek_text() != text) {
            error("'" + text + "'");
            return false;
        }
        take();
        return true;
    }
    Token take() {
        Token t = toks_[pos_++];
        last_line_ = t.line;
        last_col_ = t.column;
        return t;
    }
    bool take_ident(std::string& out) {
        if (at_end() || !std::isalpha(static_cast<unsigned char>(peek_text()[0]))) {
            error("identifier");
            return false;
        }
        out = take().text;
        return true;
    }
    bool take_int(long long& out) {
        bool neg = false;
        if (!at_end() && peek_text() == "-") {
            neg = true;
            take();
        }
        if (at_end() || !std::isdigit(static_cast<unsigned char>(peek_text()[0]))) {
            error("integer literal");
            return false;
        }
        out = std::stoll(take().text);
        if (neg) out = -out;
        return true;
    }

    bool parse_include() {
        take();  // include
        if (at_end() || !peek().is_string) {
            error("include file name string");
            return false;
        }
        Token file = take();
        if (file.text != "globals.mzn") {
            diags_.push_back({file.line, file.column, "include \"globals.mzn\" (only supported include)",
                              file.text});
            return false;
        }
        return expect(";");
    }

    bool parse_enum(CspModel& model) {
        take();  // enum
        CspEnum e;
        if (!take_ident(e.name)) return false;
        if (!expect("=") || !expect("{")) return false;
        while (true) {
            std::string m;
            if (!take_ident(m)) return false;
            e.members.push_back(std::move(m));
            if (!at_end() && peek_text() == ",") {
                take();
                continue;
            }
            break;
        }
        if (!expect("}") || !expect(";")) return false;
        model.enums.push_back(std::move(e));
        return true;
    }

    bool parse_array(CspModel& model) {
        take();  // array
        CspArray a;
        if (!expect("[")) return false;
        if (!take_ident(a.index_enum)) return false;
        if (!expect("]") || !expect("of") || !expect("var")) return false;
        if (!take_int(a.lo) || !expect("..") || !take_int(a.hi)) return false;
        if (!expect(":")) return false;
        if (!take_ident(a.name)) return false;
        if (!expect(";")) return false;
        model.arrays.push_back(std::move(a));
        return true;
    }

    bool parse_operand(CspOperand& op) {
        if (!at_end() && (std::isdigit(static_cast<unsigned char>(peek_text()[0])) ||
                          peek_text() == "-")) {
            op.is_literal = true;
            return take_int(op.literal);
        }
        op.is_literal = false;
        if (!take_ident(op.array)) return false;
        if (!expect("[")) return false;
        if (!take_ident(op.member)) return false;
        if (!expect("]")) return false;
        op.offset = 0;
        if (!at_end() && (peek_text() == "+" || peek_text() == "-")) {
            bool neg = take().text == "-";
            long long v;
            if (!take_int(v)) return false;
            op.offset = neg ? -v : v;
        }
        return true;
    }

    bool parse_constraint(CspModel& model) {
        take();  // constraint
        CspConstraint c;
        if (!at_end() && peek_text() == "all_different") {
            take();
            c.kind = CspConstraint::Kind::all_different;
            if (!expect("(") || !expect("[")) return false;
            std::string arr, iter_var, iter_var2, over;
            if (!take_ident(arr)) return false;
            if (!expect("[")) return false;
            if (!take_ident(iter_var)) return false;
            if (!expect("]") || !expect("|")) return false;
            if (!take_ident(iter_var2)) return false;
            if (!expect("in")) return false;
            if (!take_ident(over)) return false;
            if (!expect("]") || !expect(")")) return false;
            if (iter_var != iter_var2) {
                diags_.push_back({last_line_, last_col_, "matching comprehension variable",
                                  iter_var2});
                return false;
            }
            c.array = arr;
            all_diff_enums_.push_back(over);
            if (!expect(";")) return false;
            model.constraints.push_back(std::move(c));
            return true;
        }
        c.kind = CspConstraint::Kind::compare;
        if (!parse_operand(c.lhs)) return false;
        if (at_end()) {
            error("comparison operator");
            return false;
        }
        std::string op = take().text;
        if (op == "<")
            c.op = CmpOp::lt;
        else if (op == ">")
            c.op = CmpOp::gt;
        else if (op == "=" || op == "==")
            c.op = CmpOp::eq;
        else if (op == "<=")
            c.op = CmpOp::le;
        else if (op == ">=")
            c.op = CmpOp::ge;
        else {
            diags_.push_back({last_line_, last_col_, "comparison operator (<, >, =, <=, >=)", op});
            return false;
        }
        if (!parse_operand(c.rhs)) return false;
        if (!expect(";")) return false;
        model.constraints.push_back(std::move(c));
        return true;
    }

    bool parse_solve(bool& saw_satisfy) {
        take();  // solve
        if (at_end()) {
            error("'satisfy'");
            return false;
        }
        Token what = take();
        if (what.text != "satisfy") {
            diags_.push_back({what.line, what.column,
                              "'satisfy' (satisfy-only subset; objectives are unsupported)",
                              what.text});
            return false;
        }
        saw_satisfy = true;
        return expect(";");
    }

public:
    std::vector<std::string> all_diff_enums_;

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
    int last_line_ = 1, last_col_ = 1;
    std::vector<ParseDiagnostic>& diags_;
};

}  // namespace

ParseResult<CspModel> parse_csp(const std::string& text) {
    ParseResult<CspModel> res;
    CspModel m;
    std::vector<Token> toks;
    if (!tokenize(text, toks, res.diagnostics)) return res;
    CspParser parser(std::move(toks), res.diagnostics);
    if (!parser.parse(m)) return res;

    auto& diags = res.diagnostics;
    for (const auto& a : m.arrays) {
        if (!m.find_enum(a.index_enum))
            diags.push_back({1, 1, "declared enum for array index", a.index_enum});
        if (a.lo > a.hi)
            diags.push_back({1, 1, "non-empty range", std::to_string(a.lo) + ".." + std::to_string(a.hi)});
    }
    size_t all_diff_seen = 0;
    for (const auto& c : m.constraints) {
        if (c.kind == CspConstraint::Kind::all_different) {
            const CspArray* arr = m.find_array(c.array);
            if (!arr) {
                diags.push_back({1, 1, "declared array in all_different", c.array});
            } else if (all_diff_seen < parser.all_diff_enums_.size() &&
                       parser.all_diff_enums_[all_diff_seen] != arr->index_enum) {
                diags.push_back({1, 1, "comprehension over the array's index enum",
                                 parser.all_diff_enums_[all_diff_seen]});
            }
            ++all_diff_seen;
            continue;
        }
        for (const CspOperand* op : {&c.lhs, &c.rhs}) {
            if (op->is_literal) continue;
            const CspArray* arr = m.find_array(op->array);
            if (!arr) {
                diags.push_back({1, 1, "declared array", op->array});
                continue;
            }
            const CspEnum* e = m.find_enum(arr->index_enum);
            bool found = false;
            if (e)
                for (const auto& mem : e->members) found |= (mem == op->member);
            if (!found)
                diags.push_back({1, 1, "member of enum " + arr->index_enum, op->member});
        }
    }

    if (diags.empty()) res.value = std::move(m);
    return res;
}

std::string pretty_print(const CspModel& m) {
    std::ostringstream os;
    os << "include \"globals.mzn\";\n";
    for (const auto& e : m.enums) {
        os << "enum " << e.name << " = {";
        for (size_t i = 0; i < e.members.size(); ++i) {
            if (i) os << ", ";
            os << e.members[i];
        }
        os << "};\n";
    }
    for (const auto& a : m.arrays)
        os << "array[" << a.index_enum << "] of var " << a.lo << ".." << a.hi << ": "
           << a.name << ";\n";
    for (const auto& c : m.constraints) {
        if (c.kind == CspConstraint::Kind::all_different) {
            const CspArray* arr = m.find_array(c.array);
            std::string idx = arr ? arr->index_enum : "?";
            os << "constraint all_different([" << c.array << "[g] | g in " << idx << "]);\n";
            continue;
        }
        auto emit = [&](const CspOperand& op) {
            if (op.is_literal) {
                os << op.literal;
                return;
            }
            os << op.array << "[" << op.member << "]";
            if (op.offset > 0) os << " + " << op.offset;
            if (op.offset < 0) os << " - " << -op.offset;
        };
        os << "constraint ";
        emit(c.lhs);
        os << " " << to_string(c.op) << " ";
        emit(c.rhs);
        os << ";\n";
    }
    os << "solve satisfy;\n";
    return os.str();
}

}  // namespace nsr::lang
