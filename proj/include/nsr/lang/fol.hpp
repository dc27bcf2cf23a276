#pragma once

#include <string>
#include <vector>

#include "nsr/lang/diagnostics.hpp"

namespace nsr::lang {

// Quantified formula tree. Atom arguments are constants (lowercase
// identifiers) or variables (single letters x, y, z, w).
struct FolFormula {
    enum class Kind {
        atom,
        logical_not,
        logical_and,
        logical_or,
        implies,
        iff,
        forall,
        exists,
    };

    Kind kind = Kind::atom;
    std::string name;               // predicate (atom) or bound variable (quantifier)
    std::vector<std::string> args;  // atom arguments only
    std::vector<FolFormula> children;

    bool operator==(const FolFormula&) const = default;

    static FolFormula make_atom(std::string pred, std::vector<std::string> as) {
        FolFormula f;
        f.kind = Kind::atom;
        f.name = std::move(pred);
        f.args = std::move(as);
        return f;
    }
    static FolFormula unary(Kind k, FolFormula child) {
        FolFormula f;
        f.kind = k;
        f.children.push_back(std::move(child));
        return f;
    }
    static FolFormula binary(Kind k, FolFormula a, FolFormula b) {
        FolFormula f;
        f.kind = k;
        f.children.push_back(std::move(a));
        f.children.push_back(std::move(b));
        return f;
    }
    static FolFormula quantified(Kind k, std::string var, FolFormula body) {
        FolFormula f;
        f.kind = k;
        f.name = std::move(var);
        f.children.push_back(std::move(body));
        return f;
    }
};

bool is_fol_variable(const std::string& name);

struct FolPredicateDecl {
    std::string name;
    int arity = 1;
    std::string gloss;

    bool operator==(const FolPredicateDecl&) const = default;
};

struct FolStatement {
    FolFormula formula;
    std::string gloss;

    bool operator==(const FolStatement&) const = default;
};

struct FolProgram {
    std::vector<FolPredicateDecl> predicates;
    std::vector<FolStatement> premises;
    FolStatement conclusion;

    bool operator==(const FolProgram&) const = default;
};

// Sections: Predicates / Premises / Conclusions. Connectives accept both
// unicode (forall/exists symbols etc.) and ASCII aliases
// (forall, exists, ~, &, |, ->, <->). All formulas must be closed.
ParseResult<FolProgram> parse_fol(const std::string& text);

// Canonical ASCII form.
std::string pretty_print(const FolProgram& p);
std::string to_string(const FolFormula& f);

}  // namespace nsr::lang
