#pragma once

#include <string>
#include <vector>

#include "nsr/lang/diagnostics.hpp"

namespace nsr::lang {

// Ground or schematic atom: pred(arg..., True|False). Arguments starting
// with '$' are variables; anything else is a constant.
struct LpAtom {
    std::string predicate;
    std::vector<std::string> args;  // without the trailing boolean slot
    bool value = true;

    bool operator==(const LpAtom&) const = default;
};

struct LpPredicateDecl {
    std::string name;
    int arity = 1;  // argument count excluding the boolean slot
    std::string gloss;

    bool operator==(const LpPredicateDecl&) const = default;
};

struct LpFact {
    LpAtom atom;
    std::string gloss;

    bool operator==(const LpFact&) const = default;
};

struct LpRule {
    std::vector<LpAtom> antecedents;  // joined by && in the surface form
    LpAtom consequent;
    std::string gloss;

    bool operator==(const LpRule&) const = default;
};

struct LpProgram {
    std::vector<LpPredicateDecl> predicates;
    std::vector<LpFact> facts;
    std::vector<LpRule> rules;
    LpAtom query;
    std::string query_gloss;

    bool operator==(const LpProgram&) const = default;
};

// Sections: Predicates / Facts / Rules / Query, line form
//   atom [>>> atom] ::: gloss
// Validates declarations, arities, rule variable scoping and a single query.
ParseResult<LpProgram> parse_lp(const std::string& text);

std::string pretty_print(const LpProgram& p);
std::string to_string(const LpAtom& a);

}  // namespace nsr::lang
