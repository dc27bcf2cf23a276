#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "nsr/lang/csp.hpp"
#include "nsr/lang/fol.hpp"
#include "nsr/lang/lp.hpp"
#include "nsr/lang/smt.hpp"

// Random well-formed programs for round-trip tests and a grid oracle for
// SMT, both independent of the production engines.
namespace nsr::testgen {

struct Rand {
    std::mt19937_64 eng;

    explicit Rand(unsigned long long seed) : eng(seed) {}

    std::size_t below(std::size_t n) { return n == 0 ? 0 : eng() % n; }
    bool coin() { return (eng() & 1) != 0; }
    long long range(long long lo, long long hi) {
        return lo + static_cast<long long>(eng() % static_cast<unsigned long long>(hi - lo + 1));
    }
};

inline std::string ident(Rand& r, const char* prefix, std::size_t pool) {
    return prefix + std::to_string(r.below(pool));
}

// --- LP ---

inline lang::LpProgram random_lp(Rand& r) {
    lang::LpProgram p;
    std::size_t n_preds = 2 + r.below(4);
    for (std::size_t i = 0; i < n_preds; ++i) {
        lang::LpPredicateDecl d;
        d.name = "pred" + std::to_string(i);
        d.arity = 1;
        d.gloss = "Is x pred" + std::to_string(i) + "?";
        p.predicates.push_back(d);
    }
    auto pred = [&] { return "pred" + std::to_string(r.below(n_preds)); };
    auto constant = [&] { return std::string(1, static_cast<char>('A' + r.below(3))) + "lice"; };

    std::size_t n_facts = 1 + r.below(3);
    for (std::size_t i = 0; i < n_facts; ++i) {
        lang::LpFact f;
        f.atom = {pred(), {constant()}, r.coin()};
        f.gloss = "fact " + std::to_string(i) + ".";
        p.facts.push_back(f);
    }
    std::size_t n_rules = 1 + r.below(3);
    for (std::size_t i = 0; i < n_rules; ++i) {
        lang::LpRule rule;
        std::size_t n_ante = 1 + r.below(2);
        for (std::size_t a = 0; a < n_ante; ++a)
            rule.antecedents.push_back({pred(), {"$x"}, r.coin()});
        rule.consequent = {pred(), {"$x"}, r.coin()};
        rule.gloss = "rule " + std::to_string(i) + ".";
        p.rules.push_back(rule);
    }
    p.query = {pred(), {constant()}, r.coin()};
    p.query_gloss = "the question.";
    return p;
}

// --- FOL ---

inline lang::FolFormula random_fol_formula(Rand& r, std::size_t n_preds,
                                           std::vector<std::string>& bound, int depth) {
    using F = lang::FolFormula;
    auto atom = [&] {
        std::string arg;
        if (!bound.empty() && r.coin())
            arg = bound[r.below(bound.size())];
        else
            arg = std::string(1, static_cast<char>('a' + r.below(3))) + "con";
        return F::make_atom("Pred" + std::to_string(r.below(n_preds)), {arg});
    };
    if (depth <= 0) return atom();
    switch (r.below(6)) {
        case 0: return atom();
        case 1:
            return F::unary(F::Kind::logical_not, random_fol_formula(r, n_preds, bound, depth - 1));
        case 2:
            return F::binary(F::Kind::logical_and,
                             random_fol_formula(r, n_preds, bound, depth - 1),
                             random_fol_formula(r, n_preds, bound, depth - 1));
        case 3:
            return F::binary(F::Kind::logical_or,
                             random_fol_formula(r, n_preds, bound, depth - 1),
                             random_fol_formula(r, n_preds, bound, depth - 1));
        case 4:
            return F::binary(F::Kind::implies, random_fol_formula(r, n_preds, bound, depth - 1),
                             random_fol_formula(r, n_preds, bound, depth - 1));
        default: {
            // A fresh variable from the x/y/z/w alphabet, not yet bound.
            static const std::vector<std::string> vars = {"x", "y", "z", "w"};
            std::string v;
            for (const auto& candidate : vars) {
                if (std::find(bound.begin(), bound.end(), candidate) == bound.end()) {
                    v = candidate;
                    break;
                }
            }
            if (v.empty()) return atom();
            bound.push_back(v);
            auto body = random_fol_formula(r, n_preds, bound, depth - 1);
            bound.pop_back();
            return F::quantified(r.coin() ? F::Kind::forall : F::Kind::exists, v,
                                 std::move(body));
        }
    }
}

inline lang::FolProgram random_fol(Rand& r) {
    lang::FolProgram p;
    std::size_t n_preds = 2 + r.below(3);
    for (std::size_t i = 0; i < n_preds; ++i) {
        lang::FolPredicateDecl d;
        d.name = "Pred" + std::to_string(i);
        d.arity = 1;
        d.gloss = "x is Pred" + std::to_string(i) + ".";
        p.predicates.push_back(d);
    }
    std::size_t n_premises = 1 + r.below(3);
    std::vector<std::string> bound;
    for (std::size_t i = 0; i < n_premises; ++i) {
        lang::FolStatement s;
        s.formula = random_fol_formula(r, n_preds, bound, 2);
        s.gloss = "premise " + std::to_string(i) + ".";
        p.premises.push_back(s);
    }
    p.conclusion.formula = random_fol_formula(r, n_preds, bound, 2);
    p.conclusion.gloss = "the conclusion.";
    return p;
}

// --- CSP ---

inline lang::CspModel random_csp(Rand& r) {
    lang::CspModel m;
    std::size_t n_members = 2 + r.below(4);
    lang::CspEnum e;
    e.name = "OBJ";
    for (std::size_t i = 0; i < n_members; ++i)
        e.members.push_back("Item" + std::to_string(i));
    m.enums.push_back(e);
    lang::CspArray arr;
    arr.name = "pos";
    arr.index_enum = "OBJ";
    arr.lo = 1;
    arr.hi = static_cast<long long>(n_members);
    m.arrays.push_back(arr);

    if (r.coin()) {
        lang::CspConstraint c;
        c.kind = lang::CspConstraint::Kind::all_different;
        c.array = "pos";
        m.constraints.push_back(c);
    }
    std::size_t n_cmp = 1 + r.below(4);
    auto operand = [&] {
        if (r.below(4) == 0) return lang::CspOperand::lit(r.range(1, arr.hi));
        return lang::CspOperand::var("pos", e.members[r.below(n_members)],
                                     r.below(3) == 0 ? r.range(-2, 2) : 0);
    };
    static const lang::CmpOp ops[] = {lang::CmpOp::lt, lang::CmpOp::gt, lang::CmpOp::eq,
                                      lang::CmpOp::le, lang::CmpOp::ge};
    for (std::size_t i = 0; i < n_cmp; ++i) {
        lang::CspConstraint c;
        c.lhs = lang::CspOperand::var("pos", e.members[r.below(n_members)],
                                      r.below(3) == 0 ? r.range(-2, 2) : 0);
        c.rhs = operand();
        c.op = ops[r.below(5)];
        m.constraints.push_back(c);
    }
    return m;
}

// --- SMT ---

inline lang::SmtTerm random_smt_assertion(Rand& r, const std::vector<lang::SmtDecl>& decls,
                                          int depth) {
    using T = lang::SmtTerm;
    std::vector<const lang::SmtDecl*> numeric, booleans;
    for (const auto& d : decls) {
        if (d.sort == lang::SmtSort::bool_sort)
            booleans.push_back(&d);
        else
            numeric.push_back(&d);
    }
    auto leaf = [&]() -> T {
        if (!numeric.empty() && (booleans.empty() || r.coin())) {
            static const char* cmps[] = {">", "<", ">=", "<=", "="};
            const auto* d = numeric[r.below(numeric.size())];
            lang::Rational value(r.range(-20, 120));
            if (d->sort == lang::SmtSort::real_sort && r.below(3) == 0)
                value = lang::Rational(2 * value.num + 1, 2);
            return T::app(cmps[r.below(5)], {T::sym(d->name), T::num(value)});
        }
        const auto* d = booleans[r.below(booleans.size())];
        if (r.below(3) == 0) return T::app("=", {T::sym(d->name), T::boolean(r.coin())});
        return T::sym(d->name);
    };
    if (depth <= 0) return leaf();
    switch (r.below(4)) {
        case 0: return leaf();
        case 1: return T::app("not", {random_smt_assertion(r, decls, depth - 1)});
        case 2: {
            std::vector<T> args;
            std::size_t n = 1 + r.below(3);
            for (std::size_t i = 0; i < n; ++i)
                args.push_back(random_smt_assertion(r, decls, depth - 1));
            return T::app("and", std::move(args));
        }
        default: {
            std::vector<T> args;
            std::size_t n = 1 + r.below(3);
            for (std::size_t i = 0; i < n; ++i)
                args.push_back(random_smt_assertion(r, decls, depth - 1));
            return T::app("or", std::move(args));
        }
    }
}

inline lang::SmtScript random_smt(Rand& r) {
    lang::SmtScript s;
    std::size_t n_decls = 2 + r.below(4);
    for (std::size_t i = 0; i < n_decls; ++i) {
        lang::SmtDecl d;
        d.name = "v" + std::to_string(i);
        switch (r.below(3)) {
            case 0: d.sort = lang::SmtSort::int_sort; break;
            case 1: d.sort = lang::SmtSort::real_sort; break;
            default: d.sort = lang::SmtSort::bool_sort; break;
        }
        s.declarations.push_back(d);
    }
    std::size_t n_asserts = 1 + r.below(4);
    for (std::size_t i = 0; i < n_asserts; ++i)
        s.assertions.push_back(random_smt_assertion(r, s.declarations, 2));
    s.check_sat_count = 1;
    return s;
}

// Random byte string for parser fuzzing; includes plenty of structural
// characters so the lexers actually get exercised.
inline std::string random_bytes(Rand& r, std::size_t max_len) {
    static const std::string alphabet =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
        " \t\n()[]{}<>:;.,$&|~%\"'->=*/\\";
    std::size_t len = r.below(max_len);
    std::string out;
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
        if (r.below(16) == 0)
            out.push_back(static_cast<char>(r.below(256)));  // raw byte
        else
            out.push_back(alphabet[r.below(alphabet.size())]);
    }
    return out;
}

// --- SMT grid oracle ---
//
// Exhaustive check over boolean assignments crossed with a numeric value
// grid (every comparison constant, its neighbours and all pairwise
// midpoints). Complete for scripts whose atoms compare one variable with
// one constant, which covers the eligibility family.

struct SmtGridOracle {
    enum class Result { sat, unsat, unsupported };

    static Result check(const lang::SmtScript& script) {
        using T = lang::SmtTerm;
        std::vector<std::string> bool_vars, numeric_vars;
        std::map<std::string, lang::SmtSort> sorts;
        for (const auto& d : script.declarations) {
            sorts[d.name] = d.sort;
            if (d.sort == lang::SmtSort::bool_sort)
                bool_vars.push_back(d.name);
            else
                numeric_vars.push_back(d.name);
        }
        if (bool_vars.size() > 16) return Result::unsupported;

        std::map<std::string, std::vector<lang::Rational>> grid;
        for (const auto& v : numeric_vars) grid[v] = {};
        bool supported = true;
        for (const auto& a : script.assertions) collect(a, grid, supported);
        if (!supported) return Result::unsupported;

        for (auto& [var, values] : grid) {
            std::vector<lang::Rational> expanded;
            for (const auto& v : values) {
                expanded.push_back(v);
                expanded.push_back(v + lang::Rational(1));
                expanded.push_back(v - lang::Rational(1));
            }
            for (std::size_t i = 0; i < values.size(); ++i)
                for (std::size_t j = i + 1; j < values.size(); ++j) {
                    lang::Rational mid = values[i] + values[j];
                    expanded.push_back(lang::Rational(mid.num, mid.den * 2));
                }
            if (expanded.empty()) expanded.push_back(lang::Rational(0));
            if (sorts[var] == lang::SmtSort::int_sort) {
                std::vector<lang::Rational> integral;
                for (const auto& v : expanded)
                    if (v.is_integer()) integral.push_back(v);
                expanded = integral.empty() ? std::vector<lang::Rational>{lang::Rational(0)}
                                            : integral;
            }
            values = std::move(expanded);
        }

        std::map<std::string, bool> bool_assign;
        std::map<std::string, lang::Rational> num_assign;
        return search(script, bool_vars, 0, numeric_vars, 0, grid, bool_assign, num_assign)
                   ? Result::sat
                   : Result::unsat;
    }

  private:
    // Gathers per-variable comparison constants; flags anything outside the
    // var-vs-constant fragment.
    static void collect(const lang::SmtTerm& t,
                        std::map<std::string, std::vector<lang::Rational>>& grid,
                        bool& supported) {
        using K = lang::SmtTerm::Kind;
        if (t.kind != K::app) return;
        if (t.op == "and" || t.op == "or" || t.op == "not") {
            for (const auto& a : t.args) collect(a, grid, supported);
            return;
        }
        if (t.args.size() != 2) {
            supported = false;
            return;
        }
        const auto& lhs = t.args[0];
        const auto& rhs = t.args[1];
        if (lhs.kind == K::symbol && rhs.kind == K::numeral && grid.count(lhs.symbol)) {
            grid[lhs.symbol].push_back(rhs.number);
        } else if (lhs.kind == K::numeral && rhs.kind == K::symbol && grid.count(rhs.symbol)) {
            grid[rhs.symbol].push_back(lhs.number);
        } else if (lhs.kind == K::symbol && rhs.kind == K::boolean) {
            // boolean equality, no grid contribution
        } else if (lhs.kind == K::boolean && rhs.kind == K::symbol) {
            // boolean equality, mirrored
        } else {
            supported = false;
        }
    }

    static bool eval(const lang::SmtTerm& t, const std::map<std::string, bool>& bools,
                     const std::map<std::string, lang::Rational>& nums) {
        using K = lang::SmtTerm::Kind;
        if (t.kind == K::symbol) return bools.at(t.symbol);
        if (t.kind == K::boolean) return t.boolean_value;
        if (t.op == "and") {
            for (const auto& a : t.args)
                if (!eval(a, bools, nums)) return false;
            return true;
        }
        if (t.op == "or") {
            for (const auto& a : t.args)
                if (eval(a, bools, nums)) return true;
            return false;
        }
        if (t.op == "not") return !eval(t.args[0], bools, nums);

        const auto& lhs = t.args[0];
        const auto& rhs = t.args[1];
        auto boolean_side = [&](const lang::SmtTerm& side) -> std::optional<bool> {
            if (side.kind == K::boolean) return side.boolean_value;
            if (side.kind == K::symbol && bools.count(side.symbol))
                return bools.at(side.symbol);
            return std::nullopt;
        };
        if (t.op == "=") {
            auto lb = boolean_side(lhs), rb = boolean_side(rhs);
            if (lb && rb) return *lb == *rb;
        }
        auto numeric_side = [&](const lang::SmtTerm& side) -> lang::Rational {
            if (side.kind == K::numeral) return side.number;
            return nums.at(side.symbol);
        };
        lang::Rational a = numeric_side(lhs), b = numeric_side(rhs);
        if (t.op == ">") return a > b;
        if (t.op == "<") return a < b;
        if (t.op == ">=") return a >= b;
        if (t.op == "<=") return a <= b;
        return a == b;
    }

    static bool search(const lang::SmtScript& script, const std::vector<std::string>& bools,
                       std::size_t bi, const std::vector<std::string>& nums, std::size_t ni,
                       const std::map<std::string, std::vector<lang::Rational>>& grid,
                       std::map<std::string, bool>& bool_assign,
                       std::map<std::string, lang::Rational>& num_assign) {
        if (bi < bools.size()) {
            for (bool v : {false, true}) {
                bool_assign[bools[bi]] = v;
                if (search(script, bools, bi + 1, nums, ni, grid, bool_assign, num_assign))
                    return true;
            }
            bool_assign.erase(bools[bi]);
            return false;
        }
        if (ni < nums.size()) {
            for (const auto& v : grid.at(nums[ni])) {
                num_assign[nums[ni]] = v;
                if (search(script, bools, bi, nums, ni + 1, grid, bool_assign, num_assign))
                    return true;
            }
            num_assign.erase(nums[ni]);
            return false;
        }
        for (const auto& a : script.assertions)
            if (!eval(a, bool_assign, num_assign)) return false;
        return true;
    }
};

}  // namespace nsr::testgen
