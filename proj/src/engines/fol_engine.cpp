#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>

#include "nsr/engines.hpp"

namespace nsr::engines {

namespace {

using lang::FolFormula;
using Kind = FolFormula::Kind;

// First-order term: variable, or function application (constants are 0-ary).
struct Term {
    bool is_var = false;
    std::string name;
    std::vector<Term> args;

    bool operator==(const Term&) const = default;
    bool operator<(const Term& o) const {
        if (is_var != o.is_var) return is_var < o.is_var;
        if (name != o.name) return name < o.name;
        return args < o.args;
    }
};

struct Literal {
    bool negated = false;
    std::string pred;
    std::vector<Term> args;

    bool operator==(const Literal&) const = default;
};

using Clause = std::vector<Literal>;

std::string term_str(const Term& t) {
    std::string s = (t.is_var ? "?" : "") + t.name;
    if (!t.args.empty()) {
        s += "(";
        for (size_t i = 0; i < t.args.size(); ++i) {
            if (i) s += ",";
            s += term_str(t.args[i]);
        }
        s += ")";
    }
    return s;
}

std::string literal_str(const Literal& l) {
    std::string s = l.negated ? "-" : "+";
    s += l.pred + "(";
    for (size_t i = 0; i < l.args.size(); ++i) {
        if (i) s += ",";
        s += term_str(l.args[i]);
    }
    return s + ")";
}

void rename_vars_term(Term& t, std::map<std::string, std::string>& map,
                      const std::string& suffix) {
    if (t.is_var) {
        auto it = map.find(t.name);
        if (it == map.end()) it = map.emplace(t.name, t.name + suffix).first;
        t.name = it->second;
        return;
    }
    for (auto& a : t.args) rename_vars_term(a, map, suffix);
}

Clause rename_clause(const Clause& c, int counter) {
    Clause out = c;
    std::map<std::string, std::string> map;
    std::string suffix = "_r" + std::to_string(counter);
    for (auto& l : out)
        for (auto& t : l.args) rename_vars_term(t, map, suffix);
    return out;
}

// Canonical key with variables normalized by order of appearance.
std::string clause_key(const Clause& c) {
    std::vector<std::string> lits;
    for (const auto& l : c) lits.push_back(literal_str(l));
    std::sort(lits.begin(), lits.end());
    std::string joined;
    for (const auto& s : lits) joined += s + ";";
    // Normalize variable names.
    std::map<std::string, std::string> names;
    std::string out;
    for (size_t i = 0; i < joined.size();) {
        if (joined[i] == '?') {
            size_t j = i + 1;
            while (j < joined.size() &&
                   (std::isalnum(static_cast<unsigned char>(joined[j])) || joined[j] == '_'))
                ++j;
            std::string v = joined.substr(i, j - i);
            auto it = names.find(v);
            if (it == names.end())
                it = names.emplace(v, "?v" + std::to_string(names.size())).first;
            out += it->second;
            i = j;
        } else {
            out += joined[i++];
        }
    }
    return out;
}

using Subst = std::map<std::string, Term>;

Term apply_subst(const Term& t, const Subst& s) {
    if (t.is_var) {
        auto it = s.find(t.name);
        if (it == s.end()) return t;
        return apply_subst(it->second, s);
    }
    Term out = t;
    for (auto& a : out.args) a = apply_subst(a, s);
    return out;
}

bool occurs(const std::string& var, const Term& t, const Subst& s) {
    if (t.is_var) {
        if (t.name == var) return true;
        auto it = s.find(t.name);
        return it != s.end() && occurs(var, it->second, s);
    }
    for (const auto& a : t.args)
        if (occurs(var, a, s)) return true;
    return false;
}

bool unify(const Term& a, const Term& b, Subst& s) {
    Term x = apply_subst(a, s);
    Term y = apply_subst(b, s);
    if (x.is_var) {
        if (y.is_var && y.name == x.name) return true;
        if (occurs(x.name, y, s)) return false;
        s[x.name] = y;
        return true;
    }
    if (y.is_var) return unify(y, x, s);
    if (x.name != y.name || x.args.size() != y.args.size()) return false;
    for (size_t i = 0; i < x.args.size(); ++i)
        if (!unify(x.args[i], y.args[i], s)) return false;
    return true;
}

bool unify_args(const std::vector<Term>& a, const std::vector<Term>& b, Subst& s) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!unify(a[i], b[i], s)) return false;
    return true;
}

Clause apply_subst_clause(const Clause& c, const Subst& s) {
    Clause out;
    out.reserve(c.size());
    for (const auto& l : c) {
        Literal nl = l;
        for (auto& t : nl.args) t = apply_subst(t, s);
        out.push_back(std::move(nl));
    }
    // Merge duplicate literals.
    Clause dedup;
    for (auto& l : out) {
        bool seen = false;
        for (const auto& d : dedup) seen |= (d == l);
        if (!seen) dedup.push_back(std::move(l));
    }
    return dedup;
}

bool is_tautology(const Clause& c) {
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = i + 1; j < c.size(); ++j)
            if (c[i].pred == c[j].pred && c[i].negated != c[j].negated &&
                c[i].args == c[j].args)
                return true;
    return false;
}

// --- Clausification ---

struct Clausifier {
    int skolem_counter = 0;
    int var_counter = 0;

    std::string fresh_var() { return "v" + std::to_string(var_counter++); }

    // Rewrites iff/implies away and produces NNF with standardized variables.
    FolFormula nnf(const FolFormula& f, bool negate,
                   std::map<std::string, std::string>& scope) {
        switch (f.kind) {
            case Kind::atom: {
                FolFormula a = f;
                for (auto& arg : a.args) {
                    auto it = scope.find(arg);
                    if (it != scope.end() && lang::is_fol_variable(arg)) arg = it->second;
                }
                if (negate) return FolFormula::unary(Kind::logical_not, std::move(a));
                return a;
            }
            case Kind::logical_not:
                return nnf(f.children[0], !negate, scope);
            case Kind::logical_and:
            case Kind::logical_or: {
                Kind k = f.kind;
                if (negate) k = (k == Kind::logical_and) ? Kind::logical_or : Kind::logical_and;
                return FolFormula::binary(k, nnf(f.children[0], negate, scope),
                                          nnf(f.children[1], negate, scope));
            }
            case Kind::implies: {
                // a -> b == ~a | b
                if (negate)
                    return FolFormula::binary(Kind::logical_and,
                                              nnf(f.children[0], false, scope),
                                              nnf(f.children[1], true, scope));
                return FolFormula::binary(Kind::logical_or, nnf(f.children[0], true, scope),
                                          nnf(f.children[1], false, scope));
            }
            case Kind::iff: {
                FolFormula fwd = FolFormula::binary(Kind::implies, f.children[0], f.children[1]);
                FolFormula bwd = FolFormula::binary(Kind::implies, f.children[1], f.children[0]);
                return nnf(FolFormula::binary(Kind::logical_and, std::move(fwd), std::move(bwd)),
                           negate, scope);
            }
            case Kind::forall:
            case Kind::exists: {
                Kind k = f.kind;
                if (negate) k = (k == Kind::forall) ? Kind::exists : Kind::forall;
                std::string fresh = fresh_var();
                auto prev = scope.find(f.name);
                std::optional<std::string> saved;
                if (prev != scope.end()) saved = prev->second;
                scope[f.name] = fresh;
                FolFormula body = nnf(f.children[0], negate, scope);
                if (saved)
                    scope[f.name] = *saved;
                else
                    scope.erase(f.name);
                return FolFormula::quantified(k, fresh, std::move(body));
            }
        }
        return f;
    }

    Term make_term(const std::string& arg, const std::map<std::string, Term>& skolems,
                   const std::set<std::string>& universal_vars) {
        auto it = skolems.find(arg);
        if (it != skolems.end()) return it->second;
        Term t;
        if (universal_vars.count(arg)) {
            t.is_var = true;
            t.name = arg;
        } else {
            t.is_var = false;
            t.name = arg;  // constant
        }
        return t;
    }

    void to_clauses(const FolFormula& matrix, const std::map<std::string, Term>& skolems,
                    const std::set<std::string>& universal_vars, std::vector<Clause>& out) {
        switch (matrix.kind) {
            case Kind::logical_and:
                to_clauses(matrix.children[0], skolems, universal_vars, out);
                to_clauses(matrix.children[1], skolems, universal_vars, out);
                return;
            case Kind::logical_or: {
                std::vector<Clause> left, right;
                to_clauses(matrix.children[0], skolems, universal_vars, left);
                to_clauses(matrix.children[1], skolems, universal_vars, right);
                for (const auto& l : left)
                    for (const auto& r : right) {
                        Clause c = l;
                        c.insert(c.end(), r.begin(), r.end());
                        out.push_back(std::move(c));
                    }
                return;
            }
            case Kind::logical_not: {
                const FolFormula& a = matrix.children[0];
                Literal lit;
                lit.negated = true;
                lit.pred = a.name;
                for (const auto& arg : a.args)
                    lit.args.push_back(make_term(arg, skolems, universal_vars));
                out.push_back({std::move(lit)});
                return;
            }
            case Kind::atom: {
                Literal lit;
                lit.pred = matrix.name;
                for (const auto& arg : matrix.args)
                    lit.args.push_back(make_term(arg, skolems, universal_vars));
                out.push_back({std::move(lit)});
                return;
            }
            default:
                return;
        }
    }

    std::vector<Clause> clausify(const FolFormula& f, bool negate) {
        std::map<std::string, std::string> scope;
        FolFormula n = nnf(f, negate, scope);

        // Collect quantifier structure while skolemizing.
        std::vector<std::string> universals;
        std::map<std::string, Term> skolems;
        // skolemize() strips quantifiers as it goes but needs the skolem map
        // live when converting atoms; interleave by collecting the matrix with
        // substitutions applied directly.
        std::vector<Clause> out;
        std::set<std::string> universal_vars;
        FolFormula matrix = strip(n, universals, skolems, universal_vars);
        to_clauses(matrix, skolems, universal_vars, out);
        return out;
    }

    // Like skolemize() but records universal variables and keeps the skolem
    // map alive for the whole subtree (variable names are unique after nnf).
    FolFormula strip(const FolFormula& f, std::vector<std::string>& universals,
                     std::map<std::string, Term>& skolems,
                     std::set<std::string>& universal_vars) {
        switch (f.kind) {
            case Kind::forall: {
                universals.push_back(f.name);
                universal_vars.insert(f.name);
                FolFormula body = strip(f.children[0], universals, skolems, universal_vars);
                universals.pop_back();
                return body;
            }
            case Kind::exists: {
                Term sk;
                sk.is_var = false;
                sk.name = "sk" + std::to_string(skolem_counter++);
                for (const auto& u : universals) {
                    Term v;
                    v.is_var = true;
                    v.name = u;
                    sk.args.push_back(std::move(v));
                }
                skolems[f.name] = sk;
                return strip(f.children[0], universals, skolems, universal_vars);
            }
            case Kind::logical_and:
            case Kind::logical_or:
                return FolFormula::binary(f.kind,
                                          strip(f.children[0], universals, skolems, universal_vars),
                                          strip(f.children[1], universals, skolems, universal_vars));
            case Kind::logical_not:
                return FolFormula::unary(Kind::logical_not,
                                         strip(f.children[0], universals, skolems, universal_vars));
            default:
                return f;
        }
    }
};

// Refutation search: returns true when the empty clause is derived.
bool refute(std::vector<Clause> usable, std::vector<Clause> sos, const EngineLimits& limits,
            std::chrono::steady_clock::time_point deadline, FolStats* stats) {
    std::set<std::string> seen;
    std::deque<Clause> queue;
    std::vector<Clause> processed;

    auto push = [&](Clause c) -> bool {  // returns true when empty clause found
        if (c.empty()) return true;
        if (c.size() > limits.max_clause_size) return false;
        if (is_tautology(c)) return false;
        std::string key = clause_key(c);
        if (!seen.insert(key).second) return false;
        queue.push_back(std::move(c));
        return false;
    };

    for (auto& c : usable) seen.insert(clause_key(c));
    for (auto& c : sos)
        if (push(c)) return true;

    std::size_t steps = 0;
    int rename_counter = 0;
    while (!queue.empty()) {
        if (std::chrono::steady_clock::now() > deadline) {
            if (stats) stats->limit_hit = true;
            return false;
        }
        Clause given = queue.front();
        queue.pop_front();

        // Factoring on the given clause.
        for (size_t i = 0; i < given.size(); ++i) {
            for (size_t j = i + 1; j < given.size(); ++j) {
                if (given[i].pred != given[j].pred || given[i].negated != given[j].negated)
                    continue;
                Subst s;
                if (!unify_args(given[i].args, given[j].args, s)) continue;
                Clause factored;
                for (size_t k = 0; k < given.size(); ++k)
                    if (k != j) factored.push_back(given[k]);
                if (push(apply_subst_clause(factored, s))) return true;
            }
        }

        auto resolve_pair = [&](const Clause& a, const Clause& b) -> bool {
            Clause rb = rename_clause(b, ++rename_counter);
            for (size_t i = 0; i < a.size(); ++i) {
                for (size_t j = 0; j < rb.size(); ++j) {
                    if (a[i].pred != rb[j].pred || a[i].negated == rb[j].negated) continue;
                    Subst s;
                    if (!unify_args(a[i].args, rb[j].args, s)) continue;
                    Clause resolvent;
                    for (size_t k = 0; k < a.size(); ++k)
                        if (k != i) resolvent.push_back(a[k]);
                    for (size_t k = 0; k < rb.size(); ++k)
                        if (k != j) resolvent.push_back(rb[k]);
                    ++steps;
                    if (stats) stats->resolution_steps = steps;
                    if (push(apply_subst_clause(resolvent, s))) return true;
                    if (steps >= limits.max_resolution_steps) {
                        if (stats) stats->limit_hit = true;
                        return false;
                    }
                }
            }
            return false;
        };

        if (resolve_pair(given, given)) return true;
        if (stats && stats->limit_hit) return false;
        for (const auto& u : usable) {
            if (resolve_pair(given, u)) return true;
            if (stats && stats->limit_hit) return false;
        }
        for (const auto& pr : processed) {
            if (resolve_pair(given, pr)) return true;
            if (stats && stats->limit_hit) return false;
        }
        processed.push_back(std::move(given));
    }
    if (stats && !stats->limit_hit) stats->saturated = true;
    return false;
}

}  // namespace

SolverVerdict solve_fol(const lang::FolProgram& p, const EngineLimits& limits,
                        FolStats* stats) {
    const auto deadline = std::chrono::steady_clock::now() + limits.timeout;
    FolStats local;
    FolStats* st = stats ? stats : &local;
    *st = {};

    Clausifier cl;
    std::vector<Clause> premise_clauses;
    for (const auto& prem : p.premises) {
        auto cs = cl.clausify(prem.formula, false);
        premise_clauses.insert(premise_clauses.end(), cs.begin(), cs.end());
    }

    // Entailed: premises + ~conclusion refutes.
    {
        FolStats phase;
        auto neg = cl.clausify(p.conclusion.formula, true);
        if (refute(premise_clauses, neg, limits, deadline, &phase)) {
            st->resolution_steps += phase.resolution_steps;
            return SolverVerdict::proved();
        }
        st->resolution_steps += phase.resolution_steps;
        st->limit_hit |= phase.limit_hit;
        // Set-of-support misses refutations that live entirely inside an
        // inconsistent premise set; check that case directly (ex falso).
        if (phase.saturated) {
            FolStats inc;
            if (!premise_clauses.empty() &&
                refute({}, premise_clauses, limits, deadline, &inc)) {
                st->resolution_steps += inc.resolution_steps;
                return SolverVerdict::proved();
            }
            st->resolution_steps += inc.resolution_steps;
            st->limit_hit |= inc.limit_hit;
        }
    }

    // Contradicted: premises + conclusion refutes.
    {
        FolStats phase;
        auto pos = cl.clausify(p.conclusion.formula, false);
        if (refute(premise_clauses, pos, limits, deadline, &phase)) {
            st->resolution_steps += phase.resolution_steps;
            return SolverVerdict::disproved();
        }
        st->resolution_steps += phase.resolution_steps;
        st->limit_hit |= phase.limit_hit;
        st->saturated = phase.saturated;
    }

    return SolverVerdict::unknown(st->limit_hit ? "resolution limit exceeded"
                                                : "saturated without refutation");
}

}  // namespace nsr::engines
