#include <algorithm>
#include <functional>
#include <map>
#include <optional>

#include "nsr/engines.hpp"

namespace nsr::engines {

namespace {

using lang::Rational;
using lang::SmtScript;
using lang::SmtSort;
using lang::SmtTerm;

enum class CmpKind { gt, lt, ge, le, eq };

struct Atom {
    bool is_bool_sym = false;
    std::string sym;      // constant name
    CmpKind op = CmpKind::eq;
    Rational value;       // comparison literal

    bool operator==(const Atom&) const = default;
};

// Propositional skeleton node over atom indices.
struct Prop {
    enum class Kind { atom, negated_atom, land, lor, lnot, constant };
    Kind kind = Kind::constant;
    int atom = -1;
    bool value = true;
    std::vector<Prop> kids;
};

struct Translator {
    const SmtScript& script;
    std::vector<Atom> atoms;
    std::string unsupported;

    int intern(Atom a) {
        for (size_t i = 0; i < atoms.size(); ++i)
            if (atoms[i] == a) return static_cast<int>(i);
        atoms.push_back(std::move(a));
        return static_cast<int>(atoms.size() - 1);
    }

    std::optional<Prop> translate(const SmtTerm& t) {
        switch (t.kind) {
            case SmtTerm::Kind::boolean: {
                Prop p;
                p.kind = Prop::Kind::constant;
                p.value = t.boolean_value;
                return p;
            }
            case SmtTerm::Kind::symbol: {
                Atom a;
                a.is_bool_sym = true;
                a.sym = t.symbol;
                Prop p;
                p.kind = Prop::Kind::atom;
                p.atom = intern(std::move(a));
                return p;
            }
            case SmtTerm::Kind::numeral:
                unsupported = "bare numeral in boolean position";
                return std::nullopt;
            case SmtTerm::Kind::app:
                break;
        }
        const std::string& op = t.op;
        if (op == "and" || op == "or") {
            Prop p;
            p.kind = op == "and" ? Prop::Kind::land : Prop::Kind::lor;
            for (const auto& a : t.args) {
                auto k = translate(a);
                if (!k) return std::nullopt;
                p.kids.push_back(std::move(*k));
            }
            return p;
        }
        if (op == "not") {
            auto k = translate(t.args[0]);
            if (!k) return std::nullopt;
            Prop p;
            p.kind = Prop::Kind::lnot;
            p.kids.push_back(std::move(*k));
            return p;
        }
        // Comparison or equality.
        const SmtTerm& lhs = t.args[0];
        const SmtTerm& rhs = t.args[1];
        auto sym_of = [&](const SmtTerm& x) -> std::optional<std::string> {
            if (x.kind == SmtTerm::Kind::symbol) return x.symbol;
            return std::nullopt;
        };
        auto num_of = [&](const SmtTerm& x) -> std::optional<Rational> {
            if (x.kind == SmtTerm::Kind::numeral) return x.number;
            return std::nullopt;
        };
        auto bool_of = [&](const SmtTerm& x) -> std::optional<bool> {
            if (x.kind == SmtTerm::Kind::boolean) return x.boolean_value;
            return std::nullopt;
        };

        if (op == "=") {
            // Bool const pinned to a literal folds into the skeleton.
            for (bool flip : {false, true}) {
                const SmtTerm& s = flip ? rhs : lhs;
                const SmtTerm& v = flip ? lhs : rhs;
                auto sy = sym_of(s);
                auto bv = bool_of(v);
                if (sy && bv && script.find_decl(*sy) &&
                    script.find_decl(*sy)->sort == SmtSort::bool_sort) {
                    Atom a;
                    a.is_bool_sym = true;
                    a.sym = *sy;
                    Prop p;
                    p.kind = *bv ? Prop::Kind::atom : Prop::Kind::negated_atom;
                    p.atom = intern(std::move(a));
                    return p;
                }
            }
        }

        CmpKind ck;
        if (op == ">")
            ck = CmpKind::gt;
        else if (op == "<")
            ck = CmpKind::lt;
        else if (op == ">=")
            ck = CmpKind::ge;
        else if (op == "<=")
            ck = CmpKind::le;
        else if (op == "=")
            ck = CmpKind::eq;
        else {
            unsupported = "operator " + op;
            return std::nullopt;
        }

        auto ls = sym_of(lhs);
        auto rn = num_of(rhs);
        if (!ls || !rn) {
            // Allow literal-on-the-left by mirroring the comparison.
            auto rs = sym_of(rhs);
            auto ln = num_of(lhs);
            if (rs && ln) {
                CmpKind mirrored = ck;
                switch (ck) {
                    case CmpKind::gt: mirrored = CmpKind::lt; break;
                    case CmpKind::lt: mirrored = CmpKind::gt; break;
                    case CmpKind::ge: mirrored = CmpKind::le; break;
                    case CmpKind::le: mirrored = CmpKind::ge; break;
                    case CmpKind::eq: break;
                }
                ls = rs;
                rn = ln;
                ck = mirrored;
            } else {
                unsupported = "comparison not between a constant and a literal";
                return std::nullopt;
            }
        }
        Atom a;
        a.sym = *ls;
        a.op = ck;
        a.value = *rn;
        Prop p;
        p.kind = Prop::Kind::atom;
        p.atom = intern(std::move(a));
        return p;
    }
};

std::optional<bool> eval_prop(const Prop& p, const std::vector<std::optional<bool>>& vals) {
    switch (p.kind) {
        case Prop::Kind::constant: return p.value;
        case Prop::Kind::atom: return vals[p.atom];
        case Prop::Kind::negated_atom: {
            auto v = vals[p.atom];
            if (!v) return std::nullopt;
            return !*v;
        }
        case Prop::Kind::lnot: {
            auto v = eval_prop(p.kids[0], vals);
            if (!v) return std::nullopt;
            return !*v;
        }
        case Prop::Kind::land: {
            bool any_unknown = false;
            for (const auto& k : p.kids) {
                auto v = eval_prop(k, vals);
                if (!v)
                    any_unknown = true;
                else if (!*v)
                    return false;
            }
            if (any_unknown) return std::nullopt;
            return true;
        }
        case Prop::Kind::lor: {
            bool any_unknown = false;
            for (const auto& k : p.kids) {
                auto v = eval_prop(k, vals);
                if (!v)
                    any_unknown = true;
                else if (*v)
                    return true;
            }
            if (any_unknown) return std::nullopt;
            return false;
        }
    }
    return std::nullopt;
}

// Interval feasibility for one numeric constant under chosen atom polarities.
struct NumericDomain {
    std::optional<Rational> lo, hi;
    bool lo_strict = false, hi_strict = false;
    std::optional<Rational> pin;
    std::vector<Rational> excluded;
    bool infeasible = false;

    void add(CmpKind op, const Rational& v, bool polarity) {
        // A false atom is the complementary comparison.
        CmpKind eff = op;
        if (!polarity) {
            switch (op) {
                case CmpKind::gt: eff = CmpKind::le; break;
                case CmpKind::lt: eff = CmpKind::ge; break;
                case CmpKind::ge: eff = CmpKind::lt; break;
                case CmpKind::le: eff = CmpKind::gt; break;
                case CmpKind::eq:
                    excluded.push_back(v);
                    return;
            }
        }
        switch (eff) {
            case CmpKind::gt: tighten_lo(v, true); break;
            case CmpKind::ge: tighten_lo(v, false); break;
            case CmpKind::lt: tighten_hi(v, true); break;
            case CmpKind::le: tighten_hi(v, false); break;
            case CmpKind::eq:
                if (pin && !(*pin == v))
                    infeasible = true;
                else
                    pin = v;
                break;
        }
    }

    void tighten_lo(const Rational& v, bool strict) {
        if (!lo || *lo < v || (*lo == v && strict)) {
            lo = v;
            lo_strict = strict;
        }
    }
    void tighten_hi(const Rational& v, bool strict) {
        if (!hi || v < *hi || (*hi == v && strict)) {
            hi = v;
            hi_strict = strict;
        }
    }

    bool contains(const Rational& v) const {
        if (lo && (v < *lo || (v == *lo && lo_strict))) return false;
        if (hi && (*hi < v || (v == *hi && hi_strict))) return false;
        return true;
    }

    bool feasible(bool integral) const {
        if (infeasible) return false;
        auto is_excluded = [&](const Rational& v) {
            return std::find(excluded.begin(), excluded.end(), v) != excluded.end();
        };
        if (pin) {
            if (integral && !pin->is_integer()) return false;
            return contains(*pin) && !is_excluded(*pin);
        }
        auto floor_r = [](const Rational& r) -> long long {
            long long q = r.num / r.den;
            if (r.num % r.den != 0 && r.num < 0) --q;
            return q;
        };
        if (integral) {
            long long first, last;
            bool has_first = false, has_last = false;
            if (lo) {
                long long f = floor_r(*lo);
                first = (Rational(f) == *lo && !lo_strict) ? f : f + 1;
                has_first = true;
            }
            if (hi) {
                long long f = floor_r(*hi);
                last = (Rational(f) == *hi && hi_strict) ? f - 1 : f;
                has_last = true;
            }
            if (has_first && has_last) {
                if (first > last) return false;
                long long count = last - first + 1;
                long long excluded_in = 0;
                for (const auto& e : excluded)
                    if (e.is_integer() && e.num >= first && e.num <= last) ++excluded_in;
                return count > excluded_in;
            }
            return true;  // half-open integer range beats finitely many exclusions
        }
        if (lo && hi) {
            if (*hi < *lo) return false;
            if (*lo == *hi) {
                if (lo_strict || hi_strict) return false;
                return !is_excluded(*lo);
            }
            return true;  // positive-width rational interval
        }
        return true;
    }
};

}  // namespace

SolverVerdict solve_smt(const SmtScript& s, const EngineLimits& limits) {
    const auto deadline = std::chrono::steady_clock::now() + limits.timeout;

    Translator tr{s};
    std::vector<Prop> skeleton;
    for (const auto& a : s.assertions) {
        auto p = tr.translate(a);
        if (!p)
            return SolverVerdict::unknown("unsupported fragment (" + tr.unsupported +
                                          "); configure an external SMT engine");
        skeleton.push_back(std::move(*p));
    }

    const size_t n = tr.atoms.size();
    std::vector<std::optional<bool>> vals(n);
    size_t nodes = 0;
    bool capped = false, timed_out = false;

    auto theory_feasible = [&]() -> bool {
        std::map<std::string, NumericDomain> domains;
        for (size_t i = 0; i < n; ++i) {
            const Atom& a = tr.atoms[i];
            if (a.is_bool_sym) continue;  // free boolean, any value realizable
            domains[a.sym].add(a.op, a.value, *vals[i]);
        }
        for (auto& [sym, dom] : domains) {
            const lang::SmtDecl* d = s.find_decl(sym);
            bool integral = d && d->sort == SmtSort::int_sort;
            if (!dom.feasible(integral)) return false;
        }
        return true;
    };

    std::function<bool(size_t)> search = [&](size_t i) -> bool {
        if (capped || timed_out) return false;
        if (++nodes > limits.bool_enumeration_cap) {
            capped = true;
            return false;
        }
        if (std::chrono::steady_clock::now() > deadline) {
            timed_out = true;
            return false;
        }
        // Prune when some assertion is already false.
        for (const auto& p : skeleton) {
            auto v = eval_prop(p, vals);
            if (v && !*v) return false;
        }
        if (i == n) {
            for (const auto& p : skeleton) {
                auto v = eval_prop(p, vals);
                if (!v || !*v) return false;
            }
            return theory_feasible();
        }
        for (bool b : {true, false}) {
            vals[i] = b;
            if (search(i + 1)) return true;
        }
        vals[i] = std::nullopt;
        return false;
    };

    if (search(0)) return SolverVerdict::sat();
    if (capped) return SolverVerdict::unknown("boolean enumeration cap reached");
    if (timed_out) return SolverVerdict::unknown("smt search timed out");
    return SolverVerdict::unsat();
}

}  // namespace nsr::engines
