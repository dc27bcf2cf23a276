#include <algorithm>
#include <functional>
#include <map>

#include "nsr/engines.hpp"

namespace nsr::engines {

namespace {

using lang::CspConstraint;
using lang::CspModel;
using lang::CspOperand;

struct Var {
    std::string key;  // "array[Member]"
    long long lo, hi;
};

struct BinCmp {
    int a;  // variable index, -1 when literal
    int b;
    long long a_off, b_off;  // value used is var+offset (or the literal)
    long long a_lit, b_lit;
    lang::CmpOp op;
};

}  // namespace

SolverVerdict solve_csp(const CspModel& m, const EngineLimits& limits) {
    const auto deadline = std::chrono::steady_clock::now() + limits.timeout;

    // Declaration-order variables: arrays, then enum members.
    std::vector<Var> vars;
    std::map<std::string, int> var_index;
    for (const auto& arr : m.arrays) {
        const lang::CspEnum* e = m.find_enum(arr.index_enum);
        if (!e) return SolverVerdict::engine_error("array over undeclared enum " + arr.index_enum);
        for (const auto& mem : e->members) {
            std::string key = arr.name + "[" + mem + "]";
            var_index[key] = static_cast<int>(vars.size());
            vars.push_back({key, arr.lo, arr.hi});
        }
    }

    // Compile constraints.
    std::vector<BinCmp> cmps;
    std::vector<std::vector<int>> all_diff_groups;
    for (const auto& c : m.constraints) {
        if (c.kind == CspConstraint::Kind::all_different) {
            const lang::CspArray* arr = m.find_array(c.array);
            if (!arr) return SolverVerdict::engine_error("all_different over undeclared array");
            const lang::CspEnum* e = m.find_enum(arr->index_enum);
            std::vector<int> group;
            for (const auto& mem : e->members)
                group.push_back(var_index.at(c.array + "[" + mem + "]"));
            all_diff_groups.push_back(std::move(group));
            continue;
        }
        BinCmp bc{};
        auto fill = [&](const CspOperand& op, int& idx, long long& off, long long& lit) -> bool {
            if (op.is_literal) {
                idx = -1;
                lit = op.literal;
                off = 0;
                return true;
            }
            auto it = var_index.find(op.array + "[" + op.member + "]");
            if (it == var_index.end()) return false;
            idx = it->second;
            off = op.offset;
            return true;
        };
        if (!fill(c.lhs, bc.a, bc.a_off, bc.a_lit) || !fill(c.rhs, bc.b, bc.b_off, bc.b_lit))
            return SolverVerdict::engine_error("constraint references undeclared variable");
        bc.op = c.op;
        cmps.push_back(bc);
    }

    const int n = static_cast<int>(vars.size());
    std::vector<std::vector<long long>> domains(n);
    for (int i = 0; i < n; ++i)
        for (long long v = vars[i].lo; v <= vars[i].hi; ++v) domains[i].push_back(v);

    std::vector<long long> assignment(n, 0);
    std::vector<bool> assigned(n, false);

    auto cmp_holds = [&](const BinCmp& c) -> std::optional<bool> {
        long long lhs, rhs;
        if (c.a >= 0) {
            if (!assigned[c.a]) return std::nullopt;
            lhs = assignment[c.a] + c.a_off;
        } else {
            lhs = c.a_lit;
        }
        if (c.b >= 0) {
            if (!assigned[c.b]) return std::nullopt;
            rhs = assignment[c.b] + c.b_off;
        } else {
            rhs = c.b_lit;
        }
        return lang::eval_cmp(c.op, lhs, rhs);
    };

    SolverVerdict verdict;
    verdict.kind = SolverVerdict::Kind::solutions;
    bool overflow = false;
    bool timed_out = false;

    // Forward check: given a tentative value for var i, is any constraint
    // with all other referenced vars assigned violated?
    auto consistent = [&](int i, long long value) -> bool {
        assignment[i] = value;
        assigned[i] = true;
        bool ok = true;
        for (const auto& c : cmps) {
            auto h = cmp_holds(c);
            if (h && !*h) {
                ok = false;
                break;
            }
        }
        if (ok) {
            for (const auto& g : all_diff_groups) {
                bool in_group = std::find(g.begin(), g.end(), i) != g.end();
                if (!in_group) continue;
                for (int j : g) {
                    if (j != i && assigned[j] && assignment[j] == value) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
        }
        assigned[i] = false;
        return ok;
    };

    std::function<void(int)> search = [&](int i) {
        if (overflow || timed_out) return;
        if (std::chrono::steady_clock::now() > deadline) {
            timed_out = true;
            return;
        }
        if (i == n) {
            if (verdict.solutions.size() >= limits.max_solutions) {
                overflow = true;
                return;
            }
            std::map<std::string, long long> row;
            for (int k = 0; k < n; ++k) row[vars[k].key] = assignment[k];
            verdict.solutions.push_back(std::move(row));
            return;
        }
        for (long long v : domains[i]) {
            if (!consistent(i, v)) continue;
            assignment[i] = v;
            assigned[i] = true;
            search(i + 1);
            assigned[i] = false;
            if (overflow || timed_out) return;
        }
    };
    search(0);

    if (timed_out) return SolverVerdict::engine_error("csp search timed out");
    if (overflow) {
        verdict.solutions_truncated = true;
        verdict.detail = "solution overflow: enumeration cap reached";
    }
    return verdict;
}

}  // namespace nsr::engines
