#include <algorithm>
#include <functional>
#include <map>

#include "nsr/engines.hpp"

namespace nsr::engines {

namespace {

using lang::LpAtom;

std::string atom_key(const std::string& pred, const std::vector<std::string>& args,
                     bool value) {
    std::string k = pred;
    for (const auto& a : args) k += "\x1f" + a;
    k += value ? "\x1f+" : "\x1f-";
    return k;
}

struct Derived {
    std::string pred;
    std::vector<std::string> args;
    bool value;
    int depth;
};

// Matches antecedents[idx..] against the derived set, extending the binding.
bool match_antecedents(const std::vector<LpAtom>& antecedents, size_t idx,
                       const std::vector<Derived>& derived,
                       std::map<std::string, std::string>& binding, int depth_so_far,
                       const std::function<bool(const std::map<std::string, std::string>&, int)>& emit) {
    if (idx == antecedents.size()) return emit(binding, depth_so_far);
    const LpAtom& a = antecedents[idx];
    bool any = false;
    for (const auto& d : derived) {
        if (d.pred != a.predicate || d.value != a.value || d.args.size() != a.args.size())
            continue;
        std::vector<std::pair<std::string, std::string>> added;
        bool ok = true;
        for (size_t i = 0; i < a.args.size(); ++i) {
            const std::string& pat = a.args[i];
            if (!pat.empty() && pat[0] == '$') {
                auto it = binding.find(pat);
                if (it == binding.end()) {
                    binding[pat] = d.args[i];
                    added.push_back({pat, d.args[i]});
                } else if (it->second != d.args[i]) {
                    ok = false;
                    break;
                }
            } else if (pat != d.args[i]) {
                ok = false;
                break;
            }
        }
        if (ok) {
            any |= match_antecedents(antecedents, idx + 1, derived, binding,
                                     std::max(depth_so_far, d.depth), emit);
        }
        for (auto& [k, v] : added) binding.erase(k);
    }
    return any;
}

}  // namespace

SolverVerdict solve_lp(const lang::LpProgram& p, const EngineLimits& limits,
                       LpStats* stats) {
    const auto deadline = std::chrono::steady_clock::now() + limits.timeout;

    std::vector<Derived> derived;
    std::map<std::string, size_t> index;  // atom key -> position in derived

    auto add = [&](const std::string& pred, const std::vector<std::string>& args,
                   bool value, int depth) -> bool {
        std::string key = atom_key(pred, args, value);
        auto it = index.find(key);
        if (it != index.end()) {
            // Keep the shallowest derivation so depth is order-independent.
            if (depth < derived[it->second].depth) {
                derived[it->second].depth = depth;
                return true;
            }
            return false;
        }
        index[key] = derived.size();
        derived.push_back({pred, args, value, depth});
        return true;
    };

    for (const auto& f : p.facts) add(f.atom.predicate, f.atom.args, f.atom.value, 0);

    bool limit_hit = false;
    bool changed = true;
    while (changed && !limit_hit) {
        changed = false;
        if (std::chrono::steady_clock::now() > deadline) {
            limit_hit = true;
            break;
        }
        for (const auto& rule : p.rules) {
            // Collect first, then add: matching iterates the derived set.
            std::vector<Derived> pending;
            std::map<std::string, std::string> binding;
            match_antecedents(
                rule.antecedents, 0, derived, binding, 0,
                [&](const std::map<std::string, std::string>& b, int depth) {
                    std::vector<std::string> args;
                    args.reserve(rule.consequent.args.size());
                    for (const auto& a : rule.consequent.args) {
                        if (!a.empty() && a[0] == '$')
                            args.push_back(b.at(a));
                        else
                            args.push_back(a);
                    }
                    pending.push_back({rule.consequent.predicate, std::move(args),
                                       rule.consequent.value, depth + 1});
                    return true;
                });
            for (auto& d : pending) {
                if (derived.size() >= limits.max_derived_facts) {
                    limit_hit = true;
                    break;
                }
                changed |= add(d.pred, d.args, d.value, d.depth);
            }
            if (limit_hit) break;
        }
    }

    if (stats) {
        stats->derived_facts = derived.size();
        stats->limit_hit = limit_hit;
        stats->query_depth = -1;
    }

    auto lookup = [&](bool value) -> const Derived* {
        auto it = index.find(atom_key(p.query.predicate, p.query.args, value));
        return it == index.end() ? nullptr : &derived[it->second];
    };

    if (const Derived* d = lookup(p.query.value)) {
        if (stats) stats->query_depth = d->depth;
        return SolverVerdict::proved();
    }
    if (const Derived* d = lookup(!p.query.value)) {
        if (stats) stats->query_depth = d->depth;
        return SolverVerdict::disproved();
    }
    if (limit_hit) return SolverVerdict::unknown("derivation limit exceeded");
    return SolverVerdict::unknown();
}

}  // namespace nsr::engines
