#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nsr/core.hpp"

namespace nsr::router {

inline const std::string kStart = "<START>";
inline const std::string kEnd = "<END>";

// Executable workflow graph. `order` is the strict total order over the
// nodes (topological for `edges`), always starting with <START> and ending
// with <END>.
struct RoutingPlan {
    std::vector<std::string> order;
    std::vector<std::pair<std::string, std::string>> edges;

    bool operator==(const RoutingPlan&) const = default;
};

// Shared cache for intermediate results; write-once per key per run.
class MemoryStore {
  public:
    // False when the key already exists (the first write wins).
    bool put(const std::string& key, std::string value);
    std::optional<std::string> get(const std::string& key) const;
    std::map<std::string, std::string> snapshot() const;

  private:
    mutable std::mutex mu_;
    std::map<std::string, std::string> entries_;
};

// A solver invocation: formalize, solve and convert one sub-problem,
// reporting everything through the returned node trace.
using SolverFn = std::function<NodeTrace(const SubProblem&)>;

struct SolverRegistry {
    std::map<ReasoningType, SolverFn> portfolio;
    SolverFn fallback;  // runs as "neural_solver" when a type has no entry
};

struct BuildResult {
    std::optional<RoutingPlan> plan;
    std::vector<std::string> issues;

    bool ok() const { return plan.has_value(); }
};

// Deterministic plan: <START> -> each problem node -> a fresh typed solver
// instance ("csp_solver:1", ...) -> <END>. Fails when a sub-problem's type
// has no portfolio entry and no fallback is configured.
BuildResult build_plan(const DecomposedInput& input, const SolverRegistry& registry);

// Structural checks: single <START>/<END>, termination at <END>, unique
// nodes, edge endpoint membership, acyclicity, order consistent with edges,
// sources fed by <START> and sinks feeding <END>. Empty result means valid.
std::vector<std::string> validate_plan(const RoutingPlan& plan);

// Wire object: {"agents": [...], "edges": [[s, t], ...]}. <START> and its
// edges are implicit on the wire and restored on parse.
std::string serialize_plan(const RoutingPlan& plan);
BuildResult parse_plan(const std::string& text);

// problem_id -> solver kind ("csp_solver", instance number stripped).
std::map<std::string, std::string> routed_solvers(const RoutingPlan& plan);

// Answer recorded for a sub-problem whose node failed.
inline const std::string kUnknownAnswer = "Unknown";

// Runs the plan in order, isolating node failures; returns the final
// answers in sub-problem order. Node traces are appended to `trace` when
// provided.
std::vector<std::string> execute(const RoutingPlan& plan, const DecomposedInput& input,
                                 MemoryStore& memory, const SolverRegistry& registry,
                                 RunTrace* trace = nullptr);

}  // namespace nsr::router
