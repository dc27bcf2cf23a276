#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "nsr/router.hpp"

namespace nsr::router {

namespace {

using json = nlohmann::ordered_json;

bool is_virtual(const std::string& node) { return node == kStart || node == kEnd; }

std::string solver_kind_of_node(const std::string& node) {
    size_t colon = node.find(':');
    return colon == std::string::npos ? node : node.substr(0, colon);
}

bool is_solver_node(const std::string& node) {
    std::string kind = solver_kind_of_node(node);
    return reasoning_type_for_kind(kind).has_value() || kind == "neural_solver";
}

}  // namespace

bool MemoryStore::put(const std::string& key, std::string value) {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.emplace(key, std::move(value)).second;
}

std::optional<std::string> MemoryStore::get(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::map<std::string, std::string> MemoryStore::snapshot() const {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_;
}

BuildResult build_plan(const DecomposedInput& input, const SolverRegistry& registry) {
    BuildResult res;
    RoutingPlan plan;
    plan.order.push_back(kStart);

    std::map<std::string, int> instance_counts;
    std::vector<std::string> solver_nodes;
    std::vector<std::pair<std::string, std::string>> problem_edges, end_edges, start_edges;

    for (const auto& sp : input.sub_problems) {
        std::string kind;
        if (registry.portfolio.count(sp.reasoning_type)) {
            kind = solver_kind_for(sp.reasoning_type);
        } else if (registry.fallback) {
            kind = "neural_solver";
        } else {
            res.issues.push_back("no solver for type " + to_string(sp.reasoning_type) +
                                 " and no fallback configured");
            return res;
        }
        std::string node = kind + ":" + std::to_string(++instance_counts[kind]);
        plan.order.push_back(sp.problem_id);
        solver_nodes.push_back(node);
        problem_edges.emplace_back(sp.problem_id, node);
        end_edges.emplace_back(node, kEnd);
        start_edges.emplace_back(kStart, sp.problem_id);
    }
    for (const auto& n : solver_nodes) plan.order.push_back(n);
    plan.order.push_back(kEnd);

    plan.edges = problem_edges;
    plan.edges.insert(plan.edges.end(), end_edges.begin(), end_edges.end());
    plan.edges.insert(plan.edges.end(), start_edges.begin(), start_edges.end());

    res.plan = std::move(plan);
    return res;
}

std::vector<std::string> validate_plan(const RoutingPlan& plan) {
    std::vector<std::string> violations;

    std::map<std::string, int> counts;
    for (const auto& n : plan.order) ++counts[n];
    for (const auto& [n, c] : counts)
        if (c > 1) violations.push_back("duplicate node: " + n);
    if (!counts.count(kStart)) violations.push_back("missing <START> node");
    if (!counts.count(kEnd)) violations.push_back("no terminal marker <END>");
    if (!plan.order.empty() && plan.order.front() != kStart)
        violations.push_back("order must begin with <START>");
    if (!plan.order.empty() && plan.order.back() != kEnd)
        violations.push_back("order must end with <END>");

    std::map<std::string, size_t> position;
    for (size_t i = 0; i < plan.order.size(); ++i) position[plan.order[i]] = i;

    std::map<std::string, int> in_degree, out_degree;
    for (const auto& [s, t] : plan.edges) {
        if (!position.count(s)) violations.push_back("edge source not in plan: " + s);
        if (!position.count(t)) violations.push_back("edge target not in plan: " + t);
        if (position.count(s) && position.count(t)) {
            if (position[s] >= position[t])
                violations.push_back("order is not topological for edge " + s + " -> " + t);
            ++out_degree[s];
            ++in_degree[t];
        }
    }
    // The topological-order check above already rules out cycles among
    // ordered nodes; still verify reachability endpoints.
    for (const auto& n : plan.order) {
        if (is_virtual(n)) continue;
        if (in_degree[n] == 0) violations.push_back("node not reachable from <START>: " + n);
        if (out_degree[n] == 0) violations.push_back("sink does not feed <END>: " + n);
    }
    return violations;
}

std::string serialize_plan(const RoutingPlan& plan) {
    json j;
    j["agents"] = json::array();
    for (const auto& n : plan.order)
        if (n != kStart) j["agents"].push_back(n);
    j["edges"] = json::array();
    for (const auto& [s, t] : plan.edges)
        if (s != kStart) j["edges"].push_back(json::array({s, t}));
    return j.dump(2);
}

BuildResult parse_plan(const std::string& text) {
    BuildResult res;
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        res.issues.push_back("plan is not a valid JSON object");
        return res;
    }
    if (!j.contains("agents") || !j["agents"].is_array() || !j.contains("edges") ||
        !j["edges"].is_array()) {
        res.issues.push_back("plan must have \"agents\" and \"edges\" arrays");
        return res;
    }
    RoutingPlan plan;
    plan.order.push_back(kStart);
    for (const auto& a : j["agents"]) {
        if (!a.is_string()) {
            res.issues.push_back("agent entries must be strings");
            return res;
        }
        plan.order.push_back(a.get<std::string>());
    }
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
            res.issues.push_back("edge entries must be [source, target] string pairs");
            return res;
        }
        plan.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    // <START> and its fan-out are implicit on the wire: restore an edge to
    // every node without an incoming edge.
    std::set<std::string> has_incoming;
    for (const auto& [s, t] : plan.edges) has_incoming.insert(t);
    for (const auto& n : plan.order) {
        if (is_virtual(n) || has_incoming.count(n)) continue;
        plan.edges.emplace_back(kStart, n);
    }
    res.plan = std::move(plan);
    return res;
}

std::map<std::string, std::string> routed_solvers(const RoutingPlan& plan) {
    std::map<std::string, std::string> out;
    for (const auto& [s, t] : plan.edges) {
        if (is_virtual(s) || !is_solver_node(t)) continue;
        if (is_solver_node(s)) continue;  // solver-to-solver edges carry no routing
        out[s] = solver_kind_of_node(t);
    }
    return out;
}

std::vector<std::string> execute(const RoutingPlan& plan, const DecomposedInput& input,
                                 MemoryStore& memory, const SolverRegistry& registry,
                                 RunTrace* trace) {
    std::map<std::string, const SubProblem*> problems;
    for (const auto& sp : input.sub_problems) problems[sp.problem_id] = &sp;

    std::map<std::string, std::vector<std::string>> predecessors;
    for (const auto& [s, t] : plan.edges) predecessors[t].push_back(s);

    std::map<std::string, std::string> answers;  // problem_id -> option label

    for (const auto& node : plan.order) {
        if (is_virtual(node)) continue;
        if (problems.count(node)) {
            // Problem nodes publish their sub-problem for downstream solvers.
            const SubProblem* sp = problems[node];
            std::string payload;
            for (const auto& [k, v] : sp->components) payload += k + ": " + v + "\n";
            memory.put("result_" + node, payload);
            continue;
        }
        if (!is_solver_node(node)) continue;

        std::string kind = solver_kind_of_node(node);
        SolverFn fn;
        if (auto type = reasoning_type_for_kind(kind)) {
            auto it = registry.portfolio.find(*type);
            if (it != registry.portfolio.end()) fn = it->second;
        }
        if (!fn) fn = registry.fallback;

        for (const auto& pred : predecessors[node]) {
            auto it = problems.find(pred);
            if (it == problems.end()) continue;  // solver-to-solver input, no semantics
            const SubProblem& sp = *it->second;

            NodeTrace nt;
            if (!fn) {
                nt.failed = true;
                nt.failure_note = "no solver available for node " + node;
            } else {
                nt = fn(sp);
            }
            nt.node = node;
            nt.solver_kind = kind;

            std::string answer = nt.failed ? kUnknownAnswer : nt.converted_answer;
            if (answer.empty()) answer = kUnknownAnswer;
            answers[sp.problem_id] = answer;
            memory.put("result_" + node + (predecessors[node].size() > 1 ? "_" + pred : ""),
                       answer);
            if (trace) trace->nodes.push_back(std::move(nt));
        }
    }

    // <END> aggregation in sub-problem order.
    std::vector<std::string> out;
    for (const auto& sp : input.sub_problems) {
        auto it = answers.find(sp.problem_id);
        out.push_back(it == answers.end() ? kUnknownAnswer : it->second);
    }
    return out;
}

}  // namespace nsr::router
