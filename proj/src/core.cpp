#include "nsr/core.hpp"

#include <algorithm>
#include <stdexcept>

namespace nsr {

std::string to_string(ReasoningType t) {
    switch (t) {
        case ReasoningType::LP: return "LP";
        case ReasoningType::FOL: return "FOL";
        case ReasoningType::CSP: return "CSP";
        case ReasoningType::SMT: return "SMT";
    }
    return "?";
}

std::optional<ReasoningType> parse_reasoning_type(const std::string& token) {
    if (token == "LP") return ReasoningType::LP;
    if (token == "FOL") return ReasoningType::FOL;
    if (token == "CSP") return ReasoningType::CSP;
    if (token == "SMT" || token == "SAT") return ReasoningType::SMT;
    return std::nullopt;
}

std::string solver_kind_for(ReasoningType t) {
    switch (t) {
        case ReasoningType::LP: return "lp_solver";
        case ReasoningType::FOL: return "fol_solver";
        case ReasoningType::CSP: return "csp_solver";
        case ReasoningType::SMT: return "smt_solver";
    }
    return "?";
}

std::optional<ReasoningType> reasoning_type_for_kind(const std::string& kind) {
    if (kind == "lp_solver") return ReasoningType::LP;
    if (kind == "fol_solver") return ReasoningType::FOL;
    if (kind == "csp_solver") return ReasoningType::CSP;
    if (kind == "smt_solver") return ReasoningType::SMT;
    return std::nullopt;
}

const std::vector<std::string>& required_components(ReasoningType t) {
    static const std::vector<std::string> logic = {"premise", "hypothesis"};
    static const std::vector<std::string> csp = {"context", "question"};
    static const std::vector<std::string> smt = {"trial_description", "sample_description"};
    switch (t) {
        case ReasoningType::LP:
        case ReasoningType::FOL: return logic;
        case ReasoningType::CSP: return csp;
        case ReasoningType::SMT: return smt;
    }
    return logic;
}

std::string option_label(const std::string& option) {
    // Label form: one or two uppercase letters followed by ')'.
    size_t i = 0;
    while (i < option.size() && option[i] >= 'A' && option[i] <= 'Z' && i < 2) ++i;
    if (i > 0 && i < option.size() && option[i] == ')') return option.substr(0, i + 1);
    return {};
}

std::vector<std::string> label_options(const std::vector<std::string>& options) {
    std::vector<std::string> out;
    out.reserve(options.size());
    for (size_t i = 0; i < options.size(); ++i) {
        const std::string& o = options[i];
        if (!option_label(o).empty()) {
            out.push_back(o);
        } else {
            std::string label(1, static_cast<char>('A' + i % 26));
            out.push_back(label + ") " + o);
        }
    }
    return out;
}

std::string to_string(SolverVerdict::Kind k) {
    switch (k) {
        case SolverVerdict::Kind::proved: return "proved";
        case SolverVerdict::Kind::disproved: return "disproved";
        case SolverVerdict::Kind::unknown: return "unknown";
        case SolverVerdict::Kind::sat: return "sat";
        case SolverVerdict::Kind::unsat: return "unsat";
        case SolverVerdict::Kind::solutions: return "solutions";
        case SolverVerdict::Kind::engine_error: return "engine_error";
    }
    return "?";
}

std::string to_string(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::invalid_decomposition: return "InvalidDecomposition";
        case ErrorCategory::incorrect_decomposition: return "IncorrectDecomposition";
        case ErrorCategory::invalid_routing: return "InvalidRouting";
        case ErrorCategory::incorrect_routing: return "IncorrectRouting";
        case ErrorCategory::invalid_formalization: return "InvalidFormalization";
        case ErrorCategory::semantic_error: return "SemanticError";
    }
    return "?";
}

NodeTrace* RunTrace::find_node(const std::string& name) {
    for (auto& n : nodes)
        if (n.node == name) return &n;
    return nullptr;
}

const NodeTrace* RunTrace::find_node(const std::string& name) const {
    for (const auto& n : nodes)
        if (n.node == name) return &n;
    return nullptr;
}

std::optional<ErrorCategory> classify_failure(const RunTrace& trace,
                                              std::optional<ReasoningType> gold_type,
                                              std::optional<std::string> gold_answer) {
    if (gold_answer && !trace.final_answers.empty() &&
        trace.final_answers.front() == *gold_answer) {
        return std::nullopt;  // not a failure
    }

    // Earliest failing stage wins.
    if (!trace.decomposition_parsed || !trace.decomposition ||
        trace.decomposition->sub_problems.empty()) {
        return ErrorCategory::invalid_decomposition;
    }
    if (gold_type) {
        for (const auto& sp : trace.decomposition->sub_problems) {
            if (sp.reasoning_type != *gold_type)
                return ErrorCategory::incorrect_decomposition;
        }
    }
    if (!trace.plan_built || !trace.plan_valid || trace.routed_solver.empty()) {
        return ErrorCategory::invalid_routing;
    }
    if (gold_type) {
        const std::string expected = solver_kind_for(*gold_type);
        for (const auto& [pid, kind] : trace.routed_solver) {
            if (kind != expected) return ErrorCategory::incorrect_routing;
        }
    }
    for (const auto& n : trace.nodes) {
        if (n.solver_kind.empty()) continue;
        bool any_accepted = false;
        for (const auto& a : n.attempts) any_accepted |= a.accepted;
        if (!n.attempts.empty() && !any_accepted)
            return ErrorCategory::invalid_formalization;
    }
    return ErrorCategory::semantic_error;
}

}  // namespace nsr
