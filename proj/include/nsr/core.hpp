#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nsr {

// The four reasoning paradigms handled by the solver portfolio.
enum class ReasoningType { LP, FOL, CSP, SMT };

std::string to_string(ReasoningType t);
// Accepts "LP", "FOL", "CSP", "SMT" and the alias "SAT" (mapped to SMT).
std::optional<ReasoningType> parse_reasoning_type(const std::string& token);

// Solver agent name for a reasoning type, e.g. "lp_solver".
std::string solver_kind_for(ReasoningType t);
std::optional<ReasoningType> reasoning_type_for_kind(const std::string& kind);

// One decomposed question with its typed components.
struct SubProblem {
    std::string problem_id;  // matches ques_<k>
    ReasoningType reasoning_type = ReasoningType::LP;
    // LP/FOL: premise, hypothesis, options; CSP: context, question, options;
    // SMT: trial_description, sample_description, options.
    std::map<std::string, std::string> components;
    std::vector<std::string> options;  // labeled, e.g. "A) True"

    bool operator==(const SubProblem&) const = default;
};

struct DecomposedInput {
    std::vector<SubProblem> sub_problems;
    std::string overall_goal;

    bool operator==(const DecomposedInput&) const = default;
};

// Required component keys for a reasoning type (options handled separately).
const std::vector<std::string>& required_components(ReasoningType t);

// Ensures every option starts with a label like "A) "; assigns labels when absent.
std::vector<std::string> label_options(const std::vector<std::string>& options);
// Leading label of an option ("A) True" -> "A)"), empty when unlabeled.
std::string option_label(const std::string& option);

// Paradigm-level solver result.
struct SolverVerdict {
    enum class Kind { proved, disproved, unknown, sat, unsat, solutions, engine_error };

    Kind kind = Kind::unknown;
    // Only for Kind::solutions: each row maps "array[Member]" -> value.
    std::vector<std::map<std::string, long long>> solutions;
    bool solutions_truncated = false;  // enumeration cap was hit
    std::string detail;

    static SolverVerdict proved() { return {Kind::proved, {}, false, {}}; }
    static SolverVerdict disproved() { return {Kind::disproved, {}, false, {}}; }
    static SolverVerdict unknown(std::string why = {}) {
        return {Kind::unknown, {}, false, std::move(why)};
    }
    static SolverVerdict sat() { return {Kind::sat, {}, false, {}}; }
    static SolverVerdict unsat() { return {Kind::unsat, {}, false, {}}; }
    static SolverVerdict engine_error(std::string why) {
        return {Kind::engine_error, {}, false, std::move(why)};
    }

    bool operator==(const SolverVerdict&) const = default;
};

std::string to_string(SolverVerdict::Kind k);

// Six-way failure classification, in pipeline order.
enum class ErrorCategory {
    invalid_decomposition,
    incorrect_decomposition,
    invalid_routing,
    incorrect_routing,
    invalid_formalization,
    semantic_error,
};

std::string to_string(ErrorCategory c);
constexpr int kErrorCategoryCount = 6;

// One formalization attempt as seen by the refinement loop.
struct FormalizationRecord {
    int attempt = 0;
    std::string program_text;
    std::string diagnostics;  // parser/engine complaints when rejected
    bool accepted = false;
};

// Per-node record inside a run trace.
struct NodeTrace {
    std::string node;
    std::string solver_kind;  // "lp_solver" etc., empty for problem nodes
    std::vector<FormalizationRecord> attempts;
    std::optional<SolverVerdict> verdict;
    std::string converted_answer;  // option label, empty on failure
    bool failed = false;
    std::string failure_note;
};

// Append-only record of one pipeline run; sufficient to re-derive the
// failure category without re-execution.
struct RunTrace {
    std::string raw_input;
    std::string decomposition_text;
    bool decomposition_parsed = false;
    std::optional<DecomposedInput> decomposition;

    std::string plan_text;       // serialized plan wire object
    bool plan_built = false;
    bool plan_valid = false;
    std::vector<std::string> plan_violations;
    // problem_id -> solver kind selected by the plan
    std::map<std::string, std::string> routed_solver;

    std::vector<NodeTrace> nodes;
    std::vector<std::string> final_answers;  // option labels, problem order

    int retry_count = 0;
    std::int64_t started_ms = 0;
    std::int64_t finished_ms = 0;

    NodeTrace* find_node(const std::string& name);
    const NodeTrace* find_node(const std::string& name) const;
};

// Maps a failed run to the category of its earliest failing stage.
// Returns nullopt when the trace's final answer equals gold_answer
// (i.e. the run is not a failure).
std::optional<ErrorCategory> classify_failure(const RunTrace& trace,
                                              std::optional<ReasoningType> gold_type,
                                              std::optional<std::string> gold_answer);

}  // namespace nsr
