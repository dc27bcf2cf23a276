#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nsr/core.hpp"
#include "nsr/lang/csp.hpp"
#include "nsr/lang/fol.hpp"
#include "nsr/lang/lp.hpp"
#include "nsr/lang/smt.hpp"
#include "nsr/llmclient.hpp"

namespace nsr::formalizer {

using FormalProgram =
    std::variant<lang::LpProgram, lang::FolProgram, lang::CspModel, lang::SmtScript>;

ReasoningType program_type(const FormalProgram& p);
std::string program_text(const FormalProgram& p);

struct FormalizerBackend {
    enum class Kind { templates, language_model };

    Kind kind = Kind::templates;
    const llm::ChatClient* client = nullptr;  // required for language_model
    int max_retries = 3;
};

struct FormalizeResult {
    std::optional<FormalProgram> program;
    std::vector<FormalizationRecord> attempts;

    bool ok() const { return program.has_value(); }
};

// Template backend inverts the rendering grammar deterministically; the
// language-model backend prompts per paradigm and re-prompts with parser
// diagnostics up to max_retries.
FormalizeResult formalize(const SubProblem& q, const FormalizerBackend& backend);

enum class UnknownPolicy {
    // Map Unknown to an abstain option when one exists, else to False.
    abstain_else_false,
    // Always map Unknown to the False option.
    false_label,
};

struct AnswerMapping {
    UnknownPolicy unknown_policy = UnknownPolicy::abstain_else_false;
};

struct ConvertResult {
    std::string label;  // "A)" etc., empty on failure
    std::string error;

    bool ok() const { return !label.empty(); }
};

// Deterministic verdict-to-option mapping. CSP conversion needs the model
// to evaluate option predicates and fails with AmbiguousOptions when zero
// or several options hold across all solutions.
ConvertResult convert_answer(const SolverVerdict& v, const SubProblem& q,
                             const AnswerMapping& mapping,
                             const FormalProgram* program = nullptr);

// Option body with its leading label stripped ("A) True" -> "True").
std::string option_body(const std::string& option);

}  // namespace nsr::formalizer
