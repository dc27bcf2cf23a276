#include <algorithm>

#include "nsr/formalizer.hpp"

#include "nl_phrases.hpp"

namespace nsr::formalizer {

namespace {

std::string component(const SubProblem& q, const std::string& key) {
    auto it = q.components.find(key);
    return it == q.components.end() ? std::string() : it->second;
}

FormalizeResult template_formalize(const SubProblem& q) {
    FormalizeResult res;
    FormalizationRecord record;
    record.attempt = 1;

    std::string error;
    std::optional<FormalProgram> program;
    switch (q.reasoning_type) {
        case ReasoningType::LP: {
            auto p = phrases::lp_from_nl(component(q, "premise"), component(q, "hypothesis"),
                                         &error);
            if (p) program = std::move(*p);
            break;
        }
        case ReasoningType::FOL: {
            auto p = phrases::fol_from_nl(component(q, "premise"),
                                          component(q, "hypothesis"), &error);
            if (p) program = std::move(*p);
            break;
        }
        case ReasoningType::CSP: {
            auto p = phrases::csp_from_nl(component(q, "context"), &error);
            if (p) program = std::move(*p);
            break;
        }
        case ReasoningType::SMT: {
            auto p = phrases::smt_from_nl(component(q, "trial_description"),
                                          component(q, "sample_description"), &error);
            if (p) program = std::move(*p);
            break;
        }
    }
    if (!program) {
        record.diagnostics = error;
        res.attempts.push_back(std::move(record));
        return res;
    }
    record.program_text = program_text(*program);
    record.accepted = true;
    res.attempts.push_back(std::move(record));
    res.program = std::move(*program);
    return res;
}

const char* formalization_prompt(ReasoningType t) {
    switch (t) {
        case ReasoningType::LP:
            return "Translate the reasoning problem into a logic program with the "
                   "sections Predicates:, Facts:, Rules: and Query:. Predicates are "
                   "declared as name($x, bool) ::: gloss. Facts and the single query "
                   "are ground atoms name(Constant, True|False) ::: gloss. Rules are "
                   "atom [&& atom]* >>> atom ::: gloss with variables written $x. "
                   "Emit only the program text.";
        case ReasoningType::FOL:
            return "Translate the reasoning problem into first-order logic with the "
                   "sections Predicates:, Premises: and Conclusions:. Declare "
                   "predicates as Name(x) ::: gloss. Write closed formulas over "
                   "forall/exists/~/&/|/->/<-> with variables x, y, z, w and "
                   "lowercase constants, one per line with ::: gloss. Emit only the "
                   "program text.";
        case ReasoningType::CSP:
            return "Translate the ordering problem into a MiniZinc-style model: "
                   "include \"globals.mzn\";, an enum of the objects, an "
                   "array[ENUM] of var 1..N: pos; declaration, constraint "
                   "all_different([pos[g] | g in ENUM]);, one comparison constraint "
                   "per statement, and solve satisfy;. Emit only the model text.";
        case ReasoningType::SMT:
            return "Translate the trial and patient into an SMT script: "
                   "(declare-const name Int|Real|Bool) declarations, one (assert (and "
                   "...)) for inclusion criteria, one (assert (not (or ...))) for "
                   "exclusion criteria, (assert (= name value)) per patient fact and "
                   "a final (check-sat). Emit only the script text.";
    }
    return "";
}

struct ParsedAttempt {
    std::optional<FormalProgram> program;
    std::string diagnostics;
};

ParsedAttempt parse_for_type(ReasoningType t, const std::string& text) {
    ParsedAttempt out;
    switch (t) {
        case ReasoningType::LP: {
            auto r = lang::parse_lp(text);
            if (r.ok())
                out.program = std::move(*r.value);
            else
                out.diagnostics = r.all_messages();
            break;
        }
        case ReasoningType::FOL: {
            auto r = lang::parse_fol(text);
            if (r.ok())
                out.program = std::move(*r.value);
            else
                out.diagnostics = r.all_messages();
            break;
        }
        case ReasoningType::CSP: {
            auto r = lang::parse_csp(text);
            if (r.ok())
                out.program = std::move(*r.value);
            else
                out.diagnostics = r.all_messages();
            break;
        }
        case ReasoningType::SMT: {
            auto r = lang::parse_smt(text);
            if (r.ok())
                out.program = std::move(*r.value);
            else
                out.diagnostics = r.all_messages();
            break;
        }
    }
    return out;
}

std::string strip_fences(const std::string& text) {
    std::string out;
    size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 3, "```") == 0) {
            i += 3;
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        out.push_back(text[i++]);
    }
    return out;
}

FormalizeResult llm_formalize(const SubProblem& q, const FormalizerBackend& backend) {
    FormalizeResult res;
    if (!backend.client) {
        FormalizationRecord r;
        r.attempt = 1;
        r.diagnostics = "language-model backend requires a configured client";
        res.attempts.push_back(std::move(r));
        return res;
    }

    std::string problem_text;
    for (const auto& [k, v] : q.components) problem_text += k + ":\n" + v + "\n\n";

    llm::ChatRequest req;
    req.system_text = formalization_prompt(q.reasoning_type);
    req.user_text = problem_text;

    for (int attempt = 1; attempt <= backend.max_retries + 1; ++attempt) {
        FormalizationRecord record;
        record.attempt = attempt;

        auto chat = backend.client->chat(req);
        if (!chat.ok) {
            record.diagnostics = chat.error;
            res.attempts.push_back(std::move(record));
            return res;
        }
        record.program_text = strip_fences(chat.text);
        auto parsed = parse_for_type(q.reasoning_type, record.program_text);
        if (parsed.program) {
            record.accepted = true;
            res.attempts.push_back(std::move(record));
            res.program = std::move(parsed.program);
            return res;
        }
        record.diagnostics = parsed.diagnostics;
        // Refinement: echo the diagnostics and ask for a corrected program.
        req.user_text = problem_text + "\nYour previous program was rejected:\n" +
                        record.program_text + "\n\nDiagnostics:\n" + record.diagnostics +
                        "\nEmit only the corrected program.";
        res.attempts.push_back(std::move(record));
    }
    return res;
}

// Label of the option whose body matches `body` exactly; empty when absent.
std::string label_of_body(const SubProblem& q, const std::string& body) {
    for (const auto& o : q.options)
        if (option_body(o) == body) return option_label(o);
    return {};
}

ConvertResult csp_convert(const SolverVerdict& v, const SubProblem& q,
                          const FormalProgram* program) {
    ConvertResult out;
    if (!program || !std::holds_alternative<lang::CspModel>(*program)) {
        out.error = "CSP conversion requires the solved model";
        return out;
    }
    const auto& model = std::get<lang::CspModel>(*program);
    if (v.solutions.empty()) {
        out.error = "no solutions to evaluate options against";
        return out;
    }

    auto operand_value = [&](const lang::CspOperand& op,
                             const std::map<std::string, long long>& solution)
        -> std::optional<long long> {
        if (op.is_literal) return op.literal;
        auto it = solution.find(op.array + "[" + op.member + "]");
        if (it == solution.end()) return std::nullopt;
        return it->second + op.offset;
    };

    std::vector<std::string> qualifying;
    for (const auto& option : q.options) {
        std::string error;
        auto predicate = phrases::csp_option_from_nl(option_body(option), model, &error);
        if (!predicate) {
            out.error = "unrecognized option phrase: " + option_body(option);
            return out;
        }
        bool holds_everywhere = true;
        for (const auto& solution : v.solutions) {
            auto lhs = operand_value(predicate->lhs, solution);
            auto rhs = operand_value(predicate->rhs, solution);
            if (!lhs || !rhs || !lang::eval_cmp(predicate->op, *lhs, *rhs)) {
                holds_everywhere = false;
                break;
            }
        }
        if (holds_everywhere) qualifying.push_back(option_label(option));
    }
    if (qualifying.size() != 1) {
        out.error = "ambiguous options: " + std::to_string(qualifying.size()) +
                    " options hold in every solution";
        return out;
    }
    out.label = qualifying.front();
    return out;
}

}  // namespace

ReasoningType program_type(const FormalProgram& p) {
    if (std::holds_alternative<lang::LpProgram>(p)) return ReasoningType::LP;
    if (std::holds_alternative<lang::FolProgram>(p)) return ReasoningType::FOL;
    if (std::holds_alternative<lang::CspModel>(p)) return ReasoningType::CSP;
    return ReasoningType::SMT;
}

std::string program_text(const FormalProgram& p) {
    return std::visit([](const auto& program) { return lang::pretty_print(program); }, p);
}

FormalizeResult formalize(const SubProblem& q, const FormalizerBackend& backend) {
    if (backend.kind == FormalizerBackend::Kind::templates) return template_formalize(q);
    return llm_formalize(q, backend);
}

std::string option_body(const std::string& option) {
    std::string label = option_label(option);
    if (label.empty()) return option;
    std::string rest = option.substr(label.size());
    size_t start = rest.find_first_not_of(' ');
    return start == std::string::npos ? std::string() : rest.substr(start);
}

ConvertResult convert_answer(const SolverVerdict& v, const SubProblem& q,
                             const AnswerMapping& mapping, const FormalProgram* program) {
    ConvertResult out;
    if (v.kind == SolverVerdict::Kind::engine_error) {
        out.error = "engine error: " + v.detail;
        return out;
    }

    switch (v.kind) {
        case SolverVerdict::Kind::proved:
        case SolverVerdict::Kind::disproved:
        case SolverVerdict::Kind::unknown: {
            std::string proved = label_of_body(q, "PROVED");
            std::string disproved = label_of_body(q, "DISPROVED");
            std::string unknown = label_of_body(q, "UNKNOWN");
            if (!proved.empty() && !disproved.empty() && !unknown.empty()) {
                out.label = v.kind == SolverVerdict::Kind::proved      ? proved
                            : v.kind == SolverVerdict::Kind::disproved ? disproved
                                                                       : unknown;
                return out;
            }
            std::string yes = label_of_body(q, "True");
            std::string no = label_of_body(q, "False");
            if (yes.empty() || no.empty()) {
                out.error = "options do not cover the verdict space";
                return out;
            }
            if (v.kind == SolverVerdict::Kind::proved) {
                out.label = yes;
            } else if (v.kind == SolverVerdict::Kind::disproved) {
                out.label = no;
            } else {
                std::string abstain = label_of_body(q, "Unknown");
                if (abstain.empty()) abstain = label_of_body(q, "UNKNOWN");
                if (mapping.unknown_policy == UnknownPolicy::abstain_else_false &&
                    !abstain.empty())
                    out.label = abstain;
                else
                    out.label = no;
            }
            return out;
        }
        case SolverVerdict::Kind::sat:
        case SolverVerdict::Kind::unsat: {
            std::string yes = label_of_body(q, "True");
            std::string no = label_of_body(q, "False");
            if (yes.empty()) yes = "A)";
            if (no.empty()) no = "B)";
            out.label = v.kind == SolverVerdict::Kind::sat ? yes : no;
            return out;
        }
        case SolverVerdict::Kind::solutions:
            return csp_convert(v, q, program);
        case SolverVerdict::Kind::engine_error:
            break;
    }
    out.error = "unmapped verdict";
    return out;
}

}  // namespace nsr::formalizer
