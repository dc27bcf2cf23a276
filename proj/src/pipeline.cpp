#include <chrono>

#include "nsr/pipeline.hpp"

#include "nsr/lang/csp.hpp"
#include "nsr/lang/fol.hpp"
#include "nsr/lang/lp.hpp"
#include "nsr/lang/smt.hpp"

namespace nsr::pipeline {

namespace {

std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::optional<formalizer::FormalProgram> reparse(ReasoningType t, const std::string& text,
                                                 std::string* diagnostics) {
    switch (t) {
        case ReasoningType::LP: {
            auto r = lang::parse_lp(text);
            if (r.ok()) return formalizer::FormalProgram(std::move(*r.value));
            *diagnostics = r.all_messages();
            return std::nullopt;
        }
        case ReasoningType::FOL: {
            auto r = lang::parse_fol(text);
            if (r.ok()) return formalizer::FormalProgram(std::move(*r.value));
            *diagnostics = r.all_messages();
            return std::nullopt;
        }
        case ReasoningType::CSP: {
            auto r = lang::parse_csp(text);
            if (r.ok()) return formalizer::FormalProgram(std::move(*r.value));
            *diagnostics = r.all_messages();
            return std::nullopt;
        }
        case ReasoningType::SMT: {
            auto r = lang::parse_smt(text);
            if (r.ok()) return formalizer::FormalProgram(std::move(*r.value));
            *diagnostics = r.all_messages();
            return std::nullopt;
        }
    }
    return std::nullopt;
}

SolverVerdict dispatch(const formalizer::FormalProgram& program,
                       const engines::EngineLimits& limits) {
    if (const auto* lp = std::get_if<lang::LpProgram>(&program))
        return engines::solve_lp(*lp, limits);
    if (const auto* fol = std::get_if<lang::FolProgram>(&program))
        return engines::solve_fol(*fol, limits);
    if (const auto* csp = std::get_if<lang::CspModel>(&program))
        return engines::solve_csp(*csp, limits);
    return engines::solve_smt(std::get<lang::SmtScript>(program), limits);
}

NodeTrace solve_node(const SubProblem& q, const PipelineConfig& config) {
    NodeTrace nt;
    auto formalized = formalizer::formalize(q, config.formalizer_backend);
    nt.attempts = formalized.attempts;
    if (!formalized.ok()) {
        nt.failed = true;
        nt.failure_note = nt.attempts.empty() ? "formalization produced no attempts"
                                              : nt.attempts.back().diagnostics;
        return nt;
    }
    formalizer::FormalProgram program = std::move(*formalized.program);

    if (config.hooks.mutate_program_text) {
        std::string mutated =
            config.hooks.mutate_program_text(q.reasoning_type, formalizer::program_text(program));
        FormalizationRecord record;
        record.attempt = static_cast<int>(nt.attempts.size()) + 1;
        record.program_text = mutated;
        std::string diagnostics;
        auto reparsed = reparse(q.reasoning_type, mutated, &diagnostics);
        if (!reparsed) {
            record.diagnostics = diagnostics;
            for (auto& a : nt.attempts) a.accepted = false;
            nt.attempts.push_back(std::move(record));
            nt.failed = true;
            nt.failure_note = diagnostics;
            return nt;
        }
        record.accepted = true;
        for (auto& a : nt.attempts) a.accepted = false;
        nt.attempts.push_back(std::move(record));
        program = std::move(*reparsed);
    }

    SolverVerdict verdict = dispatch(program, config.limits);
    if (config.hooks.mutate_verdict) verdict = config.hooks.mutate_verdict(verdict);
    nt.verdict = verdict;

    auto converted = formalizer::convert_answer(verdict, q, config.answers, &program);
    if (!converted.ok()) {
        nt.failed = true;
        nt.failure_note = converted.error;
        return nt;
    }
    nt.converted_answer = converted.label;
    return nt;
}

}  // namespace

router::SolverRegistry default_registry(const PipelineConfig& config) {
    router::SolverRegistry registry;
    for (ReasoningType t :
         {ReasoningType::LP, ReasoningType::FOL, ReasoningType::CSP, ReasoningType::SMT}) {
        // A typed solver treats whatever reaches it as its own paradigm, so
        // mis-routed problems fail at that solver instead of silently
        // following their label.
        registry.portfolio[t] = [config, t](const SubProblem& q) {
            SubProblem as_seen = q;
            as_seen.reasoning_type = t;
            return solve_node(as_seen, config);
        };
    }
    return registry;
}

Pipeline::Pipeline(PipelineConfig config)
    : config_(std::move(config)), registry_(default_registry(config_)) {}

RunTrace Pipeline::run(const std::string& text) const {
    RunTrace trace;
    trace.raw_input = text;
    trace.started_ms = now_ms();

    auto decomposed = decomp::decompose(text, config_.decomposer);
    if (!decomposed.ok()) {
        for (const auto& issue : decomposed.issues)
            trace.decomposition_text += (trace.decomposition_text.empty() ? "" : "\n") + issue;
        trace.finished_ms = now_ms();
        return trace;
    }

    // Every run exercises the wire format: serialize, optionally corrupt,
    // then re-validate what would cross the wire.
    std::string wire = decomp::serialize_decomposition(*decomposed.input);
    if (config_.hooks.mutate_decomposition_text)
        wire = config_.hooks.mutate_decomposition_text(wire);
    trace.decomposition_text = wire;
    auto validated = decomp::validate_schema(wire);
    if (!validated.ok()) {
        trace.finished_ms = now_ms();
        return trace;
    }
    trace.decomposition_parsed = true;
    DecomposedInput input = std::move(*validated.input);
    if (config_.hooks.mutate_decomposition) input = config_.hooks.mutate_decomposition(input);
    trace.decomposition = input;

    auto built = router::build_plan(input, registry_);
    if (!built.ok()) {
        trace.plan_violations = built.issues;
        trace.finished_ms = now_ms();
        return trace;
    }
    trace.plan_built = true;

    std::string plan_wire = router::serialize_plan(*built.plan);
    if (config_.hooks.mutate_plan_text) plan_wire = config_.hooks.mutate_plan_text(plan_wire);
    trace.plan_text = plan_wire;
    auto reparsed = router::parse_plan(plan_wire);
    if (!reparsed.ok()) {
        trace.plan_violations = reparsed.issues;
        trace.finished_ms = now_ms();
        return trace;
    }
    router::RoutingPlan plan = std::move(*reparsed.plan);
    if (config_.hooks.mutate_plan) plan = config_.hooks.mutate_plan(plan);

    trace.plan_violations = router::validate_plan(plan);
    trace.plan_valid = trace.plan_violations.empty();
    trace.routed_solver = router::routed_solvers(plan);
    if (!trace.plan_valid) {
        trace.finished_ms = now_ms();
        return trace;
    }

    router::MemoryStore memory;
    trace.final_answers = router::execute(plan, input, memory, registry_, &trace);
    for (const auto& node : trace.nodes) {
        if (node.attempts.size() > 1)
            trace.retry_count += static_cast<int>(node.attempts.size()) - 1;
    }
    trace.finished_ms = now_ms();
    return trace;
}

}  // namespace nsr::pipeline
