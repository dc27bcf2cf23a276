#pragma once

#include <functional>
#include <string>

#include "nsr/core.hpp"
#include "nsr/decomposer.hpp"
#include "nsr/engines.hpp"
#include "nsr/formalizer.hpp"
#include "nsr/router.hpp"

namespace nsr::pipeline {

// Fault-injection points for controlled failure studies. Each hook rewrites
// the stage artifact in flight; unset hooks are identity.
struct StageHooks {
    // Wire-level rewrites, applied between serialization and re-parsing.
    std::function<std::string(std::string)> mutate_decomposition_text;
    std::function<std::string(std::string)> mutate_plan_text;
    // Typed rewrites, applied after parsing succeeds.
    std::function<DecomposedInput(DecomposedInput)> mutate_decomposition;
    std::function<router::RoutingPlan(router::RoutingPlan)> mutate_plan;
    // Per-node rewrites inside the solver call.
    std::function<std::string(ReasoningType, std::string)> mutate_program_text;
    std::function<SolverVerdict(SolverVerdict)> mutate_verdict;
};

struct PipelineConfig {
    decomp::DecomposerBackend decomposer;
    formalizer::FormalizerBackend formalizer_backend;
    formalizer::AnswerMapping answers;
    engines::EngineLimits limits;
    StageHooks hooks;
};

// Solver functions for all four paradigms: formalize, solve, convert, with
// the config's hooks applied. No fallback solver is installed.
router::SolverRegistry default_registry(const PipelineConfig& config);

// End-to-end run: decompose -> plan -> validate -> execute. Every stage
// artifact lands in the returned trace; failures stop the pipeline at the
// failing stage and leave the later fields empty.
class Pipeline {
  public:
    explicit Pipeline(PipelineConfig config = {});

    RunTrace run(const std::string& text) const;

  private:
    PipelineConfig config_;
    router::SolverRegistry registry_;
};

}  // namespace nsr::pipeline
