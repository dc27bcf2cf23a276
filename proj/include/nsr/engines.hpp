#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nsr/core.hpp"
#include "nsr/lang/csp.hpp"
#include "nsr/lang/fol.hpp"
#include "nsr/lang/lp.hpp"
#include "nsr/lang/smt.hpp"

namespace nsr::engines {

struct EngineLimits {
    std::size_t max_derived_facts = 10000;     // LP
    std::size_t max_resolution_steps = 10000;  // FOL
    std::size_t max_clause_size = 12;          // FOL
    std::size_t max_solutions = 10000;         // CSP
    std::size_t bool_enumeration_cap = 1u << 20;  // SMT
    long long numeric_probe_bound = 1000000;      // SMT
    std::chrono::milliseconds timeout{10000};
};

// --- LP: forward chaining to fixpoint (open world) ---

struct LpStats {
    std::size_t derived_facts = 0;
    // Rule firings on the query's derivation path; 0 when the query is a fact.
    int query_depth = -1;
    bool limit_hit = false;
};

SolverVerdict solve_lp(const lang::LpProgram& p, const EngineLimits& limits,
                       LpStats* stats = nullptr);

// --- FOL: refutation resolution with set of support ---

struct FolStats {
    std::size_t resolution_steps = 0;
    bool saturated = false;  // search space exhausted (vs limit hit)
    bool limit_hit = false;
};

SolverVerdict solve_fol(const lang::FolProgram& p, const EngineLimits& limits,
                        FolStats* stats = nullptr);

// --- CSP: backtracking search with forward checking ---

// Variable order and per-solution keys are "array[Member]" in declaration order.
SolverVerdict solve_csp(const lang::CspModel& m, const EngineLimits& limits);

// --- SMT: lazy theory check over the propositional skeleton ---

SolverVerdict solve_smt(const lang::SmtScript& s, const EngineLimits& limits);

// --- External engine adapter ---

enum class ExternalEngineKind { lp_engine, fol_prover, csp_engine, smt_engine };

struct OutputPattern {
    std::string regex;  // matched against combined stdout
    SolverVerdict::Kind verdict = SolverVerdict::Kind::unknown;
};

struct ExternalEngine {
    ExternalEngineKind kind = ExternalEngineKind::smt_engine;
    std::string executable;
    // Arguments; "{input}" is replaced by the program temp-file path. When no
    // argument mentions {input}, the program text is piped to stdin.
    std::vector<std::string> args;
    std::vector<OutputPattern> output_patterns;
};

bool external_engine_available(const ExternalEngine& engine);

// Writes the program, runs the engine under the wall-clock timeout and maps
// its output through the pattern table. Spawn failures, timeouts and
// unmapped output all yield EngineError.
SolverVerdict run_external(const ExternalEngine& engine, const std::string& program_text,
                           const EngineLimits& limits);

// Documented presets for the commonly used backends; the executable must
// still exist on PATH for the adapter to be usable.
ExternalEngine preset_z3();
ExternalEngine preset_minizinc();

}  // namespace nsr::engines
