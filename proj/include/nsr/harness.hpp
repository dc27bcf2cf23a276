#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nsr/core.hpp"
#include "nsr/lang/csp.hpp"
#include "nsr/lang/fol.hpp"

namespace nsr::harness {

// One synthetic benchmark item. The rendered text is the pipeline input;
// the program text is the generator's ground truth (engine-checked at
// generation time against the gold answer).
struct Instance {
    std::string id;
    ReasoningType gold_type = ReasoningType::LP;
    std::string gold_answer;  // option label, e.g. "A)"
    std::string nl_text;
    std::string program_text;
    std::string provenance;  // generator name + parameters + seed
};

struct Batch {
    std::string text;
    std::vector<std::string> instance_ids;
    std::vector<std::string> gold_answers;
    std::vector<ReasoningType> gold_types;
};

struct EvalReport {
    std::size_t total = 0;
    std::size_t correct = 0;
    std::size_t routing_correct = 0;
    double accuracy = 0.0;
    double routing_accuracy = 0.0;
    std::array<std::size_t, kErrorCategoryCount> error_histogram{};
    std::map<std::string, std::pair<std::size_t, std::size_t>> per_type;  // correct/total
    double wall_seconds = 0.0;

    std::string table() const;  // human-readable summary
};

enum class LpLabelSpace { binary, three_way };

// Taxonomy chains over nonsense classes; the query sits exactly `hops` rule
// firings from the single fact. Binary instances split evenly between
// True/False golds; three-way instances add underivable Unknown queries.
std::vector<Instance> gen_lp_chain(int hops, int n, unsigned long long seed,
                                   LpLabelSpace labels = LpLabelSpace::binary);

// Unique-solution ordering puzzles (adjacent < chain plus one anchor
// equality) with one true option and three false distractors.
std::vector<Instance> gen_csp_ordering(int n_objects, int n, unsigned long long seed);

struct FolLabelWeights {
    double proved = 1.0;
    double disproved = 1.0;
    double unknown = 1.0;
};

// Quantified syllogism chains labeled by ground-model enumeration.
std::vector<Instance> gen_fol(int n, unsigned long long seed, FolLabelWeights weights = {});

// Trial/patient eligibility pairs; False instances violate exactly one
// criterion.
std::vector<Instance> gen_smt_eligibility(int n, unsigned long long seed);

// Seeded Fisher-Yates shuffle of the dataset union.
std::vector<Instance> mix(const std::vector<std::vector<Instance>>& datasets,
                          unsigned long long seed);

// Shuffles, then concatenates groups of k under the multi-question header.
std::vector<Batch> batch_multi(const std::vector<Instance>& mixed, int k,
                               unsigned long long seed);

// Independent oracles (deliberately different algorithms from the engines).
std::vector<std::map<std::string, long long>> csp_brute_force_solutions(
    const lang::CspModel& model);
// Proved/Disproved/Unknown via finite model enumeration over the program's
// constants plus one fresh element per existential premise. Unary
// predicates only.
SolverVerdict::Kind fol_ground_entailment(const lang::FolProgram& program);

// Line-delimited JSON dataset files.
bool save_dataset(const std::string& path, const std::vector<Instance>& instances);
std::optional<std::vector<Instance>> load_dataset(const std::string& path);
std::string instance_to_json(const Instance& inst);
std::optional<Instance> instance_from_json(const std::string& line);

// Scores one completed single-instance run per gold instance; failed or
// wrong runs feed the error histogram through classify_failure.
EvalReport evaluate(const std::vector<Instance>& golds, const std::vector<RunTrace>& runs);

}  // namespace nsr::harness
