// Acceptance criteria runner: one [PASS]/[FAIL] line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "nsr/config.hpp"
#include "nsr/engines.hpp"
#include "nsr/harness.hpp"
#include "nsr/pipeline.hpp"

#include "support/generators.hpp"

using namespace nsr;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << " (" << detail << ")\n";
    if (!ok) ++failures;
}

std::vector<std::map<std::string, long long>> sorted(
    std::vector<std::map<std::string, long long>> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// --- 1. CSP engine vs brute-force oracle ---

lang::CspModel random_ordering_model(testgen::Rand& r, int n) {
    lang::CspModel m;
    lang::CspEnum e;
    e.name = "OBJ";
    for (int i = 0; i < n; ++i) e.members.push_back("Item" + std::to_string(i));
    m.enums.push_back(e);
    m.arrays.push_back({"pos", "OBJ", 1, n});
    lang::CspConstraint all_diff;
    all_diff.kind = lang::CspConstraint::Kind::all_different;
    all_diff.array = "pos";
    m.constraints.push_back(all_diff);

    std::size_t n_cmp = 1 + r.below(static_cast<std::size_t>(n));
    static const lang::CmpOp ops[] = {lang::CmpOp::lt, lang::CmpOp::gt, lang::CmpOp::eq,
                                      lang::CmpOp::le, lang::CmpOp::ge};
    for (std::size_t i = 0; i < n_cmp; ++i) {
        lang::CspConstraint c;
        c.lhs = lang::CspOperand::var("pos", e.members[r.below(e.members.size())],
                                      r.below(4) == 0 ? r.range(-1, 1) : 0);
        if (r.coin())
            c.rhs = lang::CspOperand::lit(r.range(1, n));
        else
            c.rhs = lang::CspOperand::var("pos", e.members[r.below(e.members.size())],
                                          r.below(4) == 0 ? r.range(-1, 1) : 0);
        c.op = ops[r.below(5)];
        m.constraints.push_back(c);
    }
    return m;
}

void criterion_csp_oracle() {
    Timer timer;
    testgen::Rand r(81001);
    int mismatches = 0, total = 0;
    for (int i = 0; i < 1000; ++i) {
        int n = i % 3 == 0 ? 3 : i % 3 == 1 ? 5 : 7;
        auto model = random_ordering_model(r, n);
        engines::EngineLimits limits;
        limits.max_solutions = 10000;
        auto verdict = engines::solve_csp(model, limits);
        auto oracle = harness::csp_brute_force_solutions(model);
        ++total;
        if (verdict.kind != SolverVerdict::Kind::solutions ||
            sorted(verdict.solutions) != sorted(oracle))
            ++mismatches;
    }
    std::ostringstream detail;
    detail << total << " models, " << mismatches << " mismatches, " << timer.seconds() << " s";
    report("CSP engine-oracle equivalence", mismatches == 0 && timer.seconds() < 60.0,
           detail.str());
}

// --- 2. SMT engine vs grid oracle, plus the documented trial/patient pair ---

std::string trial_patient_script(int symptom_hours) {
    return R"((declare-const age_in_years Int)
(declare-const acute_pancreatitis Bool)
(declare-const informed_consent Bool)
(declare-const time_of_debut_of_symptoms Real)
(declare-const chronic_pancreatitis Bool)
(declare-const pregnancy Bool)
(declare-const malignant_disease Bool)
(assert (and (> age_in_years 18) acute_pancreatitis informed_consent
             (> time_of_debut_of_symptoms 0)))
(assert (not (or chronic_pancreatitis pregnancy malignant_disease
                 (> time_of_debut_of_symptoms 72))))
(assert (= age_in_years 57))
(assert (= acute_pancreatitis true))
(assert (= informed_consent true))
(assert (= time_of_debut_of_symptoms )" +
           std::to_string(symptom_hours) + R"())
(assert (= chronic_pancreatitis false))
(assert (= pregnancy false))
(assert (= malignant_disease false))
(check-sat)
)";
}

void criterion_smt_oracle() {
    Timer timer;
    auto dataset = harness::gen_smt_eligibility(500, 82001);
    int mismatches = 0, unsupported = 0;
    for (const auto& inst : dataset) {
        auto script = lang::parse_smt(inst.program_text);
        if (!script.ok()) {
            ++mismatches;
            continue;
        }
        auto verdict = engines::solve_smt(*script.value, {});
        auto oracle = testgen::SmtGridOracle::check(*script.value);
        if (oracle == testgen::SmtGridOracle::Result::unsupported) {
            ++unsupported;
            continue;
        }
        bool engine_sat = verdict.kind == SolverVerdict::Kind::sat;
        bool oracle_sat = oracle == testgen::SmtGridOracle::Result::sat;
        if (verdict.kind != SolverVerdict::Kind::sat &&
            verdict.kind != SolverVerdict::Kind::unsat)
            ++mismatches;
        else if (engine_sat != oracle_sat)
            ++mismatches;
    }

    auto pair_sat = lang::parse_smt(trial_patient_script(20));
    auto pair_unsat = lang::parse_smt(trial_patient_script(80));
    bool documented_pair =
        pair_sat.ok() && pair_unsat.ok() &&
        engines::solve_smt(*pair_sat.value, {}).kind == SolverVerdict::Kind::sat &&
        engines::solve_smt(*pair_unsat.value, {}).kind == SolverVerdict::Kind::unsat;

    std::ostringstream detail;
    detail << dataset.size() << " scripts, " << mismatches << " mismatches, " << unsupported
           << " outside the oracle fragment, documented pair "
           << (documented_pair ? "ok" : "WRONG") << ", " << timer.seconds() << " s";
    report("SMT engine-oracle equivalence",
           mismatches == 0 && unsupported == 0 && documented_pair && timer.seconds() < 30.0,
           detail.str());
}

// --- 3. FOL soundness against ground-model enumeration ---

void criterion_fol_soundness() {
    Timer timer;
    harness::FolLabelWeights weights;
    weights.proved = 0.45;
    weights.disproved = 0.45;
    weights.unknown = 0.10;
    auto dataset = harness::gen_fol(300, 83001, weights);
    int unsound = 0, unknowns = 0, parse_failures = 0;
    for (const auto& inst : dataset) {
        auto program = lang::parse_fol(inst.program_text);
        if (!program.ok()) {
            ++parse_failures;
            continue;
        }
        auto verdict = engines::solve_fol(*program.value, {});
        auto oracle = harness::fol_ground_entailment(*program.value);
        if (verdict.kind == SolverVerdict::Kind::unknown) {
            ++unknowns;
            continue;
        }
        if (verdict.kind != oracle) ++unsound;
    }
    double unknown_rate = static_cast<double>(unknowns) / static_cast<double>(dataset.size());
    std::ostringstream detail;
    detail << dataset.size() << " programs, " << unsound << " unsound, unknown rate "
           << unknown_rate << ", " << timer.seconds() << " s";
    report("FOL soundness vs model enumeration",
           unsound == 0 && parse_failures == 0 && unknown_rate <= 0.20 &&
               timer.seconds() < 120.0,
           detail.str());
}

// --- 4. LP determinism plus the documented taxonomy program ---

void criterion_lp_determinism() {
    Timer timer;
    const char* text = R"(Predicates:
dumpus($x, bool) ::: Is x a dumpus?
red($x, bool) ::: Is x red?
tumpus($x, bool) ::: Is x a tumpus?
impus($x, bool) ::: Is x an impus?
feisty($x, bool) ::: Is x feisty?
yumpus($x, bool) ::: Is x a yumpus?

Facts:
dumpus(Stella, True) ::: Stella is a dumpus.

Rules:
dumpus($x, True) >>> red($x, False) ::: Every dumpus is not red.
tumpus($x, True) >>> red($x, True) ::: Tumpuses are red.
dumpus($x, True) >>> impus($x, True) ::: Dumpuses are impuses.
impus($x, True) >>> feisty($x, False) ::: Impuses are not feisty.
impus($x, True) >>> yumpus($x, True) ::: Impuses are yumpuses.

Query:
red(Stella, False) ::: Stella is not red.
)";
    auto parsed = lang::parse_lp(text);
    bool ok = parsed.ok();
    if (ok) {
        ok = engines::solve_lp(*parsed.value, {}).kind == SolverVerdict::Kind::proved;
        auto flipped = *parsed.value;
        flipped.query.value = true;
        ok = ok && engines::solve_lp(flipped, {}).kind == SolverVerdict::Kind::disproved;

        auto base = engines::solve_lp(*parsed.value, {});
        std::mt19937_64 eng(84001);
        for (int i = 0; ok && i < 100; ++i) {
            auto shuffled = *parsed.value;
            std::shuffle(shuffled.rules.begin(), shuffled.rules.end(), eng);
            ok = engines::solve_lp(shuffled, {}) == base;
        }
    }
    std::ostringstream detail;
    detail << "documented program + 100 rule orders, " << timer.seconds() << " s";
    report("LP determinism and documented verdicts", ok, detail.str());
}

// --- 5. End-to-end offline pipeline across three seeds ---

std::vector<harness::Instance> mixed_dataset(unsigned long long seed) {
    return harness::mix({harness::gen_lp_chain(3, 125, seed),
                         harness::gen_csp_ordering(5, 125, seed + 1),
                         harness::gen_fol(125, seed + 2),
                         harness::gen_smt_eligibility(125, seed + 3)},
                        seed + 4);
}

void criterion_end_to_end() {
    Timer timer;
    pipeline::Pipeline pipe;
    std::vector<double> accuracies, routing;
    for (unsigned long long seed : {1ULL, 2ULL, 3ULL}) {
        auto dataset = mixed_dataset(85000 + seed);
        std::vector<RunTrace> traces;
        traces.reserve(dataset.size());
        for (const auto& inst : dataset) traces.push_back(pipe.run(inst.nl_text));
        auto report_for_seed = harness::evaluate(dataset, traces);
        accuracies.push_back(report_for_seed.accuracy);
        routing.push_back(report_for_seed.routing_accuracy);
    }
    double mean = (accuracies[0] + accuracies[1] + accuracies[2]) / 3.0;
    double var = 0;
    for (double a : accuracies) var += (a - mean) * (a - mean);
    double stddev = std::sqrt(var / 3.0);
    double min_routing = std::min({routing[0], routing[1], routing[2]});
    double min_accuracy = std::min({accuracies[0], accuracies[1], accuracies[2]});

    std::ostringstream detail;
    detail << "3x500 instances, accuracy " << accuracies[0] << "/" << accuracies[1] << "/"
           << accuracies[2] << ", routing min " << min_routing << ", stddev " << stddev
           << ", " << timer.seconds() << " s";
    report("End-to-end offline pipeline",
           min_routing >= 0.95 && min_accuracy >= 0.98 && stddev <= 0.01 &&
               timer.seconds() < 300.0,
           detail.str());
}

// --- 6. Multi-question protocol: product of slots ---

void criterion_multi_question() {
    Timer timer;
    auto mixed = harness::mix({harness::gen_lp_chain(3, 75, 86001),
                               harness::gen_csp_ordering(5, 75, 86002),
                               harness::gen_fol(75, 86003),
                               harness::gen_smt_eligibility(75, 86004)},
                              86005);
    auto batches = harness::batch_multi(mixed, 3, 86006);
    pipeline::Pipeline pipe;

    // Batched protocol: a triple counts only when all three slots match.
    int batched_correct = 0;
    std::map<std::string, bool> slot_correct_in_batch;
    for (const auto& batch : batches) {
        auto trace = pipe.run(batch.text);
        bool all = trace.final_answers.size() == batch.gold_answers.size();
        for (std::size_t i = 0; i < batch.gold_answers.size(); ++i) {
            bool slot = i < trace.final_answers.size() &&
                        trace.final_answers[i] == batch.gold_answers[i];
            slot_correct_in_batch[batch.instance_ids[i]] = slot;
            all = all && slot;
        }
        if (all) ++batched_correct;
    }
    double batched_accuracy =
        static_cast<double>(batched_correct) / static_cast<double>(batches.size());

    // Independent product-of-slots: per-slot correctness multiplied per triple.
    int product_correct = 0;
    for (const auto& batch : batches) {
        int product = 1;
        for (const auto& id : batch.instance_ids)
            product *= slot_correct_in_batch[id] ? 1 : 0;
        product_correct += product;
    }
    double product_accuracy =
        static_cast<double>(product_correct) / static_cast<double>(batches.size());

    std::ostringstream detail;
    detail << batches.size() << " triples, batched " << batched_accuracy << ", product "
           << product_accuracy << ", " << timer.seconds() << " s";
    report("Multi-question product-of-slots protocol",
           batches.size() == 100 && batched_accuracy == product_accuracy, detail.str());
}

// --- 7. Error taxonomy fidelity under injection ---

void criterion_error_taxonomy() {
    Timer timer;
    auto dataset = harness::gen_lp_chain(3, 60, 87001);
    std::array<std::size_t, kErrorCategoryCount> histogram{};

    for (int mode = 0; mode < 6; ++mode) {
        pipeline::StageHooks hooks;
        switch (mode) {
            case 0:
                hooks.mutate_decomposition_text = [](std::string) {
                    return std::string("{\"result\": oops");
                };
                break;
            case 1:
                hooks.mutate_decomposition = [](DecomposedInput d) {
                    for (auto& q : d.sub_problems) q.reasoning_type = ReasoningType::SMT;
                    return d;
                };
                break;
            case 2:
                hooks.mutate_plan_text = [](std::string) { return std::string("{}"); };
                break;
            case 3:
                hooks.mutate_plan = [](router::RoutingPlan plan) {
                    for (auto& node : plan.order)
                        if (node.rfind("lp_solver:", 0) == 0) node = "csp_solver:1";
                    for (auto& edge : plan.edges) {
                        if (edge.first.rfind("lp_solver:", 0) == 0)
                            edge.first = "csp_solver:1";
                        if (edge.second.rfind("lp_solver:", 0) == 0)
                            edge.second = "csp_solver:1";
                    }
                    return plan;
                };
                break;
            case 4:
                hooks.mutate_program_text = [](ReasoningType, std::string) {
                    return std::string("Rules:\nbroken >>>");
                };
                break;
            default:
                hooks.mutate_verdict = [](SolverVerdict v) {
                    return v.kind == SolverVerdict::Kind::proved ? SolverVerdict::disproved()
                                                                 : SolverVerdict::proved();
                };
                break;
        }
        pipeline::PipelineConfig config;
        config.hooks = hooks;
        pipeline::Pipeline pipe(config);
        for (int i = 0; i < 10; ++i) {
            const auto& inst = dataset[static_cast<std::size_t>(mode * 10 + i)];
            auto trace = pipe.run(inst.nl_text);
            auto category = classify_failure(trace, inst.gold_type, inst.gold_answer);
            if (category) ++histogram[static_cast<std::size_t>(*category)];
        }
    }

    bool ok = true;
    std::ostringstream detail;
    detail << "histogram";
    for (int c = 0; c < kErrorCategoryCount; ++c) {
        detail << " " << histogram[static_cast<std::size_t>(c)];
        ok = ok && histogram[static_cast<std::size_t>(c)] == 10;
    }
    detail << " vs schedule 10x6, " << timer.seconds() << " s";
    report("Error-taxonomy injection fidelity", ok, detail.str());
}

// --- 8. Plan schema conformance on random decompositions ---

void criterion_plan_schema() {
    Timer timer;
    testgen::Rand r(88001);
    auto registry = pipeline::default_registry({});
    int bad = 0;
    for (int i = 0; i < 200; ++i) {
        DecomposedInput input;
        std::size_t n = 1 + r.below(5);
        for (std::size_t k = 0; k < n; ++k) {
            SubProblem q;
            q.problem_id = "ques_" + std::to_string(k + 1);
            q.reasoning_type = static_cast<ReasoningType>(r.below(4));
            for (const auto& key : required_components(q.reasoning_type))
                q.components[key] = "text " + std::to_string(k);
            q.options = {"A) True", "B) False"};
            input.sub_problems.push_back(q);
        }
        input.overall_goal = "goal";

        auto built = router::build_plan(input, registry);
        if (!built.ok() || !router::validate_plan(*built.plan).empty()) {
            ++bad;
            continue;
        }
        auto round_trip = router::parse_plan(router::serialize_plan(*built.plan));
        if (!round_trip.ok() || !(*round_trip.plan == *built.plan)) ++bad;
    }
    std::ostringstream detail;
    detail << "200 plans, " << bad << " violations, " << timer.seconds() << " s";
    report("Plan schema conformance", bad == 0, detail.str());
}

// --- 9. Grammar fuzzing and round-trip stability ---

void criterion_grammar_fuzzing() {
    Timer timer;
    testgen::Rand r(89001);
    int silent_failures = 0;
    for (int i = 0; i < 10000; ++i) {
        std::string junk = testgen::random_bytes(r, 200);
        auto lp = lang::parse_lp(junk);
        if (!lp.ok() && lp.first_message().empty()) ++silent_failures;
        auto fol = lang::parse_fol(junk);
        if (!fol.ok() && fol.first_message().empty()) ++silent_failures;
        auto csp = lang::parse_csp(junk);
        if (!csp.ok() && csp.first_message().empty()) ++silent_failures;
        auto smt = lang::parse_smt(junk);
        if (!smt.ok() && smt.first_message().empty()) ++silent_failures;
    }

    int round_trip_failures = 0;
    for (int i = 0; i < 1000; ++i) {
        auto lp = testgen::random_lp(r);
        auto lp2 = lang::parse_lp(lang::pretty_print(lp));
        if (!lp2.ok() || !(*lp2.value == lp)) ++round_trip_failures;
        auto fol = testgen::random_fol(r);
        auto fol2 = lang::parse_fol(lang::pretty_print(fol));
        if (!fol2.ok() || !(*fol2.value == fol)) ++round_trip_failures;
        auto csp = testgen::random_csp(r);
        auto csp2 = lang::parse_csp(lang::pretty_print(csp));
        if (!csp2.ok() || !(*csp2.value == csp)) ++round_trip_failures;
        auto smt = testgen::random_smt(r);
        auto smt2 = lang::parse_smt(lang::pretty_print(smt));
        if (!smt2.ok() || !(*smt2.value == smt)) ++round_trip_failures;
    }

    std::ostringstream detail;
    detail << "10000 fuzz inputs x4, " << silent_failures
           << " silent failures; 1000 round-trips x4, " << round_trip_failures
           << " mismatches, " << timer.seconds() << " s";
    report("Grammar fuzzing and round-trip stability",
           silent_failures == 0 && round_trip_failures == 0, detail.str());
}

}  // namespace

int main() {
    criterion_csp_oracle();
    criterion_smt_oracle();
    criterion_fol_soundness();
    criterion_lp_determinism();
    criterion_end_to_end();
    criterion_multi_question();
    criterion_error_taxonomy();
    criterion_plan_schema();
    criterion_grammar_fuzzing();
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED"
                                : std::to_string(failures) + " CRITERIA FAILED")
              << "\n";
    return failures == 0 ? 0 : 1;
}
