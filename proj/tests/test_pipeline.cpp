#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nsr/config.hpp"
#include "nsr/harness.hpp"
#include "nsr/pipeline.hpp"

using namespace nsr;

TEST_CASE("pipeline answers generated instances end to end") {
    auto mixed = harness::mix({harness::gen_lp_chain(3, 5, 101),
                               harness::gen_csp_ordering(5, 5, 102),
                               harness::gen_fol(5, 103),
                               harness::gen_smt_eligibility(5, 104)},
                              105);
    pipeline::Pipeline pipe;
    for (const auto& inst : mixed) {
        auto trace = pipe.run(inst.nl_text);
        REQUIRE(trace.final_answers.size() == 1);
        CHECK(trace.final_answers[0] == inst.gold_answer);
        CHECK(trace.decomposition_parsed);
        CHECK(trace.plan_valid);
        CHECK(trace.finished_ms >= trace.started_ms);
        CHECK(classify_failure(trace, inst.gold_type, inst.gold_answer) == std::nullopt);
    }
}

TEST_CASE("pipeline answers batched questions in slot order") {
    auto mixed = harness::mix({harness::gen_lp_chain(3, 3, 7),
                               harness::gen_smt_eligibility(3, 8)},
                              9);
    auto batches = harness::batch_multi(mixed, 3, 10);
    REQUIRE_FALSE(batches.empty());
    pipeline::Pipeline pipe;
    for (const auto& batch : batches) {
        auto trace = pipe.run(batch.text);
        REQUIRE(trace.final_answers.size() == batch.gold_answers.size());
        for (std::size_t i = 0; i < batch.gold_answers.size(); ++i)
            CHECK(trace.final_answers[i] == batch.gold_answers[i]);
    }
}

TEST_CASE("fault injection lands in the intended taxonomy bucket") {
    auto inst = harness::gen_lp_chain(3, 1, 55)[0];

    auto classify_with = [&](pipeline::StageHooks hooks) {
        pipeline::PipelineConfig config;
        config.hooks = std::move(hooks);
        pipeline::Pipeline pipe(config);
        auto trace = pipe.run(inst.nl_text);
        return classify_failure(trace, inst.gold_type, inst.gold_answer);
    };

    SUBCASE("corrupted decomposition wire text") {
        pipeline::StageHooks hooks;
        hooks.mutate_decomposition_text = [](std::string) { return "{broken"; };
        CHECK(classify_with(std::move(hooks)) == ErrorCategory::invalid_decomposition);
    }
    SUBCASE("wrong sub-problem type") {
        pipeline::StageHooks hooks;
        hooks.mutate_decomposition = [](DecomposedInput d) {
            d.sub_problems[0].reasoning_type = ReasoningType::SMT;
            return d;
        };
        CHECK(classify_with(std::move(hooks)) == ErrorCategory::incorrect_decomposition);
    }
    SUBCASE("corrupted plan wire text") {
        pipeline::StageHooks hooks;
        hooks.mutate_plan_text = [](std::string) { return "[]"; };
        CHECK(classify_with(std::move(hooks)) == ErrorCategory::invalid_routing);
    }
    SUBCASE("plan re-targets the wrong solver") {
        pipeline::StageHooks hooks;
        hooks.mutate_plan = [](router::RoutingPlan plan) {
            for (auto& node : plan.order)
                if (node.rfind("lp_solver:", 0) == 0) node = "fol_solver:1";
            for (auto& edge : plan.edges) {
                if (edge.first.rfind("lp_solver:", 0) == 0) edge.first = "fol_solver:1";
                if (edge.second.rfind("lp_solver:", 0) == 0) edge.second = "fol_solver:1";
            }
            return plan;
        };
        CHECK(classify_with(std::move(hooks)) == ErrorCategory::incorrect_routing);
    }
    SUBCASE("garbled program text") {
        pipeline::StageHooks hooks;
        hooks.mutate_program_text = [](ReasoningType, std::string) {
            return std::string("Predicates:\nbroken(");
        };
        CHECK(classify_with(std::move(hooks)) == ErrorCategory::invalid_formalization);
    }
    SUBCASE("flipped verdict") {
        pipeline::StageHooks hooks;
        hooks.mutate_verdict = [](SolverVerdict v) {
            if (v.kind == SolverVerdict::Kind::proved) return SolverVerdict::disproved();
            return SolverVerdict::proved();
        };
        CHECK(classify_with(std::move(hooks)) == ErrorCategory::semantic_error);
    }
}

TEST_CASE("run config parses, round-trips and rejects unknown keys") {
    std::string error;
    auto defaults = config::parse_config("{}", &error);
    REQUIRE(defaults.has_value());
    CHECK(defaults->decomposer == "heuristic");
    CHECK(defaults->seeds == std::vector<unsigned long long>{1, 2, 3});

    auto full = config::parse_config(R"({
        "decomposer": "heuristic",
        "formalizer": "templates",
        "answer_policy": "false_label",
        "limits": {"max_solutions": 64, "timeout_ms": 1500},
        "external_engines": [{"preset": "z3"}],
        "llm": {"base_url": "http://example.test", "auth_env": "MY_KEY"},
        "seeds": [5, 6],
        "dataset_path": "data.jsonl",
        "output_dir": "runs",
        "write_traces": false,
        "jobs": 4
    })",
                                     &error);
    REQUIRE_MESSAGE(full.has_value(), error);
    CHECK(full->limits.max_solutions == 64);
    CHECK(full->limits.timeout.count() == 1500);
    CHECK(full->external_engines.size() == 1);
    CHECK(full->external_engines[0].executable == "z3");
    CHECK(full->llm.auth_env == "MY_KEY");
    CHECK_FALSE(full->write_traces);

    auto round_trip = config::parse_config(config::to_json(*full), &error);
    REQUIRE_MESSAGE(round_trip.has_value(), error);
    CHECK(round_trip->seeds == full->seeds);

    SUBCASE("unknown top-level key") {
        CHECK_FALSE(config::parse_config(R"({"decomposre": "heuristic"})", &error)
                        .has_value());
        CHECK(error.find("decomposre") != std::string::npos);
    }
    SUBCASE("unknown nested key") {
        CHECK_FALSE(
            config::parse_config(R"({"limits": {"max_sollutions": 3}})", &error).has_value());
    }
    SUBCASE("bad enum values") {
        CHECK_FALSE(config::parse_config(R"({"decomposer": "magic"})", &error).has_value());
        CHECK_FALSE(config::parse_config(R"({"answer_policy": "guess"})", &error).has_value());
    }
    SUBCASE("not JSON") {
        CHECK_FALSE(config::parse_config("definitely: not json", &error).has_value());
    }
    SUBCASE("missing file") {
        CHECK_FALSE(config::load_config("/nonexistent/run.json", &error).has_value());
    }
}

TEST_CASE("pipeline settings derive from the run config") {
    config::RunConfig run_config;
    run_config.answer_policy = "false_label";
    run_config.limits.max_solutions = 9;
    auto settings = config::pipeline_config(run_config);
    CHECK(settings.answers.unknown_policy == formalizer::UnknownPolicy::false_label);
    CHECK(settings.limits.max_solutions == 9);
    CHECK(settings.decomposer.kind == decomp::DecomposerBackend::Kind::heuristic);
}
