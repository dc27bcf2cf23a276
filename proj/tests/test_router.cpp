#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nsr/router.hpp"

using namespace nsr;

namespace {

SubProblem make_problem(const std::string& id, ReasoningType t) {
    SubProblem q;
    q.problem_id = id;
    q.reasoning_type = t;
    for (const auto& key : required_components(t)) q.components[key] = "text";
    q.options = {"A) True", "B) False"};
    return q;
}

router::SolverRegistry stub_registry() {
    router::SolverRegistry registry;
    for (auto t : {ReasoningType::LP, ReasoningType::FOL, ReasoningType::CSP,
                   ReasoningType::SMT}) {
        registry.portfolio[t] = [](const SubProblem& q) {
            NodeTrace nt;
            nt.converted_answer = "A)";
            (void)q;
            return nt;
        };
    }
    return registry;
}

DecomposedInput mixed_input() {
    DecomposedInput input;
    input.sub_problems.push_back(make_problem("ques_1", ReasoningType::LP));
    input.sub_problems.push_back(make_problem("ques_2", ReasoningType::CSP));
    input.sub_problems.push_back(make_problem("ques_3", ReasoningType::SMT));
    input.overall_goal = "Solve multiple independent reasoning problems";
    return input;
}

}  // namespace

TEST_CASE("build_plan produces a valid plan with one solver per problem") {
    auto built = router::build_plan(mixed_input(), stub_registry());
    REQUIRE(built.ok());
    const auto& plan = *built.plan;
    CHECK(plan.order.front() == router::kStart);
    CHECK(plan.order.back() == router::kEnd);
    CHECK(router::validate_plan(plan).empty());

    auto routed = router::routed_solvers(plan);
    CHECK(routed.at("ques_1") == "lp_solver");
    CHECK(routed.at("ques_2") == "csp_solver");
    CHECK(routed.at("ques_3") == "smt_solver");
}

TEST_CASE("build_plan without a portfolio entry needs the fallback") {
    auto registry = stub_registry();
    registry.portfolio.erase(ReasoningType::CSP);

    auto no_fallback = router::build_plan(mixed_input(), registry);
    CHECK_FALSE(no_fallback.ok());
    CHECK_FALSE(no_fallback.issues.empty());

    registry.fallback = [](const SubProblem&) {
        NodeTrace nt;
        nt.converted_answer = "A)";
        return nt;
    };
    auto with_fallback = router::build_plan(mixed_input(), registry);
    REQUIRE(with_fallback.ok());
    bool has_neural = false;
    for (const auto& node : with_fallback.plan->order)
        has_neural = has_neural || node.rfind("neural_solver:", 0) == 0;
    CHECK(has_neural);
    CHECK(router::validate_plan(*with_fallback.plan).empty());
}

TEST_CASE("plan serialization round-trips, <START> implicit on the wire") {
    auto built = router::build_plan(mixed_input(), stub_registry());
    REQUIRE(built.ok());
    std::string wire = router::serialize_plan(*built.plan);
    CHECK(wire.find("<START>") == std::string::npos);
    CHECK(wire.find("<END>") != std::string::npos);

    auto parsed = router::parse_plan(wire);
    REQUIRE(parsed.ok());
    CHECK(*parsed.plan == *built.plan);
}

TEST_CASE("validate_plan flags structural violations") {
    auto built = router::build_plan(mixed_input(), stub_registry());
    REQUIRE(built.ok());

    SUBCASE("missing terminal marker") {
        auto plan = *built.plan;
        plan.order.pop_back();
        auto violations = router::validate_plan(plan);
        CHECK_FALSE(violations.empty());
    }
    SUBCASE("duplicate node") {
        auto plan = *built.plan;
        plan.order.insert(plan.order.begin() + 1, plan.order[1]);
        CHECK_FALSE(router::validate_plan(plan).empty());
    }
    SUBCASE("edge against the order is a cycle witness") {
        auto plan = *built.plan;
        plan.edges.push_back({"lp_solver:1", "ques_1"});
        CHECK_FALSE(router::validate_plan(plan).empty());
    }
    SUBCASE("unreachable node") {
        auto plan = *built.plan;
        plan.order.insert(plan.order.end() - 1, "csp_solver:9");
        CHECK_FALSE(router::validate_plan(plan).empty());
    }
    SUBCASE("edge endpoint outside the plan") {
        auto plan = *built.plan;
        plan.edges.push_back({"ghost", router::kEnd});
        CHECK_FALSE(router::validate_plan(plan).empty());
    }
}

TEST_CASE("memory store is write-once") {
    router::MemoryStore memory;
    CHECK(memory.put("result_ques_1", "A)"));
    CHECK_FALSE(memory.put("result_ques_1", "B)"));
    CHECK(memory.get("result_ques_1") == "A)");
    CHECK_FALSE(memory.get("missing").has_value());
    CHECK(memory.snapshot().size() == 1);
}

TEST_CASE("execute answers in problem order and records memory") {
    auto input = mixed_input();
    auto registry = stub_registry();
    registry.portfolio[ReasoningType::CSP] = [](const SubProblem&) {
        NodeTrace nt;
        nt.converted_answer = "B)";
        return nt;
    };
    auto built = router::build_plan(input, registry);
    REQUIRE(built.ok());

    router::MemoryStore memory;
    RunTrace trace;
    auto answers = router::execute(*built.plan, input, memory, registry, &trace);
    CHECK(answers == std::vector<std::string>{"A)", "B)", "A)"});
    CHECK(memory.get("result_ques_1").has_value());
    CHECK(trace.nodes.size() >= 3);
}

TEST_CASE("execute isolates node failures as Unknown") {
    auto input = mixed_input();
    auto registry = stub_registry();
    registry.portfolio[ReasoningType::CSP] = [](const SubProblem&) {
        NodeTrace nt;
        nt.failed = true;
        nt.failure_note = "solver exploded";
        return nt;
    };
    auto built = router::build_plan(input, registry);
    REQUIRE(built.ok());

    router::MemoryStore memory;
    auto answers = router::execute(*built.plan, input, memory, registry, nullptr);
    CHECK(answers ==
          std::vector<std::string>{"A)", router::kUnknownAnswer, "A)"});
}

TEST_CASE("parsing malformed plan wire text yields issues") {
    CHECK_FALSE(router::parse_plan("not json").ok());
    CHECK_FALSE(router::parse_plan(R"({"agents": "nope"})").ok());
    auto missing_edges = router::parse_plan(R"({"agents": ["a"]})");
    CHECK_FALSE(missing_edges.ok());
}
