#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "nsr/engines.hpp"

using namespace nsr;

namespace {

const char* kStellaProgram = R"(Predicates:
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

const char* kGolferModel = R"(include "globals.mzn";
enum GOLFER = {Rob, Ada, Dan, Joe, Mel};
array[GOLFER] of var 1..5: pos;
constraint all_different([pos[g] | g in GOLFER]);
constraint pos[Ada] < pos[Mel];
constraint pos[Mel] < pos[Dan];
constraint pos[Joe] > pos[Dan];
constraint pos[Ada] = 2;
solve satisfy;
)";

std::string trial_patient_script(int symptom_hours) {
    return R"((declare-const age_in_years Int)
(declare-const acute_pancreatitis Bool)
(declare-const informed_consent Bool)
(declare-const time_of_debut_of_symptoms Real)
(declare-const chronic_pancreatitis Bool)
(declare-const pregnancy Bool)
(declare-const malignant_disease Bool)
(assert (and
  (> age_in_years 18)
  acute_pancreatitis
  informed_consent
  (> time_of_debut_of_symptoms 0)
))
(assert (not (or
  chronic_pancreatitis
  pregnancy
  malignant_disease
  (> time_of_debut_of_symptoms 72)
)))
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

}  // namespace

TEST_CASE("LP: chained negative-consequent taxonomy proves and disproves") {
    auto parsed = lang::parse_lp(kStellaProgram);
    REQUIRE(parsed.ok());

    engines::LpStats stats;
    auto verdict = engines::solve_lp(*parsed.value, {}, &stats);
    CHECK(verdict.kind == SolverVerdict::Kind::proved);
    CHECK(stats.query_depth == 1);

    auto flipped = *parsed.value;
    flipped.query.value = true;
    CHECK(engines::solve_lp(flipped, {}).kind == SolverVerdict::Kind::disproved);
}

TEST_CASE("LP: fixpoint is independent of rule order") {
    auto parsed = lang::parse_lp(kStellaProgram);
    REQUIRE(parsed.ok());
    auto base = engines::solve_lp(*parsed.value, {});

    std::mt19937_64 eng(4242);
    for (int i = 0; i < 30; ++i) {
        auto shuffled = *parsed.value;
        std::shuffle(shuffled.rules.begin(), shuffled.rules.end(), eng);
        engines::LpStats stats;
        auto verdict = engines::solve_lp(shuffled, {}, &stats);
        CHECK(verdict == base);
    }
}

TEST_CASE("LP: open world yields Unknown for underivable queries") {
    auto parsed = lang::parse_lp(kStellaProgram);
    REQUIRE(parsed.ok());
    auto open = *parsed.value;
    open.query = {"tumpus", {"Stella"}, true};
    CHECK(engines::solve_lp(open, {}).kind == SolverVerdict::Kind::unknown);
}

TEST_CASE("LP: derivation limit reports Unknown honestly") {
    auto parsed = lang::parse_lp(kStellaProgram);
    REQUIRE(parsed.ok());
    engines::EngineLimits tight;
    tight.max_derived_facts = 1;
    engines::LpStats stats;
    auto verdict = engines::solve_lp(*parsed.value, tight, &stats);
    CHECK(verdict.kind == SolverVerdict::Kind::unknown);
    CHECK(stats.limit_hit);
}

TEST_CASE("FOL: universal chain entails and refutes") {
    const std::string text = R"(Predicates:
Wug(x) ::: x is a wug.
Blim(x) ::: x is a blim.
Snorp(x) ::: x is a snorp.

Premises:
forall x (Wug(x) -> Blim(x)) ::: All wugs are blims.
Wug(john) ::: John is a wug.

Conclusions:
Blim(john) ::: John is a blim.
)";
    auto parsed = lang::parse_fol(text);
    REQUIRE(parsed.ok());
    CHECK(engines::solve_fol(*parsed.value, {}).kind == SolverVerdict::Kind::proved);

    auto negated = *parsed.value;
    negated.conclusion.formula = lang::FolFormula::unary(
        lang::FolFormula::Kind::logical_not, negated.conclusion.formula);
    CHECK(engines::solve_fol(negated, {}).kind == SolverVerdict::Kind::disproved);

    auto unrelated = *parsed.value;
    unrelated.conclusion.formula = lang::FolFormula::make_atom("Snorp", {"john"});
    CHECK(engines::solve_fol(unrelated, {}).kind == SolverVerdict::Kind::unknown);
}

TEST_CASE("FOL: negative universal flips the conclusion") {
    const std::string text = R"(Predicates:
Wug(x) ::: x is a wug.
Blim(x) ::: x is a blim.

Premises:
forall x (Wug(x) -> ~Blim(x)) ::: No wugs are blims.
Wug(john) ::: John is a wug.

Conclusions:
~Blim(john) ::: John is not a blim.
)";
    auto parsed = lang::parse_fol(text);
    REQUIRE(parsed.ok());
    CHECK(engines::solve_fol(*parsed.value, {}).kind == SolverVerdict::Kind::proved);
}

TEST_CASE("FOL: existential premises stay Unknown for particular claims") {
    const std::string text = R"(Predicates:
Wug(x) ::: x is a wug.
Blim(x) ::: x is a blim.

Premises:
exists x (Wug(x) & Blim(x)) ::: Some wugs are blims.
Wug(john) ::: John is a wug.

Conclusions:
Blim(john) ::: John is a blim.
)";
    auto parsed = lang::parse_fol(text);
    REQUIRE(parsed.ok());
    CHECK(engines::solve_fol(*parsed.value, {}).kind == SolverVerdict::Kind::unknown);
}

TEST_CASE("CSP: golfer puzzle has the unique documented solution") {
    auto parsed = lang::parse_csp(kGolferModel);
    REQUIRE(parsed.ok());
    auto verdict = engines::solve_csp(*parsed.value, {});
    REQUIRE(verdict.kind == SolverVerdict::Kind::solutions);
    REQUIRE(verdict.solutions.size() == 1);
    const auto& s = verdict.solutions[0];
    CHECK(s.at("pos[Rob]") == 1);
    CHECK(s.at("pos[Ada]") == 2);
    CHECK(s.at("pos[Mel]") == 3);
    CHECK(s.at("pos[Dan]") == 4);
    CHECK(s.at("pos[Joe]") == 5);
}

TEST_CASE("CSP: inconsistent model has no solutions") {
    const std::string text = R"(enum OBJ = {A, B};
array[OBJ] of var 1..2: pos;
constraint pos[A] < pos[B];
constraint pos[B] < pos[A];
solve satisfy;
)";
    auto parsed = lang::parse_csp(text);
    REQUIRE(parsed.ok());
    auto verdict = engines::solve_csp(*parsed.value, {});
    REQUIRE(verdict.kind == SolverVerdict::Kind::solutions);
    CHECK(verdict.solutions.empty());
}

TEST_CASE("CSP: solution cap truncates and says so") {
    const std::string text = R"(enum OBJ = {A, B, C};
array[OBJ] of var 1..3: pos;
solve satisfy;
)";
    auto parsed = lang::parse_csp(text);
    REQUIRE(parsed.ok());
    engines::EngineLimits tight;
    tight.max_solutions = 5;
    auto verdict = engines::solve_csp(*parsed.value, tight);
    REQUIRE(verdict.kind == SolverVerdict::Kind::solutions);
    CHECK(verdict.solutions.size() == 5);
    CHECK(verdict.solutions_truncated);
}

TEST_CASE("SMT: documented trial/patient pair is Sat, the 80-hour variant Unsat") {
    auto sat_script = lang::parse_smt(trial_patient_script(20));
    REQUIRE(sat_script.ok());
    CHECK(engines::solve_smt(*sat_script.value, {}).kind == SolverVerdict::Kind::sat);

    auto unsat_script = lang::parse_smt(trial_patient_script(80));
    REQUIRE(unsat_script.ok());
    CHECK(engines::solve_smt(*unsat_script.value, {}).kind == SolverVerdict::Kind::unsat);
}

TEST_CASE("SMT: strict rational gaps respect sorts") {
    // 2 < x < 3 has a Real witness but no Int witness.
    const std::string real_text = R"((declare-const x Real)
(assert (> x 2))
(assert (< x 3))
(check-sat)
)";
    auto real_script = lang::parse_smt(real_text);
    REQUIRE(real_script.ok());
    CHECK(engines::solve_smt(*real_script.value, {}).kind == SolverVerdict::Kind::sat);

    const std::string int_text = R"((declare-const x Int)
(assert (> x 2))
(assert (< x 3))
(check-sat)
)";
    auto int_script = lang::parse_smt(int_text);
    REQUIRE(int_script.ok());
    CHECK(engines::solve_smt(*int_script.value, {}).kind == SolverVerdict::Kind::unsat);
}

TEST_CASE("SMT: out-of-fragment scripts return Unknown, not a wrong answer") {
    const std::string text = R"((declare-const x Int)
(declare-const y Int)
(assert (> x y))
(check-sat)
)";
    auto parsed = lang::parse_smt(text);
    REQUIRE(parsed.ok());
    auto verdict = engines::solve_smt(*parsed.value, {});
    CHECK(verdict.kind == SolverVerdict::Kind::unknown);
    CHECK(verdict.detail.find("unsupported fragment") != std::string::npos);
}

TEST_CASE("external adapter maps output patterns and spawn failures") {
    engines::ExternalEngine fake;
    fake.kind = engines::ExternalEngineKind::smt_engine;
    fake.executable = "cat";  // echoes the program text back
    fake.output_patterns = {{"^unsat", SolverVerdict::Kind::unsat},
                            {"^sat", SolverVerdict::Kind::sat}};
    REQUIRE(engines::external_engine_available(fake));
    CHECK(engines::run_external(fake, "unsat\n", {}).kind == SolverVerdict::Kind::unsat);
    CHECK(engines::run_external(fake, "sat\n", {}).kind == SolverVerdict::Kind::sat);
    // Unmapped output is an engine error, not a guess.
    CHECK(engines::run_external(fake, "mystery\n", {}).kind ==
          SolverVerdict::Kind::engine_error);

    engines::ExternalEngine missing;
    missing.executable = "no_such_engine_binary_xyz";
    CHECK_FALSE(engines::external_engine_available(missing));
    CHECK(engines::run_external(missing, "x", {}).kind == SolverVerdict::Kind::engine_error);

    CHECK(engines::preset_z3().executable == "z3");
    CHECK(engines::preset_minizinc().executable == "minizinc");
}
