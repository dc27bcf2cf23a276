#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nsr/lang/csp.hpp"
#include "nsr/lang/fol.hpp"
#include "nsr/lang/lp.hpp"
#include "nsr/lang/smt.hpp"

#include "support/generators.hpp"

using namespace nsr;

TEST_CASE("LP: taxonomy program parses and round-trips") {
    const std::string text = R"(Predicates:
wumpus($x, bool) ::: Is x a wumpus?
red($x, bool) ::: Is x red?

Facts:
wumpus(Stella, True) ::: Stella is a wumpus.

Rules:
wumpus($x, True) >>> red($x, False) ::: Every wumpus is not red.

Query:
red(Stella, False) ::: Stella is not red.
)";
    auto r = lang::parse_lp(text);
    REQUIRE(r.ok());
    CHECK(r.value->predicates.size() == 2);
    CHECK(r.value->facts.size() == 1);
    CHECK(r.value->rules.size() == 1);
    CHECK(r.value->query.predicate == "red");
    CHECK_FALSE(r.value->query.value);

    auto again = lang::parse_lp(lang::pretty_print(*r.value));
    REQUIRE(again.ok());
    CHECK(*again.value == *r.value);
}

TEST_CASE("LP: diagnostics carry position and expectation") {
    auto r = lang::parse_lp("Predicates:\nwumpus($x bool) ::: broken\n");
    REQUIRE_FALSE(r.ok());
    CHECK(r.diagnostics.size() >= 1);
    CHECK(r.diagnostics[0].line >= 1);
    CHECK_FALSE(r.first_message().empty());
}

TEST_CASE("LP: undeclared predicate and arity mismatch rejected") {
    auto undeclared = lang::parse_lp(
        "Predicates:\np($x, bool) ::: p?\n\nFacts:\nq(A, True) ::: q.\n\nQuery:\np(A, True) "
        "::: ?\n");
    CHECK_FALSE(undeclared.ok());

    auto arity = lang::parse_lp(
        "Predicates:\np($x, bool) ::: p?\n\nFacts:\np(A, B, True) ::: p.\n\nQuery:\np(A, "
        "True) ::: ?\n");
    CHECK_FALSE(arity.ok());
}

TEST_CASE("FOL: syllogism parses with ASCII connectives and round-trips") {
    const std::string text = R"(Predicates:
Wug(x) ::: x is a wug.
Blim(x) ::: x is a blim.

Premises:
forall x (Wug(x) -> Blim(x)) ::: All wugs are blims.
Wug(john) ::: John is a wug.

Conclusions:
Blim(john) ::: John is a blim.
)";
    auto r = lang::parse_fol(text);
    REQUIRE(r.ok());
    CHECK(r.value->premises.size() == 2);
    CHECK(r.value->premises[0].formula.kind == lang::FolFormula::Kind::forall);

    auto again = lang::parse_fol(lang::pretty_print(*r.value));
    REQUIRE(again.ok());
    CHECK(*again.value == *r.value);
}

TEST_CASE("FOL: open formulas are rejected") {
    auto r = lang::parse_fol(
        "Predicates:\nWug(x) ::: w.\n\nPremises:\nWug(x) ::: open.\n\nConclusions:\nWug(x) "
        "::: open.\n");
    CHECK_FALSE(r.ok());
}

TEST_CASE("CSP: ordering model parses and round-trips") {
    const std::string text = R"(include "globals.mzn";
% golfers in finishing order
enum GOLFER = {Rob, Ada, Mel, Dan, Joe};
array[GOLFER] of var 1..5: pos;
constraint all_different([pos[g] | g in GOLFER]);
constraint pos[Rob] < pos[Ada];
constraint pos[Ada] = 2;
constraint pos[Dan] > pos[Mel] + 1;
solve satisfy;
)";
    auto r = lang::parse_csp(text);
    REQUIRE(r.ok());
    CHECK(r.value->enums.size() == 1);
    CHECK(r.value->enums[0].members.size() == 5);
    CHECK(r.value->constraints.size() == 4);
    CHECK(r.value->constraints[0].kind == lang::CspConstraint::Kind::all_different);
    CHECK(r.value->constraints[3].rhs.offset == 1);

    auto again = lang::parse_csp(lang::pretty_print(*r.value));
    REQUIRE(again.ok());
    CHECK(*again.value == *r.value);
}

TEST_CASE("CSP: unknown construct is named in the diagnostic") {
    auto r = lang::parse_csp("enum A = {X, Y};\nmaximize pos[X];\n");
    REQUIRE_FALSE(r.ok());
    CHECK_FALSE(r.first_message().empty());
}

TEST_CASE("SMT: eligibility script parses and round-trips") {
    const std::string text = R"((declare-const age_in_years Int)
(declare-const informed_consent Bool)
; trial criteria
(assert (and (>= age_in_years 18) informed_consent))
(assert (= age_in_years 47))
(assert (= informed_consent true))
(check-sat)
)";
    auto r = lang::parse_smt(text);
    REQUIRE(r.ok());
    CHECK(r.value->declarations.size() == 2);
    CHECK(r.value->assertions.size() == 3);
    CHECK(r.value->check_sat_count == 1);

    auto again = lang::parse_smt(lang::pretty_print(*r.value));
    REQUIRE(again.ok());
    CHECK(*again.value == *r.value);
}

TEST_CASE("SMT: use before declaration and missing check-sat rejected") {
    CHECK_FALSE(lang::parse_smt("(assert (> x 1))\n(check-sat)\n").ok());
    CHECK_FALSE(lang::parse_smt("(declare-const x Int)\n(assert (> x 1))\n").ok());
}

TEST_CASE("random programs round-trip through pretty-print and parse") {
    testgen::Rand r(20240817);
    for (int i = 0; i < 200; ++i) {
        auto lp = testgen::random_lp(r);
        auto lp2 = lang::parse_lp(lang::pretty_print(lp));
        REQUIRE(lp2.ok());
        CHECK(*lp2.value == lp);

        auto fol = testgen::random_fol(r);
        auto fol2 = lang::parse_fol(lang::pretty_print(fol));
        REQUIRE(fol2.ok());
        CHECK(*fol2.value == fol);

        auto csp = testgen::random_csp(r);
        auto csp2 = lang::parse_csp(lang::pretty_print(csp));
        REQUIRE(csp2.ok());
        CHECK(*csp2.value == csp);

        auto smt = testgen::random_smt(r);
        auto smt2 = lang::parse_smt(lang::pretty_print(smt));
        REQUIRE(smt2.ok());
        CHECK(*smt2.value == smt);
    }
}

TEST_CASE("parsers survive random bytes with diagnostics") {
    testgen::Rand r(99);
    for (int i = 0; i < 500; ++i) {
        std::string junk = testgen::random_bytes(r, 160);
        auto lp = lang::parse_lp(junk);
        if (!lp.ok()) CHECK_FALSE(lp.first_message().empty());
        auto fol = lang::parse_fol(junk);
        if (!fol.ok()) CHECK_FALSE(fol.first_message().empty());
        auto csp = lang::parse_csp(junk);
        if (!csp.ok()) CHECK_FALSE(csp.first_message().empty());
        auto smt = lang::parse_smt(junk);
        if (!smt.ok()) CHECK_FALSE(smt.first_message().empty());
    }
}
