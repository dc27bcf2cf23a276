#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsr/lang/csp.hpp"
#include "nsr/lang/fol.hpp"
#include "nsr/lang/lp.hpp"
#include "nsr/lang/smt.hpp"

// Shared sentence grammar between the synthetic generators (rendering) and
// the template formalizer (inversion). Internal header: both sides must
// agree on every phrase, so they live in one place.
namespace nsr::phrases {

// --- LP ---
// Facts:  "{Name} is a {cls}."
// Rules:  "Every {a} is a {b}." | "Every {a} is {p}." | "Every {a} is not {p}."
// Query:  "{Name} is {p}." | "{Name} is not {p}." | "{Name} is a {c}." | ...
std::string lp_fact_sentence(const std::string& name, const std::string& cls);
std::string lp_rule_sentence(const std::string& a, const std::string& b, bool b_is_class,
                             bool positive);
std::string lp_query_sentence(const std::string& name, const std::string& pred,
                              bool is_class, bool positive);
std::optional<lang::LpProgram> lp_from_nl(const std::string& premise,
                                          const std::string& hypothesis,
                                          std::string* error = nullptr);

// --- FOL ---
// "All {A}s are {B}s." | "Some {A}s are {B}s." | "Some {A}s are not {B}s." |
// "No {A}s are {B}s." | "{name} is a {A}." | "{name} is not a {A}." |
// "{name} is neither a {A} nor a {B}."
// Class words are lowercase singular nouns; predicate names capitalize them.
std::string fol_all_sentence(const std::string& a, const std::string& b);
std::string fol_no_sentence(const std::string& a, const std::string& b);
std::string fol_some_sentence(const std::string& a, const std::string& b, bool positive);
std::string fol_fact_sentence(const std::string& name, const std::string& cls,
                              bool positive);
std::string fol_neither_sentence(const std::string& name, const std::string& a,
                                 const std::string& b);
std::optional<lang::FolProgram> fol_from_nl(const std::string& premise,
                                            const std::string& hypothesis,
                                            std::string* error = nullptr);

// --- CSP ---
enum class CspTheme { golf, shelf };

// Intro plus names list; golf members are person names, shelf members are
// book colors (capitalized in the model, lowercase in the text).
std::string csp_intro(CspTheme theme, const std::vector<std::string>& members);
// pos[a] < pos[b]: golf "above" / shelf "to the left of".
std::string csp_before_sentence(CspTheme theme, const std::string& a, const std::string& b);
std::string csp_after_sentence(CspTheme theme, const std::string& a, const std::string& b);
// pos[a] = k (1-based; k == n renders "last"/"rightmost").
std::string csp_position_sentence(CspTheme theme, const std::string& a, long long k,
                                  long long n);
std::optional<lang::CspModel> csp_from_nl(const std::string& context,
                                          std::string* error = nullptr);

struct CspOptionPredicate {
    lang::CspOperand lhs, rhs;
    lang::CmpOp op = lang::CmpOp::eq;
};
// Parses an option sentence (label already stripped) against the model.
std::optional<CspOptionPredicate> csp_option_from_nl(const std::string& option_text,
                                                     const lang::CspModel& model,
                                                     std::string* error = nullptr);

// --- SMT ---
// Trial:   "Inclusion Criteria: {sentences} Exclusion Criteria: {sentences}"
//   "Requires {var}." | "Requires {var} {cmp} {num}."
//   "Excludes {var}." | "Excludes {var} {cmp} {num}."
//   with {cmp} in {greater than, less than, at least, at most, equal to}.
// Patient: "The patient has {var} equal to {num}." | "The patient has {var}."
//        | "The patient does not have {var}."
std::string smt_criterion_sentence(bool inclusion, const std::string& var,
                                   const std::string& cmp_word, const lang::Rational& value);
std::string smt_criterion_sentence(bool inclusion, const std::string& var);
std::string smt_patient_sentence(const std::string& var, const lang::Rational& value);
std::string smt_patient_sentence(const std::string& var, bool value);
std::optional<lang::SmtScript> smt_from_nl(const std::string& trial,
                                           const std::string& patient,
                                           std::string* error = nullptr);

}  // namespace nsr::phrases
