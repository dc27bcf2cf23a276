#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "nsr/engines.hpp"
#include "nsr/formalizer.hpp"
#include "nsr/harness.hpp"

#include "nl_phrases.hpp"

namespace nsr::harness {

namespace {

using json = nlohmann::ordered_json;

struct Rng {
    std::mt19937_64 eng;

    explicit Rng(unsigned long long seed) : eng(seed) {}

    std::size_t below(std::size_t n) { return n == 0 ? 0 : eng() % n; }
    bool coin() { return (eng() & 1) != 0; }

    template <typename T>
    const T& pick(const std::vector<T>& pool) {
        return pool[below(pool.size())];
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

    template <typename T>
    std::vector<T> sample(const std::vector<T>& pool, std::size_t count) {
        std::vector<T> copy = pool;
        shuffle(copy);
        copy.resize(std::min(count, copy.size()));
        return copy;
    }
};

unsigned long long instance_seed(unsigned long long seed, int index) {
    return seed * 0x9e3779b97f4a7c15ULL + static_cast<unsigned long long>(index) + 1;
}

const std::vector<std::string>& lp_class_stems() {
    static const std::vector<std::string> v = {
        "wumpus", "tumpus", "dumpus", "impus",  "yumpus", "zumpus", "rompus",
        "vumpus", "lorpus", "gorpus", "fimpus", "balpus", "nerpus", "quopus"};
    return v;
}

const std::vector<std::string>& lp_properties() {
    static const std::vector<std::string> v = {"red",  "blue", "feisty", "bright", "kind",
                                               "small", "loud", "shy",    "calm",   "tall"};
    return v;
}

const std::vector<std::string>& person_names() {
    static const std::vector<std::string> v = {"Stella", "Max", "Polly", "Wren", "Rex",
                                               "Sam",    "Fae", "Min",   "Opal", "Alex"};
    return v;
}

const std::vector<std::string>& golfer_names() {
    static const std::vector<std::string> v = {"Rob", "Ada", "Dan", "Joe", "Mel", "Eve", "Amy",
                                               "Ben", "Lee", "Kim", "Tia", "Sol", "Ivy", "Gus"};
    return v;
}

const std::vector<std::string>& book_colors() {
    static const std::vector<std::string> v = {"Red",    "Blue",   "Green", "White", "Black",
                                               "Purple", "Orange", "Yellow", "Gray", "Brown"};
    return v;
}

const std::vector<std::string>& fol_nouns() {
    static const std::vector<std::string> v = {"blim", "clar",  "drof", "felp", "grint",
                                               "harn", "krell", "lum",  "morv", "nerp",
                                               "quol", "rasp",  "tarn", "velt", "wug"};
    return v;
}

const std::vector<std::string>& fol_constants() {
    static const std::vector<std::string> v = {"john", "mary", "alex", "sam",
                                               "kai",  "lee",  "noa",  "finn"};
    return v;
}

const std::vector<std::string>& smt_numeric_vars() {
    static const std::vector<std::string> v = {
        "age_in_years",      "bmi",              "creatinine_level", "hours_since_onset",
        "white_cell_count",  "systolic_pressure", "tumor_size_mm",   "hemoglobin_level"};
    return v;
}

const std::vector<std::string>& smt_bool_vars() {
    static const std::vector<std::string> v = {
        "informed_consent",  "acute_pancreatitis", "pregnancy",          "chronic_pancreatitis",
        "malignant_disease", "prior_surgery",      "diabetes_diagnosis", "on_anticoagulants"};
    return v;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string logic_nl(const std::string& premise, const std::string& hypothesis,
                     const std::vector<std::string>& options) {
    return "STATEMENT:\n" + premise + "\n\nQUESTION:\n" + hypothesis + "\n\n" +
           join(options, "\n");
}

std::string csp_nl(const std::string& context, const std::vector<std::string>& options) {
    return "STATEMENT:\n" + context + "\n\nWhich of the following is true?\n" +
           join(options, "\n");
}

std::string smt_nl(const std::string& trial, const std::string& patient) {
    return "You get a trial and a patient and have to say if there is a match:\n\nTRIAL: " +
           trial + "\n\nPATIENT: " + patient +
           "\n\nDoes the patient match the trial?\nA) True\nB) False";
}

[[noreturn]] void generation_bug(const std::string& what) {
    throw std::runtime_error("generator self-check failed: " + what);
}

}  // namespace

// --- LP ---

std::vector<Instance> gen_lp_chain(int hops, int n, unsigned long long seed,
                                   LpLabelSpace labels) {
    if (hops < 1) throw std::invalid_argument("hops must be >= 1");
    std::vector<Instance> out;
    out.reserve(static_cast<std::size_t>(n));

    for (int i = 0; i < n; ++i) {
        Rng rng(instance_seed(seed, i));
        auto classes = rng.sample(lp_class_stems(), static_cast<std::size_t>(hops) + 1);
        std::string distractor_class = classes.back();
        classes.pop_back();
        auto props = rng.sample(lp_properties(), 3);
        const std::string& target_prop = props[0];
        const std::string& distractor_prop = props[1];
        const std::string& unknown_prop = props[2];
        const std::string& name = rng.pick(person_names());

        bool rule_pos = rng.coin();
        enum class Gold { proved, disproved, unknown };
        Gold gold;
        if (labels == LpLabelSpace::binary)
            gold = (i % 2 == 0) ? Gold::proved : Gold::disproved;
        else
            gold = i % 3 == 0 ? Gold::proved : i % 3 == 1 ? Gold::disproved : Gold::unknown;

        std::vector<std::string> sentences;
        sentences.push_back(phrases::lp_fact_sentence(name, classes[0]));
        for (int j = 0; j + 1 < hops; ++j)
            sentences.push_back(phrases::lp_rule_sentence(classes[j], classes[j + 1], true, true));
        sentences.push_back(
            phrases::lp_rule_sentence(classes[hops - 1], target_prop, false, rule_pos));
        sentences.push_back(
            phrases::lp_rule_sentence(distractor_class, distractor_prop, false, rng.coin()));
        rng.shuffle(sentences);
        std::string premise = join(sentences, " ");

        bool query_pos;
        std::string query_pred;
        if (gold == Gold::unknown) {
            query_pred = unknown_prop;
            query_pos = rng.coin();
        } else {
            query_pred = target_prop;
            query_pos = gold == Gold::proved ? rule_pos : !rule_pos;
        }
        std::string hypothesis = phrases::lp_query_sentence(name, query_pred, false, query_pos);

        std::vector<std::string> options =
            labels == LpLabelSpace::binary
                ? std::vector<std::string>{"A) True", "B) False"}
                : std::vector<std::string>{"A) PROVED", "B) DISPROVED", "C) UNKNOWN"};
        std::string gold_label;
        if (labels == LpLabelSpace::binary)
            gold_label = gold == Gold::proved ? "A)" : "B)";
        else
            gold_label = gold == Gold::proved ? "A)" : gold == Gold::disproved ? "B)" : "C)";

        auto program = phrases::lp_from_nl(premise, hypothesis);
        if (!program) generation_bug("LP rendering did not invert");

        engines::LpStats stats;
        auto verdict = engines::solve_lp(*program, engines::EngineLimits{}, &stats);
        SolverVerdict::Kind expected = gold == Gold::proved      ? SolverVerdict::Kind::proved
                                       : gold == Gold::disproved ? SolverVerdict::Kind::disproved
                                                                 : SolverVerdict::Kind::unknown;
        if (verdict.kind != expected) generation_bug("LP verdict mismatch");
        if (gold != Gold::unknown && stats.query_depth != hops)
            generation_bug("LP query depth != hops");

        Instance inst;
        inst.id = "lp" + std::to_string(hops) + "-" + std::to_string(seed) + "-" +
                  std::to_string(i);
        inst.gold_type = ReasoningType::LP;
        inst.gold_answer = gold_label;
        inst.nl_text = logic_nl(premise, hypothesis, options);
        inst.program_text = lang::pretty_print(*program);
        inst.provenance = "gen_lp_chain hops=" + std::to_string(hops) +
                          " seed=" + std::to_string(seed) + " index=" + std::to_string(i);
        out.push_back(std::move(inst));
    }
    return out;
}

// --- CSP ---

std::vector<std::map<std::string, long long>> csp_brute_force_solutions(
    const lang::CspModel& model) {
    std::vector<std::pair<std::string, std::pair<long long, long long>>> vars;
    for (const auto& arr : model.arrays) {
        const lang::CspEnum* e = model.find_enum(arr.index_enum);
        if (!e) return {};
        for (const auto& m : e->members)
            vars.push_back({arr.name + "[" + m + "]", {arr.lo, arr.hi}});
    }

    auto satisfies = [&](const std::map<std::string, long long>& assignment) {
        for (const auto& c : model.constraints) {
            if (c.kind == lang::CspConstraint::Kind::all_different) {
                const lang::CspArray* arr = model.find_array(c.array);
                const lang::CspEnum* e = arr ? model.find_enum(arr->index_enum) : nullptr;
                if (!e) return false;
                std::vector<long long> values;
                for (const auto& m : e->members)
                    values.push_back(assignment.at(c.array + "[" + m + "]"));
                std::sort(values.begin(), values.end());
                if (std::adjacent_find(values.begin(), values.end()) != values.end())
                    return false;
                continue;
            }
            auto value = [&](const lang::CspOperand& op) {
                if (op.is_literal) return op.literal;
                return assignment.at(op.array + "[" + op.member + "]") + op.offset;
            };
            if (!lang::eval_cmp(c.op, value(c.lhs), value(c.rhs))) return false;
        }
        return true;
    };

    std::vector<std::map<std::string, long long>> solutions;

    // Permutation filtering for the common shape: a single 1..n array under
    // all_different. Everything else falls back to full Cartesian search.
    bool has_all_diff = std::any_of(
        model.constraints.begin(), model.constraints.end(), [](const lang::CspConstraint& c) {
            return c.kind == lang::CspConstraint::Kind::all_different;
        });
    if (model.arrays.size() == 1 && has_all_diff && model.arrays[0].lo == 1 &&
        model.arrays[0].hi == static_cast<long long>(vars.size())) {
        std::vector<long long> values(vars.size());
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<long long>(i + 1);
        std::sort(values.begin(), values.end());
        do {
            std::map<std::string, long long> assignment;
            for (std::size_t i = 0; i < vars.size(); ++i) assignment[vars[i].first] = values[i];
            if (satisfies(assignment)) solutions.push_back(std::move(assignment));
        } while (std::next_permutation(values.begin(), values.end()));
        return solutions;
    }

    std::map<std::string, long long> assignment;
    std::function<void(std::size_t)> recurse = [&](std::size_t i) {
        if (i == vars.size()) {
            if (satisfies(assignment)) solutions.push_back(assignment);
            return;
        }
        for (long long v = vars[i].second.first; v <= vars[i].second.second; ++v) {
            assignment[vars[i].first] = v;
            recurse(i + 1);
        }
        assignment.erase(vars[i].first);
    };
    recurse(0);
    return solutions;
}

std::vector<Instance> gen_csp_ordering(int n_objects, int n, unsigned long long seed) {
    if (n_objects < 2) throw std::invalid_argument("n_objects must be >= 2");
    std::vector<Instance> out;
    out.reserve(static_cast<std::size_t>(n));

    for (int i = 0; i < n; ++i) {
        Rng rng(instance_seed(seed, i) ^ 0xc5f1u);
        phrases::CspTheme theme = i % 2 == 0 ? phrases::CspTheme::golf : phrases::CspTheme::shelf;
        auto members = rng.sample(
            theme == phrases::CspTheme::golf ? golfer_names() : book_colors(),
            static_cast<std::size_t>(n_objects));

        // ordered[j] holds the member at position j+1.
        std::vector<std::string> ordered = members;
        rng.shuffle(ordered);
        auto position_of = [&](const std::string& m) {
            for (std::size_t j = 0; j < ordered.size(); ++j)
                if (ordered[j] == m) return static_cast<long long>(j + 1);
            return 0LL;
        };

        std::vector<std::string> sentences;
        for (int j = 0; j + 1 < n_objects; ++j) {
            if (rng.coin())
                sentences.push_back(phrases::csp_before_sentence(theme, ordered[j], ordered[j + 1]));
            else
                sentences.push_back(phrases::csp_after_sentence(theme, ordered[j + 1], ordered[j]));
        }
        std::size_t anchor = rng.below(static_cast<std::size_t>(n_objects));
        sentences.push_back(phrases::csp_position_sentence(
            theme, ordered[anchor], static_cast<long long>(anchor + 1), n_objects));
        rng.shuffle(sentences);

        std::string context = phrases::csp_intro(theme, members) + " " + join(sentences, " ");
        auto model = phrases::csp_from_nl(context);
        if (!model) generation_bug("CSP rendering did not invert");

        auto oracle = csp_brute_force_solutions(*model);
        if (oracle.size() != 1) generation_bug("CSP model is not uniquely solvable");
        for (const auto& m : members) {
            if (oracle[0].at("pos[" + m + "]") != position_of(m))
                generation_bug("CSP oracle solution deviates from the sampled order");
        }

        // One true claim plus three false distractors, none echoing a premise.
        auto make_claim = [&](bool want_true) -> std::string {
            for (int attempt = 0; attempt < 200; ++attempt) {
                std::string sentence;
                bool truth;
                if (rng.coin()) {
                    const std::string& m = rng.pick(members);
                    long long k =
                        static_cast<long long>(rng.below(static_cast<std::size_t>(n_objects))) + 1;
                    sentence = phrases::csp_position_sentence(theme, m, k, n_objects);
                    truth = position_of(m) == k;
                } else {
                    const std::string& a = rng.pick(members);
                    const std::string& b = rng.pick(members);
                    if (a == b) continue;
                    sentence = rng.coin() ? phrases::csp_before_sentence(theme, a, b)
                                          : phrases::csp_after_sentence(theme, b, a);
                    truth = position_of(a) < position_of(b);
                }
                if (truth != want_true) continue;
                if (std::find(sentences.begin(), sentences.end(), sentence) != sentences.end())
                    continue;
                return sentence;
            }
            generation_bug("could not sample a CSP option claim");
        };

        std::vector<std::string> claims;
        claims.push_back(make_claim(true));
        while (claims.size() < 4) {
            std::string c = make_claim(false);
            if (std::find(claims.begin(), claims.end(), c) == claims.end())
                claims.push_back(std::move(c));
        }
        std::string true_claim = claims[0];
        rng.shuffle(claims);
        std::vector<std::string> options;
        std::string gold_label;
        for (std::size_t j = 0; j < claims.size(); ++j) {
            std::string label(1, static_cast<char>('A' + j));
            options.push_back(label + ") " + claims[j]);
            if (claims[j] == true_claim) gold_label = label + ")";
        }

        // End-to-end self-check through the answer conversion path.
        SubProblem sp;
        sp.problem_id = "ques_1";
        sp.reasoning_type = ReasoningType::CSP;
        sp.components["context"] = context;
        sp.components["question"] = "Which of the following is true?";
        sp.options = options;
        SolverVerdict verdict;
        verdict.kind = SolverVerdict::Kind::solutions;
        verdict.solutions = oracle;
        formalizer::FormalProgram fp = *model;
        auto converted = formalizer::convert_answer(verdict, sp, {}, &fp);
        if (!converted.ok() || converted.label != gold_label)
            generation_bug("CSP option conversion disagrees with the sampled order");

        Instance inst;
        inst.id = "csp" + std::to_string(n_objects) + "-" + std::to_string(seed) + "-" +
                  std::to_string(i);
        inst.gold_type = ReasoningType::CSP;
        inst.gold_answer = gold_label;
        inst.nl_text = csp_nl(context, options);
        inst.program_text = lang::pretty_print(*model);
        inst.provenance = "gen_csp_ordering objects=" + std::to_string(n_objects) +
                          " seed=" + std::to_string(seed) + " index=" + std::to_string(i);
        out.push_back(std::move(inst));
    }
    return out;
}

// --- FOL ---

namespace {

bool formula_has_exists(const lang::FolFormula& f) {
    if (f.kind == lang::FolFormula::Kind::exists) return true;
    for (const auto& c : f.children)
        if (formula_has_exists(c)) return true;
    return false;
}

void collect_constants(const lang::FolFormula& f, std::vector<std::string>& out) {
    if (f.kind == lang::FolFormula::Kind::atom) {
        for (const auto& a : f.args) {
            if (!lang::is_fol_variable(a) &&
                std::find(out.begin(), out.end(), a) == out.end())
                out.push_back(a);
        }
    }
    for (const auto& c : f.children) collect_constants(c, out);
}

struct GroundEval {
    const std::vector<std::string>& preds;
    std::size_t domain_size;
    unsigned long long bits;  // truth of atom (pred_index * domain_size + element)

    bool atom(std::size_t pred, std::size_t element) const {
        return (bits >> (pred * domain_size + element)) & 1ULL;
    }

    bool eval(const lang::FolFormula& f, std::map<std::string, std::size_t>& env,
              const std::map<std::string, std::size_t>& constants) const {
        using K = lang::FolFormula::Kind;
        switch (f.kind) {
            case K::atom: {
                std::size_t pred = 0;
                for (; pred < preds.size(); ++pred)
                    if (preds[pred] == f.name) break;
                const std::string& arg = f.args[0];
                std::size_t element;
                if (lang::is_fol_variable(arg))
                    element = env.at(arg);
                else
                    element = constants.at(arg);
                return atom(pred, element);
            }
            case K::logical_not: return !eval(f.children[0], env, constants);
            case K::logical_and:
                return eval(f.children[0], env, constants) &&
                       eval(f.children[1], env, constants);
            case K::logical_or:
                return eval(f.children[0], env, constants) ||
                       eval(f.children[1], env, constants);
            case K::implies:
                return !eval(f.children[0], env, constants) ||
                       eval(f.children[1], env, constants);
            case K::iff:
                return eval(f.children[0], env, constants) ==
                       eval(f.children[1], env, constants);
            case K::forall: {
                for (std::size_t e = 0; e < domain_size; ++e) {
                    env[f.name] = e;
                    bool ok = eval(f.children[0], env, constants);
                    env.erase(f.name);
                    if (!ok) return false;
                }
                return true;
            }
            case K::exists: {
                for (std::size_t e = 0; e < domain_size; ++e) {
                    env[f.name] = e;
                    bool ok = eval(f.children[0], env, constants);
                    env.erase(f.name);
                    if (ok) return true;
                }
                return false;
            }
        }
        return false;
    }
};

}  // namespace

SolverVerdict::Kind fol_ground_entailment(const lang::FolProgram& program) {
    for (const auto& p : program.predicates)
        if (p.arity != 1) return SolverVerdict::Kind::unknown;

    std::vector<std::string> constants;
    for (const auto& s : program.premises) collect_constants(s.formula, constants);
    collect_constants(program.conclusion.formula, constants);

    std::size_t pads = 0;
    for (const auto& s : program.premises)
        if (formula_has_exists(s.formula)) ++pads;
    if (formula_has_exists(program.conclusion.formula)) ++pads;
    while (constants.size() + pads > 6 && pads > 0) --pads;
    std::size_t domain_size = constants.size() + pads;
    if (domain_size == 0) domain_size = 1;

    std::vector<std::string> preds;
    for (const auto& p : program.predicates) preds.push_back(p.name);
    std::size_t atom_count = preds.size() * domain_size;
    if (atom_count > 24) return SolverVerdict::Kind::unknown;

    std::map<std::string, std::size_t> constant_index;
    for (std::size_t i = 0; i < constants.size(); ++i) constant_index[constants[i]] = i;

    bool any_model = false, always = true, never = true;
    for (unsigned long long bits = 0; bits < (1ULL << atom_count); ++bits) {
        GroundEval ev{preds, domain_size, bits};
        std::map<std::string, std::size_t> env;
        bool premises_hold = true;
        for (const auto& s : program.premises) {
            if (!ev.eval(s.formula, env, constant_index)) {
                premises_hold = false;
                break;
            }
        }
        if (!premises_hold) continue;
        any_model = true;
        bool conclusion = ev.eval(program.conclusion.formula, env, constant_index);
        always = always && conclusion;
        never = never && !conclusion;
        if (!always && !never) return SolverVerdict::Kind::unknown;
    }
    if (!any_model) return SolverVerdict::Kind::proved;  // vacuous entailment
    if (always) return SolverVerdict::Kind::proved;
    if (never) return SolverVerdict::Kind::disproved;
    return SolverVerdict::Kind::unknown;
}

std::vector<Instance> gen_fol(int n, unsigned long long seed, FolLabelWeights weights) {
    double total = weights.proved + weights.disproved + weights.unknown;
    if (total <= 0) throw std::invalid_argument("label weights must be positive");

    std::vector<Instance> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Rng rng(instance_seed(seed, i) ^ 0xf01u);

        // Deterministic label quota by index.
        double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        SolverVerdict::Kind target;
        if (u < weights.proved / total)
            target = SolverVerdict::Kind::proved;
        else if (u < (weights.proved + weights.disproved) / total)
            target = SolverVerdict::Kind::disproved;
        else
            target = SolverVerdict::Kind::unknown;

        std::optional<lang::FolProgram> accepted;
        std::string premise_text, conclusion_text;
        for (int attempt = 0; attempt < 100 && !accepted; ++attempt) {
            bool is_unknown = target == SolverVerdict::Kind::unknown;
            std::size_t m = is_unknown ? 3 : 3 + rng.below(2);
            auto nouns = rng.sample(fol_nouns(), m + 3);
            std::vector<std::string> chain(nouns.begin(), nouns.begin() + m);
            std::string extra = nouns[m];
            std::string d1 = nouns[m + 1], d2 = nouns[m + 2];
            const std::string& name = rng.pick(fol_constants());
            bool negate_last = rng.coin();

            std::vector<std::string> sentences;
            sentences.push_back(phrases::fol_fact_sentence(name, chain[0], true));
            for (std::size_t j = 0; j + 2 < m; ++j)
                sentences.push_back(phrases::fol_all_sentence(chain[j], chain[j + 1]));
            sentences.push_back(negate_last
                                    ? phrases::fol_no_sentence(chain[m - 2], chain[m - 1])
                                    : phrases::fol_all_sentence(chain[m - 2], chain[m - 1]));
            if (is_unknown) {
                // The conclusion class is only tied in by an existential.
                sentences.push_back(phrases::fol_some_sentence(chain[0], extra, rng.coin()));
            } else if (rng.coin()) {
                // Consistent fluff: either an existential or a neither-fact,
                // never both, to keep the ground model space small.
                if (rng.coin())
                    sentences.push_back(phrases::fol_some_sentence(chain[0], chain[1], true));
                else
                    sentences.push_back(phrases::fol_neither_sentence(name, d1, d2));
            }
            rng.shuffle(sentences);

            std::string conclusion;
            if (is_unknown) {
                conclusion = phrases::fol_fact_sentence(name, extra, rng.coin());
            } else {
                bool end_positive = !negate_last;
                bool claim_positive = target == SolverVerdict::Kind::proved
                                          ? end_positive
                                          : !end_positive;
                conclusion = phrases::fol_fact_sentence(name, chain[m - 1], claim_positive);
            }

            std::string joined = join(sentences, " ");
            auto program = phrases::fol_from_nl(joined, conclusion);
            if (!program) generation_bug("FOL rendering did not invert");
            if (fol_ground_entailment(*program) != target) continue;
            accepted = std::move(*program);
            premise_text = joined;
            conclusion_text = conclusion;
        }
        if (!accepted) generation_bug("FOL sampling did not reach the target label");

        std::vector<std::string> options = {"A) PROVED", "B) DISPROVED", "C) UNKNOWN"};
        std::string gold_label = target == SolverVerdict::Kind::proved      ? "A)"
                                 : target == SolverVerdict::Kind::disproved ? "B)"
                                                                            : "C)";

        Instance inst;
        inst.id = "fol-" + std::to_string(seed) + "-" + std::to_string(i);
        inst.gold_type = ReasoningType::FOL;
        inst.gold_answer = gold_label;
        inst.nl_text = logic_nl(premise_text, conclusion_text, options);
        inst.program_text = lang::pretty_print(*accepted);
        inst.provenance = "gen_fol seed=" + std::to_string(seed) + " index=" + std::to_string(i);
        out.push_back(std::move(inst));
    }
    return out;
}

// --- SMT ---

namespace {

struct Criterion {
    std::string var;
    bool inclusion = true;
    bool is_bool = false;
    std::string cmp_word;  // numeric criteria only
    lang::Rational threshold;
};

lang::Rational satisfying_value(const Criterion& c, Rng& rng) {
    using R = lang::Rational;
    long long d = 1 + static_cast<long long>(rng.below(5));
    R delta(d);
    bool trigger_is_bad = !c.inclusion;  // exclusions must stay un-triggered
    const std::string& w = c.cmp_word;
    if (!trigger_is_bad) {
        if (w == "greater than") return c.threshold + delta;
        if (w == "less than") return c.threshold - delta;
        if (w == "at least") return c.threshold + R(d - 1);
        if (w == "at most") return c.threshold - R(d - 1);
        return c.threshold;  // equal to
    }
    if (w == "greater than") return c.threshold - R(d - 1);
    if (w == "less than") return c.threshold + R(d - 1);
    if (w == "at least") return c.threshold - delta;
    if (w == "at most") return c.threshold + delta;
    return c.threshold + delta;  // equal to: any different value
}

lang::Rational violating_value(const Criterion& c, Rng& rng) {
    Criterion flipped = c;
    flipped.inclusion = !flipped.inclusion;
    return satisfying_value(flipped, rng);
}

}  // namespace

std::vector<Instance> gen_smt_eligibility(int n, unsigned long long seed) {
    static const std::vector<std::string> cmp_words = {"greater than", "less than", "at least",
                                                       "at most"};
    std::vector<Instance> out;
    out.reserve(static_cast<std::size_t>(n));

    for (int i = 0; i < n; ++i) {
        Rng rng(instance_seed(seed, i) ^ 0x5417u);
        bool gold_true = i % 2 == 0;

        std::size_t n_incl_num = 1 + rng.below(2);
        std::size_t n_excl_num = rng.below(2);
        std::size_t n_incl_bool = 1 + rng.below(2);
        std::size_t n_excl_bool = 1 + rng.below(2);
        auto numeric = rng.sample(smt_numeric_vars(), n_incl_num + n_excl_num);
        auto booleans = rng.sample(smt_bool_vars(), n_incl_bool + n_excl_bool);

        std::vector<Criterion> criteria;
        std::size_t vi = 0;
        for (std::size_t j = 0; j < n_incl_num; ++j, ++vi) {
            Criterion c;
            c.var = numeric[vi];
            c.cmp_word = cmp_words[rng.below(cmp_words.size())];
            long long base = 5 + static_cast<long long>(rng.below(120));
            c.threshold = rng.below(3) == 0 ? lang::Rational(2 * base + 1, 2)
                                            : lang::Rational(base);
            criteria.push_back(std::move(c));
        }
        for (std::size_t j = 0; j < n_excl_num; ++j, ++vi) {
            Criterion c;
            c.var = numeric[vi];
            c.inclusion = false;
            c.cmp_word = cmp_words[rng.below(cmp_words.size())];
            c.threshold = lang::Rational(5 + static_cast<long long>(rng.below(120)));
            criteria.push_back(std::move(c));
        }
        std::size_t bi = 0;
        for (std::size_t j = 0; j < n_incl_bool; ++j, ++bi) {
            Criterion c;
            c.var = booleans[bi];
            c.is_bool = true;
            criteria.push_back(std::move(c));
        }
        for (std::size_t j = 0; j < n_excl_bool; ++j, ++bi) {
            Criterion c;
            c.var = booleans[bi];
            c.is_bool = true;
            c.inclusion = false;
            criteria.push_back(std::move(c));
        }

        std::size_t violate_index = gold_true ? criteria.size() : rng.below(criteria.size());

        std::vector<std::string> incl_sentences, excl_sentences, patient_sentences;
        for (std::size_t j = 0; j < criteria.size(); ++j) {
            const Criterion& c = criteria[j];
            auto& bucket = c.inclusion ? incl_sentences : excl_sentences;
            if (c.is_bool)
                bucket.push_back(phrases::smt_criterion_sentence(c.inclusion, c.var));
            else
                bucket.push_back(
                    phrases::smt_criterion_sentence(c.inclusion, c.var, c.cmp_word, c.threshold));

            bool violate = j == violate_index;
            if (c.is_bool) {
                bool good = c.inclusion;  // inclusion wants true, exclusion wants false
                patient_sentences.push_back(
                    phrases::smt_patient_sentence(c.var, violate ? !good : good));
            } else {
                lang::Rational v = violate ? violating_value(c, rng) : satisfying_value(c, rng);
                patient_sentences.push_back(phrases::smt_patient_sentence(c.var, v));
            }
        }

        std::string trial = "Inclusion Criteria: " + join(incl_sentences, " ");
        if (!excl_sentences.empty()) trial += " Exclusion Criteria: " + join(excl_sentences, " ");
        std::string patient = join(patient_sentences, " ");

        std::string phrase_error;
        auto script = phrases::smt_from_nl(trial, patient, &phrase_error);
        if (!script) generation_bug("SMT rendering did not invert: " + phrase_error);
        auto verdict = engines::solve_smt(*script, engines::EngineLimits{});
        SolverVerdict::Kind expected =
            gold_true ? SolverVerdict::Kind::sat : SolverVerdict::Kind::unsat;
        if (verdict.kind != expected) generation_bug("SMT verdict mismatch");

        Instance inst;
        inst.id = "smt-" + std::to_string(seed) + "-" + std::to_string(i);
        inst.gold_type = ReasoningType::SMT;
        inst.gold_answer = gold_true ? "A)" : "B)";
        inst.nl_text = smt_nl(trial, patient);
        inst.program_text = lang::pretty_print(*script);
        inst.provenance =
            "gen_smt_eligibility seed=" + std::to_string(seed) + " index=" + std::to_string(i);
        out.push_back(std::move(inst));
    }
    return out;
}

// --- Mixing, batching, IO, metrics ---

std::vector<Instance> mix(const std::vector<std::vector<Instance>>& datasets,
                          unsigned long long seed) {
    std::vector<Instance> all;
    for (const auto& d : datasets) all.insert(all.end(), d.begin(), d.end());
    Rng rng(seed ^ 0x3A1DULL);
    rng.shuffle(all);
    return all;
}

std::vector<Batch> batch_multi(const std::vector<Instance>& mixed, int k,
                               unsigned long long seed) {
    std::vector<Instance> shuffled = mixed;
    Rng rng(seed ^ 0xBA7C4ULL);
    rng.shuffle(shuffled);

    std::vector<Batch> out;
    for (std::size_t start = 0; start + static_cast<std::size_t>(k) <= shuffled.size();
         start += static_cast<std::size_t>(k)) {
        Batch b;
        b.text = "Answer the following questions one by one.";
        for (int j = 0; j < k; ++j) {
            const Instance& inst = shuffled[start + static_cast<std::size_t>(j)];
            b.text += "\n\nQ" + std::to_string(j + 1) + ":" + inst.nl_text;
            b.instance_ids.push_back(inst.id);
            b.gold_answers.push_back(inst.gold_answer);
            b.gold_types.push_back(inst.gold_type);
        }
        out.push_back(std::move(b));
    }
    return out;
}

std::string instance_to_json(const Instance& inst) {
    json j;
    j["id"] = inst.id;
    j["gold_type"] = to_string(inst.gold_type);
    j["gold_answer"] = inst.gold_answer;
    j["nl_text"] = inst.nl_text;
    j["program_text"] = inst.program_text;
    j["provenance"] = inst.provenance;
    return j.dump();
}

std::optional<Instance> instance_from_json(const std::string& line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    Instance inst;
    if (!j.contains("id") || !j.contains("gold_type") || !j.contains("gold_answer") ||
        !j.contains("nl_text"))
        return std::nullopt;
    inst.id = j["id"].get<std::string>();
    auto t = parse_reasoning_type(j["gold_type"].get<std::string>());
    if (!t) return std::nullopt;
    inst.gold_type = *t;
    inst.gold_answer = j["gold_answer"].get<std::string>();
    inst.nl_text = j["nl_text"].get<std::string>();
    inst.program_text = j.value("program_text", "");
    inst.provenance = j.value("provenance", "");
    return inst;
}

bool save_dataset(const std::string& path, const std::vector<Instance>& instances) {
    std::ofstream out(path);
    if (!out) return false;
    for (const auto& inst : instances) out << instance_to_json(inst) << "\n";
    return static_cast<bool>(out);
}

std::optional<std::vector<Instance>> load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::vector<Instance> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto inst = instance_from_json(line);
        if (!inst) return std::nullopt;
        out.push_back(std::move(*inst));
    }
    return out;
}

EvalReport evaluate(const std::vector<Instance>& golds, const std::vector<RunTrace>& runs) {
    if (golds.size() != runs.size())
        throw std::invalid_argument("evaluate: golds and runs are misaligned");

    EvalReport report;
    report.total = golds.size();
    for (std::size_t i = 0; i < golds.size(); ++i) {
        const Instance& gold = golds[i];
        const RunTrace& run = runs[i];

        bool routed_ok = !run.routed_solver.empty();
        for (const auto& [pid, kind] : run.routed_solver)
            routed_ok = routed_ok && kind == solver_kind_for(gold.gold_type);
        if (routed_ok) ++report.routing_correct;

        bool correct =
            !run.final_answers.empty() && run.final_answers.front() == gold.gold_answer;
        auto& [type_correct, type_total] = report.per_type[to_string(gold.gold_type)];
        ++type_total;
        if (correct) {
            ++report.correct;
            ++type_correct;
        } else {
            auto category = classify_failure(run, gold.gold_type, gold.gold_answer);
            if (category) ++report.error_histogram[static_cast<std::size_t>(*category)];
        }
    }
    if (report.total > 0) {
        report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.total);
        report.routing_accuracy =
            static_cast<double>(report.routing_correct) / static_cast<double>(report.total);
    }
    return report;
}

std::string EvalReport::table() const {
    std::ostringstream os;
    os << "instances: " << total << "\n";
    os << "accuracy: " << accuracy << " (" << correct << "/" << total << ")\n";
    os << "routing accuracy: " << routing_accuracy << " (" << routing_correct << "/" << total
       << ")\n";
    os << "per-type accuracy:\n";
    for (const auto& [type, counts] : per_type) {
        os << "  " << type << ": " << counts.first << "/" << counts.second << "\n";
    }
    os << "error histogram:\n";
    for (int c = 0; c < kErrorCategoryCount; ++c) {
        os << "  " << to_string(static_cast<ErrorCategory>(c)) << ": "
           << error_histogram[static_cast<std::size_t>(c)] << "\n";
    }
    os << "wall seconds: " << wall_seconds << "\n";
    return os.str();
}

}  // namespace nsr::harness
