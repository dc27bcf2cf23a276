#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nsr/core.hpp"
#include "nsr/llmclient.hpp"

namespace nsr::decomp {

// Weighted substring cues per reasoning type; data-driven so the heuristic
// can be tuned without rebuilding.
struct CueLexicon {
    std::map<ReasoningType, std::vector<std::pair<std::string, double>>> cues;
};

// Built-in lexicon tuned against the synthetic generators.
const CueLexicon& default_cues();
// Loads a lexicon from a JSON file {"LP": [{"cue":..., "weight":...}], ...};
// nullopt on malformed content.
std::optional<CueLexicon> load_cues(const std::string& path);

struct FeatureScore {
    std::map<ReasoningType, double> scores;
    std::vector<std::string> evidence;  // matched cue strings
};

// Argmax over cue scores with deterministic tie-break LP > FOL > CSP > SMT.
std::pair<ReasoningType, FeatureScore> classify_heuristic(
    const std::string& sub_text, const CueLexicon& lexicon = default_cues());

struct DecomposerBackend {
    enum class Kind { heuristic, language_model };

    Kind kind = Kind::heuristic;
    const llm::ChatClient* client = nullptr;  // required for language_model
    const CueLexicon* lexicon = nullptr;      // optional heuristic override
};

struct DecomposeResult {
    std::optional<DecomposedInput> input;
    std::vector<std::string> issues;  // non-empty on failure

    bool ok() const { return input.has_value(); }
};

// Splits multi-question text on "Q<k>:" markers, extracts per-type
// components, classifies each segment and assembles the DecomposedInput.
// The language-model backend parses the emitted schema instead, with one
// repair attempt on malformed output.
DecomposeResult decompose(const std::string& text, const DecomposerBackend& backend);

// Parses and validates the decomposition wire object ("result" array +
// "overall_goal"); issues list every missing/extra/ill-typed key.
DecomposeResult validate_schema(const std::string& raw);

// Canonical wire serialization of a DecomposedInput (the same schema
// validate_schema accepts).
std::string serialize_decomposition(const DecomposedInput& input);

}  // namespace nsr::decomp
