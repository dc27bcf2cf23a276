#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nsr/decomposer.hpp"

namespace nsr::decomp {

namespace {

using json = nlohmann::ordered_json;

const char* kDefaultCuesJson = R"JSON({
  "LP": [
    {"cue": "Every ", "weight": 3.0},
    {"cue": "Everything", "weight": 2.0}
  ],
  "FOL": [
    {"cue": "All ", "weight": 3.0},
    {"cue": "Some ", "weight": 3.0},
    {"cue": "No ", "weight": 3.0},
    {"cue": "neither", "weight": 3.0},
    {"cue": "there exists", "weight": 3.0}
  ],
  "CSP": [
    {"cue": "arranged in a fixed order", "weight": 6.0},
    {"cue": "Which of the following is true?", "weight": 5.0},
    {"cue": "finished above", "weight": 2.0},
    {"cue": "finished below", "weight": 2.0},
    {"cue": "finished first", "weight": 2.0},
    {"cue": "finished last", "weight": 2.0},
    {"cue": "to the left of", "weight": 2.0},
    {"cue": "to the right of", "weight": 2.0},
    {"cue": "leftmost", "weight": 2.0},
    {"cue": "rightmost", "weight": 2.0},
    {"cue": "shelf", "weight": 1.0}
  ],
  "SMT": [
    {"cue": "TRIAL:", "weight": 6.0},
    {"cue": "PATIENT:", "weight": 6.0},
    {"cue": "Does the patient match the trial?", "weight": 5.0},
    {"cue": "Inclusion Criteria", "weight": 3.0},
    {"cue": "Exclusion Criteria", "weight": 3.0},
    {"cue": "trial", "weight": 0.5},
    {"cue": "patient", "weight": 0.5}
  ]
})JSON";

std::optional<CueLexicon> cues_from_json(const json& j) {
    if (!j.is_object()) return std::nullopt;
    CueLexicon lex;
    for (const auto& [key, arr] : j.items()) {
        auto t = parse_reasoning_type(key);
        if (!t || !arr.is_array()) return std::nullopt;
        for (const auto& entry : arr) {
            if (!entry.is_object() || !entry.contains("cue") || !entry.contains("weight"))
                return std::nullopt;
            lex.cues[*t].emplace_back(entry["cue"].get<std::string>(),
                                      entry["weight"].get<double>());
        }
    }
    return lex;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

size_t count_occurrences(const std::string& text, const std::string& needle) {
    if (needle.empty()) return 0;
    size_t count = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

// Slice of `text` strictly between marker `from` (exclusive) and `to`
// (start), empty when markers are absent.
std::string between(const std::string& text, const std::string& from,
                    const std::string& to) {
    size_t a = text.find(from);
    if (a == std::string::npos) return {};
    a += from.size();
    size_t b = to.empty() ? std::string::npos : text.find(to, a);
    return trim(b == std::string::npos ? text.substr(a) : text.substr(a, b - a));
}

std::vector<std::string> option_lines(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        std::string t = trim(line);
        if (!option_label(t).empty()) out.push_back(t);
    }
    return out;
}

// Text of the segment with the trailing option lines removed.
std::string strip_options(const std::string& text) {
    std::stringstream ss(text);
    std::string line, out;
    while (std::getline(ss, line)) {
        if (!option_label(trim(line)).empty()) continue;
        out += line + "\n";
    }
    return trim(out);
}

std::optional<SubProblem> extract_components(const std::string& segment,
                                             const CueLexicon& lexicon,
                                             std::vector<std::string>& issues) {
    auto [type, score] = classify_heuristic(segment, lexicon);
    SubProblem sp;
    sp.reasoning_type = type;
    sp.options = label_options(option_lines(segment));

    switch (type) {
        case ReasoningType::LP:
        case ReasoningType::FOL: {
            std::string premise = between(segment, "STATEMENT:", "QUESTION:");
            std::string hypothesis = strip_options(between(segment, "QUESTION:", ""));
            if (premise.empty() || hypothesis.empty()) {
                issues.push_back("could not locate STATEMENT/QUESTION sections");
                return std::nullopt;
            }
            sp.components["premise"] = premise;
            sp.components["hypothesis"] = hypothesis;
            break;
        }
        case ReasoningType::CSP: {
            const std::string q = "Which of the following is true?";
            std::string context = between(segment, "STATEMENT:", q);
            if (context.empty() || segment.find(q) == std::string::npos) {
                issues.push_back("could not locate CSP context/question sections");
                return std::nullopt;
            }
            sp.components["context"] = context;
            sp.components["question"] = q;
            break;
        }
        case ReasoningType::SMT: {
            const std::string q = "Does the patient match the trial?";
            std::string trial = between(segment, "TRIAL:", "PATIENT:");
            std::string sample = between(segment, "PATIENT:", q);
            if (trial.empty() || sample.empty()) {
                issues.push_back("could not locate TRIAL/PATIENT sections");
                return std::nullopt;
            }
            sp.components["trial_description"] = trial;
            sp.components["sample_description"] = sample;
            break;
        }
    }
    if (sp.options.empty()) {
        issues.push_back("no answer options found");
        return std::nullopt;
    }
    return sp;
}

// Positions of "Q<k>:" markers at line starts, with the digits' values.
std::vector<std::pair<size_t, int>> question_markers(const std::string& text) {
    std::vector<std::pair<size_t, int>> out;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t line_start = pos;
        size_t eol = text.find('\n', pos);
        if (text[line_start] == 'Q') {
            size_t i = line_start + 1, digits = 0;
            int value = 0;
            while (i < text.size() && isdigit(static_cast<unsigned char>(text[i]))) {
                value = value * 10 + (text[i] - '0');
                ++i;
                ++digits;
            }
            if (digits > 0 && i < text.size() && text[i] == ':')
                out.emplace_back(line_start, value);
        }
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }
    return out;
}

DecomposeResult decompose_heuristic(const std::string& text, const CueLexicon& lexicon) {
    DecomposeResult res;
    DecomposedInput input;

    auto markers = question_markers(text);
    if (!markers.empty()) {
        std::string header = trim(text.substr(0, markers.front().first));
        input.overall_goal =
            header.empty() ? "Solve multiple independent reasoning problems" : header;
        for (size_t i = 0; i < markers.size(); ++i) {
            size_t body_start = text.find(':', markers[i].first) + 1;
            size_t end = i + 1 < markers.size() ? markers[i + 1].first : text.size();
            std::string segment = trim(text.substr(body_start, end - body_start));
            auto sp = extract_components(segment, lexicon, res.issues);
            if (!sp) return res;
            sp->problem_id = "ques_" + std::to_string(i + 1);
            input.sub_problems.push_back(std::move(*sp));
        }
    } else {
        input.overall_goal = "Solve the reasoning problem";
        auto sp = extract_components(text, lexicon, res.issues);
        if (!sp) return res;
        sp->problem_id = "ques_1";
        input.sub_problems.push_back(std::move(*sp));
    }
    res.input = std::move(input);
    return res;
}

const char* kLlmSystemPrompt =
    "You are a logician and reasoning systems expert. Given a text that may "
    "contain one or multiple logical reasoning problems, identify each "
    "problem, determine its type from {LP, FOL, CSP, SAT}, and decompose the "
    "text. Return strictly a JSON object with two keys: \"result\" (array of "
    "problem objects) and \"overall_goal\" (string). Each problem object has "
    "\"problem_id\" (\"ques_1\", \"ques_2\", ...), \"problem_type\", and for "
    "LP/FOL the keys \"premise\", \"hypothesis\", \"options\"; for CSP "
    "\"context\", \"question\", \"options\"; for SAT \"trial_description\", "
    "\"sample_description\", \"options\". Preserve existing option labels; "
    "assign labels {'A)', 'B)', 'C)', ...} when missing. Respond with only "
    "valid JSON, no explanations or code fences.";

DecomposeResult decompose_llm(const std::string& text, const llm::ChatClient& client) {
    DecomposeResult res;
    llm::ChatRequest req;
    req.system_text = kLlmSystemPrompt;
    req.user_text = "Problem Statement:\n\n" + text;

    auto attempt = [&](const llm::ChatRequest& r) -> DecomposeResult {
        auto chat = client.chat(r);
        if (!chat.ok) {
            DecomposeResult out;
            out.issues.push_back(chat.error);
            return out;
        }
        auto obj = llm::extract_structured(chat.text);
        if (!obj) {
            DecomposeResult out;
            out.issues.push_back("no JSON object in model output");
            return out;
        }
        return validate_schema(*obj);
    };

    res = attempt(req);
    if (res.ok()) return res;

    // One repair round: echo the violations back to the model.
    std::string errors;
    for (const auto& i : res.issues) errors += "- " + i + "\n";
    llm::ChatRequest repair = req;
    repair.user_text += "\n\nYour previous output was rejected:\n" + errors +
                        "Return only the corrected JSON object.";
    return attempt(repair);
}

}  // namespace

const CueLexicon& default_cues() {
    static const CueLexicon lex = [] {
        auto parsed = cues_from_json(json::parse(kDefaultCuesJson));
        return *parsed;
    }();
    return lex;
}

std::optional<CueLexicon> load_cues(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    return cues_from_json(j);
}

std::pair<ReasoningType, FeatureScore> classify_heuristic(const std::string& sub_text,
                                                          const CueLexicon& lexicon) {
    FeatureScore fs;
    for (const auto& [type, cues] : lexicon.cues) {
        double score = 0.0;
        for (const auto& [cue, weight] : cues) {
            size_t hits = count_occurrences(sub_text, cue);
            if (hits > 0) {
                score += weight * static_cast<double>(hits);
                fs.evidence.push_back(cue);
            }
        }
        fs.scores[type] = score;
    }
    // Tie-break LP > FOL > CSP > SMT (declaration order of the enum).
    ReasoningType best = ReasoningType::LP;
    double best_score = -1.0;
    for (ReasoningType t :
         {ReasoningType::LP, ReasoningType::FOL, ReasoningType::CSP, ReasoningType::SMT}) {
        double s = fs.scores.count(t) ? fs.scores[t] : 0.0;
        if (s > best_score) {
            best = t;
            best_score = s;
        }
    }
    return {best, fs};
}

DecomposeResult decompose(const std::string& text, const DecomposerBackend& backend) {
    if (trim(text).empty()) {
        DecomposeResult res;
        res.issues.push_back("empty input text");
        return res;
    }
    if (backend.kind == DecomposerBackend::Kind::language_model) {
        if (!backend.client) {
            DecomposeResult res;
            res.issues.push_back("language-model backend requires a configured client");
            return res;
        }
        return decompose_llm(text, *backend.client);
    }
    return decompose_heuristic(text, backend.lexicon ? *backend.lexicon : default_cues());
}

DecomposeResult validate_schema(const std::string& raw) {
    DecomposeResult res;
    json j = json::parse(raw, nullptr, false);
    if (j.is_discarded()) {
        res.issues.push_back("not a valid JSON object");
        return res;
    }
    if (!j.is_object()) {
        res.issues.push_back("top level must be an object");
        return res;
    }
    for (const auto& [key, _] : j.items()) {
        if (key != "result" && key != "overall_goal")
            res.issues.push_back("unexpected top-level key: " + key);
    }
    if (!j.contains("result") || !j["result"].is_array() || j["result"].empty()) {
        res.issues.push_back("\"result\" must be a non-empty array");
        return res;
    }

    DecomposedInput input;
    input.overall_goal =
        j.contains("overall_goal") && j["overall_goal"].is_string()
            ? j["overall_goal"].get<std::string>()
            : std::string();
    if (input.overall_goal.empty()) input.overall_goal = "Solve the reasoning problem";

    std::vector<std::string> seen_ids;
    for (const auto& entry : j["result"]) {
        if (!entry.is_object()) {
            res.issues.push_back("problem entry is not an object");
            continue;
        }
        SubProblem sp;
        if (!entry.contains("problem_id") || !entry["problem_id"].is_string()) {
            res.issues.push_back("missing key: problem_id");
        } else {
            sp.problem_id = entry["problem_id"].get<std::string>();
            bool shaped = sp.problem_id.rfind("ques_", 0) == 0 && sp.problem_id.size() > 5 &&
                          std::all_of(sp.problem_id.begin() + 5, sp.problem_id.end(),
                                      [](char c) { return isdigit(static_cast<unsigned char>(c)); });
            if (!shaped) res.issues.push_back("problem_id must match ques_<k>: " + sp.problem_id);
            if (std::find(seen_ids.begin(), seen_ids.end(), sp.problem_id) != seen_ids.end())
                res.issues.push_back("duplicate problem_id: " + sp.problem_id);
            seen_ids.push_back(sp.problem_id);
        }
        if (!entry.contains("problem_type") || !entry["problem_type"].is_string()) {
            res.issues.push_back("missing key: problem_type");
            continue;
        }
        auto type = parse_reasoning_type(entry["problem_type"].get<std::string>());
        if (!type) {
            res.issues.push_back("unknown problem_type: " +
                                 entry["problem_type"].get<std::string>());
            continue;
        }
        sp.reasoning_type = *type;

        const auto& required = required_components(*type);
        for (const auto& key : required) {
            if (!entry.contains(key) || !entry[key].is_string())
                res.issues.push_back("missing key for " + to_string(*type) + ": " + key);
            else
                sp.components[key] = entry[key].get<std::string>();
        }
        if (!entry.contains("options") || !entry["options"].is_array() ||
            entry["options"].empty()) {
            res.issues.push_back("missing key: options");
        } else {
            std::vector<std::string> raw_options;
            for (const auto& o : entry["options"]) {
                if (o.is_string())
                    raw_options.push_back(o.get<std::string>());
                else
                    res.issues.push_back("option entries must be strings");
            }
            sp.options = label_options(raw_options);
        }
        for (const auto& [key, _] : entry.items()) {
            if (key == "problem_id" || key == "problem_type" || key == "options") continue;
            if (std::find(required.begin(), required.end(), key) == required.end())
                res.issues.push_back("unexpected key: " + key);
        }
        input.sub_problems.push_back(std::move(sp));
    }

    if (!res.issues.empty()) return res;
    res.input = std::move(input);
    return res;
}

std::string serialize_decomposition(const DecomposedInput& input) {
    json j;
    j["result"] = json::array();
    for (const auto& sp : input.sub_problems) {
        json e;
        e["problem_id"] = sp.problem_id;
        // The wire token set is {LP, FOL, CSP, SAT}; SAT is the SMT alias.
        e["problem_type"] =
            sp.reasoning_type == ReasoningType::SMT ? "SAT" : to_string(sp.reasoning_type);
        for (const auto& key : required_components(sp.reasoning_type)) {
            auto it = sp.components.find(key);
            e[key] = it == sp.components.end() ? "" : it->second;
        }
        e["options"] = sp.options;
        j["result"].push_back(std::move(e));
    }
    j["overall_goal"] = input.overall_goal;
    return j.dump(2);
}

}  // namespace nsr::decomp
