#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nsr/config.hpp"

namespace nsr::config {

namespace {

using json = nlohmann::ordered_json;

bool fail(std::string* error, const std::string& message) {
    if (error) *error = message;
    return false;
}

// Every object in the config tree is closed: any key outside `allowed`
// rejects the whole file.
bool check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& where, std::string* error) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            return fail(error, "unknown key \"" + key + "\" in " + where);
    }
    return true;
}

std::optional<SolverVerdict::Kind> parse_verdict_kind(const std::string& s) {
    if (s == "proved") return SolverVerdict::Kind::proved;
    if (s == "disproved") return SolverVerdict::Kind::disproved;
    if (s == "unknown") return SolverVerdict::Kind::unknown;
    if (s == "sat") return SolverVerdict::Kind::sat;
    if (s == "unsat") return SolverVerdict::Kind::unsat;
    return std::nullopt;
}

std::string verdict_kind_name(SolverVerdict::Kind k) {
    switch (k) {
        case SolverVerdict::Kind::proved: return "proved";
        case SolverVerdict::Kind::disproved: return "disproved";
        case SolverVerdict::Kind::unknown: return "unknown";
        case SolverVerdict::Kind::sat: return "sat";
        case SolverVerdict::Kind::unsat: return "unsat";
        default: return "unknown";
    }
}

std::optional<engines::ExternalEngineKind> parse_engine_kind(const std::string& s) {
    if (s == "lp_engine") return engines::ExternalEngineKind::lp_engine;
    if (s == "fol_prover") return engines::ExternalEngineKind::fol_prover;
    if (s == "csp_engine") return engines::ExternalEngineKind::csp_engine;
    if (s == "smt_engine") return engines::ExternalEngineKind::smt_engine;
    return std::nullopt;
}

std::string engine_kind_name(engines::ExternalEngineKind k) {
    switch (k) {
        case engines::ExternalEngineKind::lp_engine: return "lp_engine";
        case engines::ExternalEngineKind::fol_prover: return "fol_prover";
        case engines::ExternalEngineKind::csp_engine: return "csp_engine";
        case engines::ExternalEngineKind::smt_engine: return "smt_engine";
    }
    return "smt_engine";
}

bool parse_limits(const json& obj, engines::EngineLimits& limits, std::string* error) {
    if (!obj.is_object()) return fail(error, "\"limits\" must be an object");
    if (!check_keys(obj,
                    {"max_derived_facts", "max_resolution_steps", "max_clause_size",
                     "max_solutions", "bool_enumeration_cap", "numeric_probe_bound",
                     "timeout_ms"},
                    "limits", error))
        return false;
    auto number = [&](const char* key, auto& target) {
        if (obj.contains(key)) target = obj[key].template get<std::decay_t<decltype(target)>>();
    };
    number("max_derived_facts", limits.max_derived_facts);
    number("max_resolution_steps", limits.max_resolution_steps);
    number("max_clause_size", limits.max_clause_size);
    number("max_solutions", limits.max_solutions);
    number("bool_enumeration_cap", limits.bool_enumeration_cap);
    number("numeric_probe_bound", limits.numeric_probe_bound);
    if (obj.contains("timeout_ms"))
        limits.timeout = std::chrono::milliseconds(obj["timeout_ms"].get<long long>());
    return true;
}

bool parse_external(const json& arr, std::vector<engines::ExternalEngine>& out,
                    std::string* error) {
    if (!arr.is_array()) return fail(error, "\"external_engines\" must be an array");
    for (const auto& item : arr) {
        if (!item.is_object())
            return fail(error, "external engine entries must be objects");
        if (!check_keys(item, {"kind", "preset", "executable", "args", "output_patterns"},
                        "external_engines", error))
            return false;
        engines::ExternalEngine engine;
        if (item.contains("preset")) {
            std::string preset = item["preset"].get<std::string>();
            if (preset == "z3")
                engine = engines::preset_z3();
            else if (preset == "minizinc")
                engine = engines::preset_minizinc();
            else
                return fail(error, "unknown external engine preset \"" + preset + "\"");
        }
        if (item.contains("kind")) {
            auto kind = parse_engine_kind(item["kind"].get<std::string>());
            if (!kind)
                return fail(error,
                            "unknown engine kind \"" + item["kind"].get<std::string>() + "\"");
            engine.kind = *kind;
        }
        if (item.contains("executable")) engine.executable = item["executable"].get<std::string>();
        if (item.contains("args")) {
            engine.args.clear();
            for (const auto& a : item["args"]) engine.args.push_back(a.get<std::string>());
        }
        if (item.contains("output_patterns")) {
            engine.output_patterns.clear();
            for (const auto& p : item["output_patterns"]) {
                if (!check_keys(p, {"regex", "verdict"}, "output_patterns", error)) return false;
                engines::OutputPattern pattern;
                pattern.regex = p.at("regex").get<std::string>();
                auto verdict = parse_verdict_kind(p.at("verdict").get<std::string>());
                if (!verdict)
                    return fail(error, "unknown verdict \"" +
                                           p.at("verdict").get<std::string>() +
                                           "\" in output pattern");
                pattern.verdict = *verdict;
                engine.output_patterns.push_back(std::move(pattern));
            }
        }
        if (engine.executable.empty())
            return fail(error, "external engine entry needs an executable or a preset");
        out.push_back(std::move(engine));
    }
    return true;
}

bool parse_llm(const json& obj, llm::ClientPolicy& policy, std::string* error) {
    if (!obj.is_object()) return fail(error, "\"llm\" must be an object");
    if (!check_keys(obj,
                    {"base_url", "chat_path", "auth_env", "max_retries", "backoff_initial_ms",
                     "backoff_factor"},
                    "llm", error))
        return false;
    if (obj.contains("base_url")) policy.base_url = obj["base_url"].get<std::string>();
    if (obj.contains("chat_path")) policy.chat_path = obj["chat_path"].get<std::string>();
    if (obj.contains("auth_env")) policy.auth_env = obj["auth_env"].get<std::string>();
    if (obj.contains("max_retries")) policy.max_retries = obj["max_retries"].get<int>();
    if (obj.contains("backoff_initial_ms"))
        policy.backoff_initial_ms = obj["backoff_initial_ms"].get<int>();
    if (obj.contains("backoff_factor")) policy.backoff_factor = obj["backoff_factor"].get<int>();
    return true;
}

}  // namespace

std::optional<RunConfig> parse_config(const std::string& json_text, std::string* error) {
    json root = json::parse(json_text, nullptr, false);
    if (root.is_discarded()) {
        fail(error, "config is not valid JSON");
        return std::nullopt;
    }
    if (!root.is_object()) {
        fail(error, "config root must be an object");
        return std::nullopt;
    }
    if (!check_keys(root,
                    {"decomposer", "formalizer", "answer_policy", "cues_path", "limits",
                     "external_engines", "llm", "llm_model", "seeds", "dataset_path",
                     "output_dir", "write_traces", "jobs"},
                    "config", error))
        return std::nullopt;

    RunConfig config;
    if (root.contains("decomposer")) config.decomposer = root["decomposer"].get<std::string>();
    if (config.decomposer != "heuristic" && config.decomposer != "language_model") {
        fail(error, "decomposer must be \"heuristic\" or \"language_model\"");
        return std::nullopt;
    }
    if (root.contains("formalizer")) config.formalizer = root["formalizer"].get<std::string>();
    if (config.formalizer != "templates" && config.formalizer != "language_model") {
        fail(error, "formalizer must be \"templates\" or \"language_model\"");
        return std::nullopt;
    }
    if (root.contains("answer_policy"))
        config.answer_policy = root["answer_policy"].get<std::string>();
    if (config.answer_policy != "abstain_else_false" && config.answer_policy != "false_label") {
        fail(error, "answer_policy must be \"abstain_else_false\" or \"false_label\"");
        return std::nullopt;
    }
    if (root.contains("cues_path")) config.cues_path = root["cues_path"].get<std::string>();
    if (root.contains("limits") && !parse_limits(root["limits"], config.limits, error))
        return std::nullopt;
    if (root.contains("external_engines") &&
        !parse_external(root["external_engines"], config.external_engines, error))
        return std::nullopt;
    if (root.contains("llm") && !parse_llm(root["llm"], config.llm, error)) return std::nullopt;
    if (root.contains("llm_model")) config.llm_model = root["llm_model"].get<std::string>();
    if (root.contains("seeds")) {
        config.seeds.clear();
        for (const auto& s : root["seeds"])
            config.seeds.push_back(s.get<unsigned long long>());
        if (config.seeds.empty()) {
            fail(error, "seeds must not be empty");
            return std::nullopt;
        }
    }
    if (root.contains("dataset_path")) config.dataset_path = root["dataset_path"].get<std::string>();
    if (root.contains("output_dir")) config.output_dir = root["output_dir"].get<std::string>();
    if (root.contains("write_traces")) config.write_traces = root["write_traces"].get<bool>();
    if (root.contains("jobs")) config.jobs = root["jobs"].get<int>();
    if (config.jobs < 1) {
        fail(error, "jobs must be >= 1");
        return std::nullopt;
    }
    return config;
}

std::optional<RunConfig> load_config(const std::string& path, std::string* error) {
    std::ifstream in(path);
    if (!in) {
        fail(error, "cannot open config file: " + path);
        return std::nullopt;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), error);
}

std::string to_json(const RunConfig& config) {
    json root;
    root["decomposer"] = config.decomposer;
    root["formalizer"] = config.formalizer;
    root["answer_policy"] = config.answer_policy;
    if (!config.cues_path.empty()) root["cues_path"] = config.cues_path;
    root["limits"] = {
        {"max_derived_facts", config.limits.max_derived_facts},
        {"max_resolution_steps", config.limits.max_resolution_steps},
        {"max_clause_size", config.limits.max_clause_size},
        {"max_solutions", config.limits.max_solutions},
        {"bool_enumeration_cap", config.limits.bool_enumeration_cap},
        {"numeric_probe_bound", config.limits.numeric_probe_bound},
        {"timeout_ms", config.limits.timeout.count()},
    };
    if (!config.external_engines.empty()) {
        json arr = json::array();
        for (const auto& e : config.external_engines) {
            json item;
            item["kind"] = engine_kind_name(e.kind);
            item["executable"] = e.executable;
            item["args"] = e.args;
            json patterns = json::array();
            for (const auto& p : e.output_patterns)
                patterns.push_back({{"regex", p.regex}, {"verdict", verdict_kind_name(p.verdict)}});
            item["output_patterns"] = std::move(patterns);
            arr.push_back(std::move(item));
        }
        root["external_engines"] = std::move(arr);
    }
    root["llm"] = {
        {"base_url", config.llm.base_url},
        {"chat_path", config.llm.chat_path},
        {"auth_env", config.llm.auth_env},
        {"max_retries", config.llm.max_retries},
        {"backoff_initial_ms", config.llm.backoff_initial_ms},
        {"backoff_factor", config.llm.backoff_factor},
    };
    root["llm_model"] = config.llm_model;
    root["seeds"] = config.seeds;
    if (!config.dataset_path.empty()) root["dataset_path"] = config.dataset_path;
    root["output_dir"] = config.output_dir;
    root["write_traces"] = config.write_traces;
    root["jobs"] = config.jobs;
    return root.dump(2);
}

pipeline::PipelineConfig pipeline_config(const RunConfig& config, const llm::ChatClient* client,
                                         const decomp::CueLexicon* lexicon) {
    pipeline::PipelineConfig out;
    out.decomposer.kind = config.decomposer == "language_model"
                              ? decomp::DecomposerBackend::Kind::language_model
                              : decomp::DecomposerBackend::Kind::heuristic;
    out.decomposer.client = client;
    out.decomposer.lexicon = lexicon;
    out.formalizer_backend.kind = config.formalizer == "language_model"
                                      ? formalizer::FormalizerBackend::Kind::language_model
                                      : formalizer::FormalizerBackend::Kind::templates;
    out.formalizer_backend.client = client;
    out.answers.unknown_policy = config.answer_policy == "false_label"
                                     ? formalizer::UnknownPolicy::false_label
                                     : formalizer::UnknownPolicy::abstain_else_false;
    out.limits = config.limits;
    return out;
}

}  // namespace nsr::config
