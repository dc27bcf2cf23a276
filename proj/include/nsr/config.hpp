#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsr/engines.hpp"
#include "nsr/llmclient.hpp"
#include "nsr/pipeline.hpp"

namespace nsr::config {

// Whole-run configuration, loaded from a JSON file. Every key is optional;
// unknown keys are rejected so typos fail loudly before any run.
struct RunConfig {
    std::string decomposer = "heuristic";          // heuristic | language_model
    std::string formalizer = "templates";          // templates | language_model
    std::string answer_policy = "abstain_else_false";  // or false_label
    std::string cues_path;                         // optional lexicon override

    engines::EngineLimits limits;
    std::vector<engines::ExternalEngine> external_engines;

    llm::ClientPolicy llm;
    std::string llm_model = "gpt-4o";

    std::vector<unsigned long long> seeds{1, 2, 3};
    std::string dataset_path;
    std::string output_dir = "out";
    bool write_traces = true;
    int jobs = 1;
};

std::optional<RunConfig> parse_config(const std::string& json_text, std::string* error);
std::optional<RunConfig> load_config(const std::string& path, std::string* error);
std::string to_json(const RunConfig& config);

// Assembles the pipeline settings; client/lexicon are borrowed and must
// outlive the returned config.
pipeline::PipelineConfig pipeline_config(const RunConfig& config,
                                         const llm::ChatClient* client = nullptr,
                                         const decomp::CueLexicon* lexicon = nullptr);

}  // namespace nsr::config
