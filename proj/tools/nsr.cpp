#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nsr/config.hpp"
#include "nsr/harness.hpp"
#include "nsr/pipeline.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace nsr;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitPartial = 2;

std::string read_input(const std::string& path) {
    std::ostringstream buffer;
    if (path.empty() || path == "-") {
        buffer << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw CLI::ValidationError("input", "cannot open " + path);
        buffer << in.rdbuf();
    }
    return buffer.str();
}

json trace_to_json(const RunTrace& trace) {
    json j;
    j["raw_input"] = trace.raw_input;
    j["decomposition_text"] = trace.decomposition_text;
    j["decomposition_parsed"] = trace.decomposition_parsed;
    j["plan_text"] = trace.plan_text;
    j["plan_built"] = trace.plan_built;
    j["plan_valid"] = trace.plan_valid;
    j["plan_violations"] = trace.plan_violations;
    j["routed_solver"] = trace.routed_solver;
    json nodes = json::array();
    for (const auto& n : trace.nodes) {
        json node;
        node["node"] = n.node;
        node["solver_kind"] = n.solver_kind;
        json attempts = json::array();
        for (const auto& a : n.attempts) {
            attempts.push_back({{"attempt", a.attempt},
                                {"program_text", a.program_text},
                                {"diagnostics", a.diagnostics},
                                {"accepted", a.accepted}});
        }
        node["attempts"] = std::move(attempts);
        if (n.verdict) {
            node["verdict"] = to_string(n.verdict->kind);
            if (!n.verdict->detail.empty()) node["verdict_detail"] = n.verdict->detail;
            if (n.verdict->kind == SolverVerdict::Kind::solutions)
                node["solution_count"] = n.verdict->solutions.size();
        }
        node["converted_answer"] = n.converted_answer;
        node["failed"] = n.failed;
        if (!n.failure_note.empty()) node["failure_note"] = n.failure_note;
        nodes.push_back(std::move(node));
    }
    j["nodes"] = std::move(nodes);
    j["final_answers"] = trace.final_answers;
    j["retry_count"] = trace.retry_count;
    j["started_ms"] = trace.started_ms;
    j["finished_ms"] = trace.finished_ms;
    return j;
}

// Atomic write: temp file in the target directory, then rename.
bool write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) return false;
        out << content;
        if (!out) return false;
    }
    std::filesystem::rename(tmp, path, ec);
    return !ec;
}

struct CommonOptions {
    std::string config_path;
    std::string output_dir;
    bool no_traces = false;
};

int load_run_config(const CommonOptions& opts, config::RunConfig& out) {
    if (!opts.config_path.empty()) {
        std::string error;
        auto loaded = config::load_config(opts.config_path, &error);
        if (!loaded) {
            std::cerr << "config error: " << error << "\n";
            return kExitConfigError;
        }
        out = *loaded;
    }
    if (!opts.output_dir.empty()) out.output_dir = opts.output_dir;
    if (opts.no_traces) out.write_traces = false;
    if (out.decomposer == "language_model" || out.formalizer == "language_model") {
        std::cerr << "config error: language_model backends need a running provider; "
                     "use the heuristic/templates backends for offline runs\n";
        return kExitConfigError;
    }
    return kExitOk;
}

// Config plus the loaded cue lexicon; `settings` borrows `lexicon`, so a
// session must stay in place for the pipeline's lifetime.
struct Session {
    config::RunConfig run_config;
    std::optional<decomp::CueLexicon> lexicon;
    pipeline::PipelineConfig settings;
};

int load_session(const CommonOptions& opts, Session& session) {
    if (int rc = load_run_config(opts, session.run_config); rc != kExitOk) return rc;
    if (!session.run_config.cues_path.empty()) {
        session.lexicon = decomp::load_cues(session.run_config.cues_path);
        if (!session.lexicon) {
            std::cerr << "config error: cannot load cue lexicon from "
                      << session.run_config.cues_path << "\n";
            return kExitConfigError;
        }
    }
    session.settings = config::pipeline_config(session.run_config, nullptr,
                                               session.lexicon ? &*session.lexicon : nullptr);
    return kExitOk;
}

int cmd_solve(const CommonOptions& opts, const std::string& input_path) {
    Session session;
    if (int rc = load_session(opts, session); rc != kExitOk) return rc;
    const config::RunConfig& run_config = session.run_config;

    std::string text = read_input(input_path);
    pipeline::Pipeline pipe(session.settings);
    RunTrace trace = pipe.run(text);

    bool partial = trace.final_answers.empty();
    for (const auto& answer : trace.final_answers) {
        std::cout << answer << "\n";
        if (answer == router::kUnknownAnswer) partial = true;
    }
    if (trace.final_answers.empty()) std::cout << router::kUnknownAnswer << "\n";

    if (run_config.write_traces) {
        auto path = std::filesystem::path(run_config.output_dir) / "trace.json";
        if (!write_file_atomic(path, trace_to_json(trace).dump(2) + "\n")) {
            std::cerr << "cannot write trace to " << path.string() << "\n";
            return kExitConfigError;
        }
        std::cerr << "trace: " << path.string() << "\n";
    }
    return partial ? kExitPartial : kExitOk;
}

int cmd_route(const CommonOptions& opts, const std::string& input_path) {
    Session session;
    if (int rc = load_session(opts, session); rc != kExitOk) return rc;

    std::string text = read_input(input_path);
    auto decomposed = decomp::decompose(text, session.settings.decomposer);
    if (!decomposed.ok()) {
        for (const auto& issue : decomposed.issues) std::cerr << issue << "\n";
        return kExitPartial;
    }
    auto registry = pipeline::default_registry(session.settings);
    auto built = router::build_plan(*decomposed.input, registry);
    if (!built.ok()) {
        for (const auto& issue : built.issues) std::cerr << issue << "\n";
        return kExitPartial;
    }
    std::cout << router::serialize_plan(*built.plan) << "\n";
    return kExitOk;
}

int cmd_check(const std::string& path, const std::string& language) {
    std::string text = read_input(path);
    auto parsed = parse_reasoning_type(language);
    std::string upper = language;
    for (auto& c : upper) c = static_cast<char>(toupper(static_cast<unsigned char>(c)));
    if (!parsed) parsed = parse_reasoning_type(upper);
    if (!parsed) {
        std::cerr << "unknown language \"" << language << "\" (expected lp, fol, csp or smt)\n";
        return kExitConfigError;
    }
    std::string diagnostics;
    bool ok = false;
    switch (*parsed) {
        case ReasoningType::LP: {
            auto r = lang::parse_lp(text);
            ok = r.ok();
            if (!ok) diagnostics = r.all_messages();
            break;
        }
        case ReasoningType::FOL: {
            auto r = lang::parse_fol(text);
            ok = r.ok();
            if (!ok) diagnostics = r.all_messages();
            break;
        }
        case ReasoningType::CSP: {
            auto r = lang::parse_csp(text);
            ok = r.ok();
            if (!ok) diagnostics = r.all_messages();
            break;
        }
        case ReasoningType::SMT: {
            auto r = lang::parse_smt(text);
            ok = r.ok();
            if (!ok) diagnostics = r.all_messages();
            break;
        }
    }
    if (ok) {
        std::cout << "ok\n";
        return kExitOk;
    }
    std::cout << diagnostics << "\n";
    return kExitPartial;
}

int cmd_gen(const std::string& generator, int n, unsigned long long seed, int hops,
            int objects, const std::string& labels, const std::string& out_path) {
    std::vector<harness::Instance> instances;
    try {
        if (generator == "lp") {
            auto space = labels == "three_way" ? harness::LpLabelSpace::three_way
                                               : harness::LpLabelSpace::binary;
            instances = harness::gen_lp_chain(hops, n, seed, space);
        } else if (generator == "csp") {
            instances = harness::gen_csp_ordering(objects, n, seed);
        } else if (generator == "fol") {
            instances = harness::gen_fol(n, seed);
        } else if (generator == "smt") {
            instances = harness::gen_smt_eligibility(n, seed);
        } else if (generator == "mixed") {
            int quarter = n / 4;
            instances = harness::mix({harness::gen_lp_chain(hops, quarter, seed),
                                      harness::gen_csp_ordering(objects, quarter, seed + 1),
                                      harness::gen_fol(quarter, seed + 2),
                                      harness::gen_smt_eligibility(n - 3 * quarter, seed + 3)},
                                     seed);
        } else {
            std::cerr << "unknown generator \"" << generator
                      << "\" (expected lp, csp, fol, smt or mixed)\n";
            return kExitConfigError;
        }
    } catch (const std::exception& e) {
        std::cerr << "generation failed: " << e.what() << "\n";
        return kExitConfigError;
    }
    if (!harness::save_dataset(out_path, instances)) {
        std::cerr << "cannot write dataset to " << out_path << "\n";
        return kExitConfigError;
    }
    std::cout << "wrote " << instances.size() << " instances to " << out_path << "\n";
    return kExitOk;
}

std::vector<RunTrace> run_all(const pipeline::Pipeline& pipe,
                              const std::vector<harness::Instance>& instances, int jobs) {
    std::vector<RunTrace> traces(instances.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < instances.size(); ++i)
            traces[i] = pipe.run(instances[i].nl_text);
        return traces;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < instances.size();
                 i = next.fetch_add(1))
                traces[i] = pipe.run(instances[i].nl_text);
        });
    }
    for (auto& t : workers) t.join();
    return traces;
}

int cmd_eval(const CommonOptions& opts, const std::string& dataset_path,
             std::vector<unsigned long long> seeds, int jobs) {
    Session session;
    if (int rc = load_session(opts, session); rc != kExitOk) return rc;
    const config::RunConfig& run_config = session.run_config;
    std::string path = dataset_path.empty() ? run_config.dataset_path : dataset_path;
    if (path.empty()) {
        std::cerr << "config error: no dataset path given\n";
        return kExitConfigError;
    }
    auto dataset = harness::load_dataset(path);
    if (!dataset) {
        std::cerr << "config error: cannot load dataset " << path << "\n";
        return kExitConfigError;
    }
    if (seeds.empty()) seeds = run_config.seeds;
    if (jobs <= 0) jobs = run_config.jobs;

    pipeline::Pipeline pipe(session.settings);
    std::vector<double> accuracies;
    harness::EvalReport last;
    for (unsigned long long seed : seeds) {
        // The protocol re-shuffles instance order per seed; deterministic
        // backends make this a pure order perturbation.
        std::vector<harness::Instance> shuffled = *dataset;
        std::mt19937_64 eng(seed);
        for (std::size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1], shuffled[eng() % i]);

        auto start = std::chrono::steady_clock::now();
        auto traces = run_all(pipe, shuffled, jobs);
        auto report = harness::evaluate(shuffled, traces);
        report.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        accuracies.push_back(report.accuracy);
        std::cout << "seed " << seed << ": accuracy " << report.accuracy << ", routing "
                  << report.routing_accuracy << ", " << report.wall_seconds << " s\n";
        last = std::move(report);
    }

    double mean = 0;
    for (double a : accuracies) mean += a;
    mean /= static_cast<double>(accuracies.size());
    double var = 0;
    for (double a : accuracies) var += (a - mean) * (a - mean);
    var /= static_cast<double>(accuracies.size());
    std::cout << "\nmean accuracy: " << mean << " (stddev " << std::sqrt(var) << " over "
              << accuracies.size() << " seeds)\n\n";
    std::cout << last.table();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive multi-paradigm reasoning pipeline"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string input_path, dataset_path, language, generator, labels = "binary", out_path;
    std::vector<unsigned long long> seeds;
    int n = 100, hops = 3, objects = 5, jobs = 0;
    unsigned long long seed = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", common.config_path, "run config JSON file");
        cmd->add_option("--output-dir", common.output_dir, "output directory override");
        cmd->add_flag("--no-traces", common.no_traces, "do not write trace files");
    };

    auto* solve = app.add_subcommand("solve", "answer a reasoning problem");
    solve->add_option("input", input_path, "input file ('-' for stdin)");
    add_common(solve);

    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    gen->add_option("generator", generator, "lp | csp | fol | smt | mixed")->required();
    gen->add_option("--n", n, "number of instances");
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--hops", hops, "LP chain length");
    gen->add_option("--objects", objects, "CSP object count");
    gen->add_option("--labels", labels, "LP label space: binary | three_way");
    gen->add_option("--out", out_path, "output JSONL path")->required();

    auto* eval = app.add_subcommand("eval", "evaluate the pipeline on a dataset");
    eval->add_option("dataset", dataset_path, "JSONL dataset path");
    eval->add_option("--seeds", seeds, "evaluation seeds (repeatable)");
    eval->add_option("--jobs", jobs, "worker threads");
    add_common(eval);

    auto* check = app.add_subcommand("check", "parse a formal program and print diagnostics");
    check->add_option("file", input_path, "program file ('-' for stdin)")->required();
    check->add_option("--lang", language, "lp | fol | csp | smt")->required();

    auto* route = app.add_subcommand("route", "print the routing plan for an input");
    route->add_option("input", input_path, "input file ('-' for stdin)");
    add_common(route);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(common, input_path);
        if (gen->parsed()) return cmd_gen(generator, n, seed, hops, objects, labels, out_path);
        if (eval->parsed()) return cmd_eval(common, dataset_path, seeds, jobs);
        if (check->parsed()) return cmd_check(input_path, language);
        if (route->parsed()) return cmd_route(common, input_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}
