// videocot: batch pipeline turning VideoQA corpora into verified
// chain-of-thought instruction-tuning data.
//
// Subcommands: synth-corpus, eval-agents, generate, emit, eval-rationales,
// stats. Configuration comes from a JSON config file plus flag overrides
// (flags win); agent/LLM endpoints may also arrive via VIDEOCOT_* env vars.
// Exit codes: 0 success, 1 corpus/config error, 2 per-sample failures above
// the configured threshold (or every evaluation candidate failing).

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "videocot/cot.hpp"
#include "videocot/emitter.hpp"
#include "videocot/evalharness.hpp"
#include "videocot/http_agents.hpp"
#include "videocot/prompts.hpp"
#include "videocot/synth.hpp"
#include "videocot/util.hpp"

using namespace videocot;

namespace {

constexpr const char* kVersion = "videocot 0.1.0";

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : fallback;
}

struct CliOptions {
    std::string config_path;
    std::string corpus_dir;
    std::string out_dir;
    std::string records_dir;
    std::string outputs_file;
    std::string in_path;
    std::string sub_task = "detect";
    std::string mode = "single_step";
    unsigned long long seed = 0;
    int workers = 1;
    double lambda = 1.0;
    int shards = 1;
    size_t subset = 0;
    int videos = 50;
    int qa_per_video = 4;
    double max_failure_rate = 0.0;
    bool no_coherence_filter = false;
    bool strip_latency = false;
    bool dump_prompts = false;

    json config = json::object();

    json effective(const std::string& command) const {
        json j{{"command", command},
               {"corpus", corpus_dir},
               {"seed", seed},
               {"workers", workers},
               {"lambda", lambda},
               {"config", config}};
        return j;
    }
};

void load_config(CliOptions& opts) {
    if (opts.config_path.empty()) return;
    opts.config = json::parse(read_file(opts.config_path));
    // config supplies defaults; flags already parsed win via CLI11 defaults
    if (opts.config.contains("workers") && opts.workers == 1)
        opts.workers = opts.config["workers"].get<int>();
    if (opts.config.contains("lambda") && opts.lambda == 1.0)
        opts.lambda = opts.config["lambda"].get<double>();
    if (opts.config.contains("seed") && opts.seed == 0)
        opts.seed = opts.config["seed"].get<unsigned long long>();
    if (opts.config.contains("max_failure_rate") && opts.max_failure_rate == 0.0)
        opts.max_failure_rate = opts.config["max_failure_rate"].get<double>();
}

Budget budget_from(const json& config) {
    Budget b;
    if (config.contains("budgets")) {
        const auto& bj = config["budgets"];
        b.max_statements = bj.value("max_statements", b.max_statements);
        b.max_loop_iterations = bj.value("max_loop_iterations", b.max_loop_iterations);
    }
    return b;
}

// ---------------------------------------------------------------------------
// Backend construction from config specs

std::shared_ptr<CompletionClient> build_llm(const json& config) {
    json spec = config.value("llm", json::object());
    const std::string backend = spec.value("backend", "stub");
    std::shared_ptr<CompletionClient> client;
    if (backend == "stub") {
        const std::string mode = spec.value("stub_mode", "pipeline");
        if (mode == "pipeline") {
            // conversion prompts echo the trace rendering; judges say Yes
            client = std::make_shared<StubCompletionClient>([](const LlmRequest& req) {
                const auto at = req.prompt.rfind(prompts::kTraceMarker);
                if (at != std::string::npos)
                    return req.prompt.substr(at +
                                             std::string(prompts::kTraceMarker).size());
                return std::string("Yes");
            });
        } else if (mode == "yes") {
            client = StubCompletionClient::yes();
        } else {
            client = StubCompletionClient::fixed(spec.value("text", "Yes"));
        }
    } else if (backend == "http") {
        HttpCompletionClient::Options http;
        http.endpoint = env_or("VIDEOCOT_LLM_ENDPOINT", spec.value("endpoint", ""));
        http.api_key = env_or("VIDEOCOT_LLM_API_KEY", spec.value("api_key", ""));
        http.max_retries = std::atoi(
            env_or("VIDEOCOT_RETRIES", std::to_string(spec.value("max_retries", 3)))
                .c_str());
        if (http.endpoint.empty())
            throw ConfigError("llm backend is http but no endpoint configured");
        client = std::make_shared<HttpCompletionClient>(http);
    } else {
        throw ConfigError("unknown llm backend: " + backend);
    }
    const std::string model =
        env_or("VIDEOCOT_LLM_MODEL", spec.value("model", "default"));
    client = std::make_shared<ModelBoundClient>(client, model);
    const std::string cache_dir = env_or("VIDEOCOT_CACHE_DIR", spec.value("cache_dir", ""));
    if (!cache_dir.empty() && backend == "http")
        client = std::make_shared<DiskCachedClient>(client, cache_dir);
    return client;
}

BoundingBox box_from_spec(const json& arr, double confidence) {
    BoundingBox box;
    box.x_min = arr.at(0).get<double>();
    box.y_min = arr.at(1).get<double>();
    box.x_max = arr.at(2).get<double>();
    box.y_max = arr.at(3).get<double>();
    box.confidence = confidence;
    return box;
}

HttpAgentOptions http_opts(const json& spec, const char* env_var) {
    HttpAgentOptions opts;
    opts.endpoint = env_or(env_var, spec.value("endpoint", ""));
    if (opts.endpoint.empty())
        throw ConfigError("http agent backend without an endpoint (set it in the config "
                          "or via " + std::string(env_var) + ")");
    opts.max_retries = std::atoi(env_or("VIDEOCOT_RETRIES", "2").c_str());
    return opts;
}

AgentRegistry build_agents(const json& config, std::shared_ptr<const Corpus> corpus,
                           std::shared_ptr<CompletionClient> llm) {
    const json agents_spec = config.value("agents", json::object());
    auto spec_for = [&](const char* slot) {
        return agents_spec.value(slot, json{{"backend", "oracle"}});
    };
    AgentRegistry oracle = oracle_registry(corpus);
    AgentRegistry out;

    {
        const json spec = spec_for("decomposer");
        const std::string backend = spec.value("backend", "oracle");
        if (backend == "oracle") {
            if (!corpus->has_gold_programs())
                throw ConfigError(
                    "oracle decomposer requires gold programs (programs.jsonl)");
            out.decomposer = oracle.decomposer;
        } else if (backend == "llm" || backend == "http") {
            out.decomposer = std::make_shared<LlmDecomposer>(llm);
        } else if (backend == "stub") {
            out.decomposer =
                std::make_shared<StubDecomposer>(spec.value("completion", ""));
        } else {
            throw ConfigError("unknown decomposer backend: " + backend);
        }
    }
    {
        const json spec = spec_for("detector");
        const std::string backend = spec.value("backend", "oracle");
        if (backend == "oracle") {
            out.detector = oracle.detector;
        } else if (backend == "http") {
            out.detector =
                std::make_shared<HttpDetector>(http_opts(spec, "VIDEOCOT_DETECT_ENDPOINT"));
        } else if (backend == "stub") {
            std::vector<Detection> fixed;
            for (const auto& dj : spec.value("detections", json::array())) {
                Detection d;
                d.box = box_from_spec(dj.at("box"), dj.value("confidence", 1.0));
                d.frame = NormFrame{dj.value("frame", 0)};
                d.label = dj.value("label", "object");
                fixed.push_back(std::move(d));
            }
            out.detector = std::make_shared<StubDetector>(std::move(fixed));
        } else {
            throw ConfigError("unknown detector backend: " + backend);
        }
    }
    {
        const json spec = spec_for("grounder");
        const std::string backend = spec.value("backend", "oracle");
        if (backend == "oracle") {
            out.grounder = oracle.grounder;
        } else if (backend == "http") {
            out.grounder =
                std::make_shared<HttpGrounder>(http_opts(spec, "VIDEOCOT_GROUND_ENDPOINT"));
        } else if (backend == "stub") {
            const auto arr = spec.value("span", json::array({0, 31}));
            out.grounder = std::make_shared<StubGrounder>(TemporalSpan{
                NormFrame{arr.at(0).get<int>()}, NormFrame{arr.at(1).get<int>()}});
        } else {
            throw ConfigError("unknown grounder backend: " + backend);
        }
    }
    {
        const json spec = spec_for("recognizer");
        const std::string backend = spec.value("backend", "oracle");
        if (backend == "oracle") {
            out.recognizer = oracle.recognizer;
        } else if (backend == "http") {
            out.recognizer = std::make_shared<HttpRecognizer>(
                http_opts(spec, "VIDEOCOT_RECOGNIZE_ENDPOINT"));
        } else if (backend == "stub") {
            out.recognizer = std::make_shared<StubRecognizer>(
                spec.value("actions", std::vector<std::string>{}));
        } else {
            throw ConfigError("unknown recognizer backend: " + backend);
        }
    }
    {
        const json spec = spec_for("answerer");
        const std::string backend = spec.value("backend", "oracle");
        if (backend == "oracle") {
            out.answerer = oracle.answerer;
        } else if (backend == "http") {
            out.answerer =
                std::make_shared<HttpAnswerer>(http_opts(spec, "VIDEOCOT_QA_ENDPOINT"));
        } else if (backend == "stub") {
            out.answerer = std::make_shared<StubAnswerer>(spec.value("answer", "unknown"));
        } else {
            throw ConfigError("unknown answerer backend: " + backend);
        }
    }

    const bool any_oracle =
        out.detector == oracle.detector || out.grounder == oracle.grounder ||
        out.recognizer == oracle.recognizer || out.answerer == oracle.answerer;
    if (any_oracle && !corpus->has_scene_graphs())
        throw ConfigError("oracle agent backends require scene_graphs.jsonl in the corpus");
    return out;
}

void write_run_manifest(const CliOptions& opts, const std::string& command,
                        const std::vector<std::string>& outputs) {
    if (opts.out_dir.empty()) return;
    json manifest{{"tool", kVersion},
                  {"command", command},
                  {"seed", opts.seed},
                  {"config_hash", fnv1a64_hex(opts.effective(command).dump())},
                  {"effective_config", opts.effective(command)}};
    if (!opts.corpus_dir.empty()) {
        json hashes = json::object();
        for (const auto& [name, hash] : corpus_file_hashes(opts.corpus_dir))
            hashes[name] = hash;
        manifest["input_hashes"] = std::move(hashes);
    }
    manifest["outputs"] = outputs;
    write_file_atomic(std::filesystem::path(opts.out_dir) / "run_manifest.json",
                      manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_synth_corpus(CliOptions& opts) {
    SynthConfig cfg;
    cfg.videos = opts.videos;
    cfg.qa_per_video = opts.qa_per_video;
    cfg.seed = opts.seed;
    const Corpus corpus = generate_synthetic_corpus(cfg);
    save_corpus(corpus, opts.out_dir);
    opts.corpus_dir = opts.out_dir;
    write_run_manifest(opts, "synth-corpus",
                       {"corpus.json", "videos.jsonl", "scene_graphs.jsonl", "qa.jsonl",
                        "programs.jsonl"});
    std::cout << "wrote synthetic corpus: " << corpus.videos.size() << " videos, "
              << corpus.samples.size() << " samples -> " << opts.out_dir << "\n";
    return 0;
}

int cmd_generate(CliOptions& opts) {
    const Corpus corpus = load_corpus(opts.corpus_dir);
    auto shared_corpus = std::make_shared<const Corpus>(corpus);
    auto llm = build_llm(opts.config);
    const AgentRegistry agents = build_agents(opts.config, shared_corpus, llm);

    PipelineConfig pc;
    pc.budget = budget_from(opts.config);
    pc.workers = opts.workers;
    pc.coherence_stage_enabled = !opts.no_coherence_filter;
    pc.checkpoint_dir = std::filesystem::path(opts.out_dir) / "checkpoints";

    const PipelineResult result = run_pipeline(corpus, agents, *llm, pc);
    write_pipeline_outputs(result, opts.out_dir, !opts.strip_latency);
    write_run_manifest(opts, "generate",
                       {"traces.jsonl", "cot_records.jsonl", "yield_stats.json",
                        "yield_table.txt", "failures.jsonl"});
    std::cout << result.stats.render_table();

    const auto totals = result.stats.totals();
    const double failure_rate =
        totals.labels == 0
            ? 0.0
            : static_cast<double>(result.failures.size()) /
                  static_cast<double>(totals.labels);
    if (failure_rate > opts.max_failure_rate) {
        std::cerr << "per-sample failures: " << result.failures.size() << " of "
                  << totals.labels << " (rate " << failure_rate << " > threshold "
                  << opts.max_failure_rate << ")\n";
        return 2;
    }
    return 0;
}

int cmd_emit(CliOptions& opts) {
    const Corpus corpus = load_corpus(opts.corpus_dir);
    std::vector<CoTRecord> records;
    {
        const auto path = std::filesystem::path(opts.records_dir) / "cot_records.jsonl";
        std::istringstream in(read_file(path));
        std::string line;
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            records.push_back(cot_record_from_json(json::parse(line)));
        }
    }
    LossSpec spec;
    spec.lambda = opts.lambda;
    const EmitManifest manifest =
        emit(corpus.samples, records, spec, opts.out_dir, opts.shards);
    write_run_manifest(opts, "emit", {"train.jsonl", "manifest.json"});
    std::cout << stats_from_manifest(manifest.to_json()).render_table();
    return 0;
}

int cmd_stats(CliOptions& opts) {
    const json j = json::parse(read_file(opts.in_path));
    YieldStats stats;
    if (j.contains("per_dataset") && !j["per_dataset"].empty() &&
        j["per_dataset"].begin()->contains("cots")) {
        stats = stats_from_manifest(j);
    } else if (j.contains("per_dataset")) {
        stats = YieldStats::from_json(j);
    } else {
        throw ConfigError("unrecognized stats input (expected yield stats or a dataset "
                          "manifest): " + opts.in_path);
    }
    std::cout << stats.render_table();
    if (!opts.out_dir.empty()) {
        std::filesystem::create_directories(opts.out_dir);
        write_file_atomic(std::filesystem::path(opts.out_dir) / "stats_table.txt",
                          stats.render_table());
        write_file_atomic(std::filesystem::path(opts.out_dir) / "stats.json",
                          stats.to_json().dump(2) + "\n");
    }
    return 0;
}

int cmd_eval_agents(CliOptions& opts) {
    const Corpus corpus = load_corpus(opts.corpus_dir);
    if (!corpus.has_scene_graphs())
        throw ConfigError("eval-agents requires scene graphs in the corpus");
    auto shared_corpus = std::make_shared<const Corpus>(corpus);
    auto llm = build_llm(opts.config);

    EvalOptions eval;
    eval.budget = budget_from(opts.config);
    eval.subset = opts.subset;
    eval.seed = opts.seed;
    eval.mode = opts.mode == "end_to_end" ? SubstitutionPlan::Mode::end_to_end
                                          : SubstitutionPlan::Mode::single_step;

    json candidates = json::array();
    if (opts.config.contains("candidates") &&
        opts.config["candidates"].contains(opts.sub_task))
        candidates = opts.config["candidates"][opts.sub_task];
    if (candidates.empty())
        candidates.push_back(json{{"name", "oracle"}, {"backend", "oracle"}});

    struct Row {
        std::string name;
        MetricReport report;
        bool failed = false;
        std::string error;
    };
    std::vector<Row> rows;
    for (const auto& cj : candidates) {
        Row row;
        row.name = cj.value("name", cj.value("backend", "candidate"));
        try {
            json config_override = opts.config;
            json agents_spec = config_override.value("agents", json::object());
            const char* slot = opts.sub_task == "detect"      ? "detector"
                               : opts.sub_task == "ground"    ? "grounder"
                               : opts.sub_task == "recognize" ? "recognizer"
                               : opts.sub_task == "qa"        ? "answerer"
                                                              : "decomposer";
            agents_spec[slot] = cj;
            config_override["agents"] = agents_spec;
            const AgentRegistry candidate =
                build_agents(config_override, shared_corpus, llm);
            row.report = opts.sub_task == "decompose"
                             ? eval_decomposition(candidate, corpus, eval)
                             : eval_subtask(sub_task_from_string(opts.sub_task), candidate,
                                            corpus, eval);
            // a candidate whose every scored row failed outright is unusable
            if (row.report.n > 0) {
                bool all_dead = true;
                for (const auto& r : row.report.rows) {
                    if (r.skipped) continue;
                    bool zero = true;
                    for (const auto& [name, v] : r.values)
                        if (v != 0.0) zero = false;
                    if (!zero || r.note.empty()) all_dead = false;
                }
                if (all_dead) {
                    row.failed = true;
                    row.error = "all calls failed";
                }
            }
        } catch (const Error& e) {
            row.failed = true;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }

    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        auto primary = [](const Row& r) {
            if (r.failed || r.report.metrics.empty()) return -1.0;
            return r.report.metrics.begin()->second;
        };
        return primary(a) > primary(b);
    });

    json report_json = json::array();
    std::cout << "candidate comparison for sub-task " << opts.sub_task << ":\n";
    for (const auto& row : rows) {
        if (row.failed) {
            std::cout << "  " << row.name << ": FAILED (" << row.error << ")\n";
            report_json.push_back(
                json{{"name", row.name}, {"failed", true}, {"error", row.error}});
        } else {
            std::cout << "  " << row.name << ": ";
            bool first = true;
            for (const auto& [metric, value] : row.report.metrics) {
                if (!first) std::cout << ", ";
                first = false;
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.1f", value);
                std::cout << metric << " " << buf;
            }
            std::cout << "  (n=" << row.report.n << ")\n";
            json rj = row.report.to_json();
            rj["name"] = row.name;
            report_json.push_back(std::move(rj));
        }
    }
    if (!opts.out_dir.empty()) {
        std::filesystem::create_directories(opts.out_dir);
        write_file_atomic(std::filesystem::path(opts.out_dir) / "eval_agents.json",
                          json{{"sub_task", opts.sub_task},
                               {"seed", opts.seed},
                               {"mode", opts.mode},
                               {"candidates", report_json}}
                                  .dump(2) +
                              "\n");
        write_run_manifest(opts, "eval-agents", {"eval_agents.json"});
    }
    const bool all_failed = std::all_of(rows.begin(), rows.end(),
                                        [](const Row& r) { return r.failed; });
    return all_failed ? 2 : 0;
}

int cmd_eval_rationales(CliOptions& opts) {
    const Corpus corpus = load_corpus(opts.corpus_dir);
    if (!corpus.has_scene_graphs())
        throw ConfigError("eval-rationales requires scene graphs in the corpus");

    // seeded subset of samples that have scene graphs
    std::vector<size_t> eligible;
    for (size_t i = 0; i < corpus.samples.size(); ++i)
        if (corpus.scene_graph(corpus.samples[i].video_id)) eligible.push_back(i);
    std::vector<size_t> picked = eligible;
    if (opts.subset > 0 && opts.subset < eligible.size()) {
        picked.clear();
        std::mt19937_64 rng(opts.seed);
        std::sample(eligible.begin(), eligible.end(), std::back_inserter(picked),
                    opts.subset, rng);
    }

    if (opts.dump_prompts) {
        std::ostringstream out;
        for (size_t i : picked) {
            const QASample& s = corpus.samples[i];
            json line{{"sample_id", s.sample_id},
                      {"video_id", s.video_id},
                      {"question", s.question}};
            if (!s.options.empty()) line["options"] = s.options;
            line["suffix_prompt"] = prompts::kRationaleSuffix;
            out << line.dump() << "\n";
        }
        std::filesystem::create_directories(opts.out_dir);
        write_file_atomic(std::filesystem::path(opts.out_dir) / "rationale_prompts.jsonl",
                          out.str());
        write_run_manifest(opts, "eval-rationales", {"rationale_prompts.jsonl"});
        std::cout << "wrote " << picked.size() << " rationale prompts (seed " << opts.seed
                  << ")\n";
        return 0;
    }

    if (opts.outputs_file.empty())
        throw ConfigError("eval-rationales needs --outputs (or --dump-prompts)");
    std::vector<std::string> outputs;
    {
        std::istringstream in(read_file(opts.outputs_file));
        std::string line;
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            try {
                const json j = json::parse(line);
                if (j.is_object() && j.contains("rationale"))
                    outputs.push_back(j["rationale"].get<std::string>());
                else if (j.is_object() && j.contains("text"))
                    outputs.push_back(j["text"].get<std::string>());
                else
                    outputs.push_back(line);
            } catch (const std::exception&) {
                outputs.push_back(line);
            }
        }
    }

    std::vector<RationaleGroundTruth> gt;
    for (size_t i : picked)
        gt.push_back(rationale_gt_for(corpus.samples[i],
                                      *corpus.scene_graph(corpus.samples[i].video_id)));
    const MetricReport report = eval_rationales(gt, outputs, corpus.coordinate_space);

    std::cout << report.render_table();
    if (!opts.out_dir.empty()) {
        std::filesystem::create_directories(opts.out_dir);
        json rj = report.to_json();
        rj["seed"] = opts.seed;
        rj["subset"] = picked.size();
        write_file_atomic(std::filesystem::path(opts.out_dir) / "eval_rationales.json",
                          rj.dump(2) + "\n");
        write_run_manifest(opts, "eval-rationales", {"eval_rationales.json"});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verified chain-of-thought data pipeline for VideoQA"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    CliOptions opts;

    auto add_common = [&](CLI::App* cmd, bool needs_corpus) {
        cmd->add_option("--config", opts.config_path, "JSON config file");
        cmd->add_option("--seed", opts.seed, "random seed, recorded in manifests");
        cmd->add_option("--workers", opts.workers, "worker pool size");
        if (needs_corpus)
            cmd->add_option("--corpus", opts.corpus_dir, "corpus directory")->required();
    };

    CLI::App* synth = app.add_subcommand("synth-corpus", "generate a synthetic corpus");
    add_common(synth, false);
    synth->add_option("--out", opts.out_dir, "output directory")->required();
    synth->add_option("--videos", opts.videos, "number of videos");
    synth->add_option("--qa-per-video", opts.qa_per_video, "QA pairs per video");

    CLI::App* generate =
        app.add_subcommand("generate", "decompose, execute, verify, and convert");
    add_common(generate, true);
    generate->add_option("--out", opts.out_dir, "output directory")->required();
    generate->add_option("--max-failure-rate", opts.max_failure_rate,
                         "exit 2 when the per-sample failure rate exceeds this");
    generate->add_flag("--no-coherence-filter", opts.no_coherence_filter,
                       "skip the coherence judging stage");
    generate->add_flag("--strip-latency", opts.strip_latency,
                       "omit latency fields from traces (byte-stable replays)");

    CLI::App* emit_cmd = app.add_subcommand("emit", "materialize training data");
    add_common(emit_cmd, true);
    emit_cmd->add_option("--records", opts.records_dir, "generate output directory")
        ->required();
    emit_cmd->add_option("--out", opts.out_dir, "output directory")->required();
    emit_cmd->add_option("--lambda", opts.lambda, "rationale loss weight");
    emit_cmd->add_option("--shards", opts.shards, "number of train shards");

    CLI::App* eval_agents =
        app.add_subcommand("eval-agents", "score candidate backends per sub-task");
    add_common(eval_agents, true);
    eval_agents->add_option("--out", opts.out_dir, "output directory");
    eval_agents
        ->add_option("--sub-task", opts.sub_task,
                     "detect|ground|recognize|qa|decompose")
        ->required();
    eval_agents->add_option("--subset", opts.subset, "evaluate a seeded sample subset");
    eval_agents->add_option("--mode", opts.mode, "single_step|end_to_end");

    CLI::App* eval_rationales =
        app.add_subcommand("eval-rationales", "grade generated rationales");
    add_common(eval_rationales, true);
    eval_rationales->add_option("--out", opts.out_dir, "output directory");
    eval_rationales->add_option("--outputs", opts.outputs_file,
                                "JSONL file of generated rationales, aligned with the "
                                "sampled subset");
    eval_rationales->add_option("--subset", opts.subset, "seeded subset size");
    eval_rationales->add_flag("--dump-prompts", opts.dump_prompts,
                              "write the sampled prompts instead of grading");

    CLI::App* stats = app.add_subcommand("stats", "render a labels/CoTs/yield table");
    stats->add_option("--in", opts.in_path, "yield_stats.json or manifest.json")
        ->required();
    stats->add_option("--out", opts.out_dir, "optional output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        load_config(opts);
        if (synth->parsed()) return cmd_synth_corpus(opts);
        if (generate->parsed()) return cmd_generate(opts);
        if (emit_cmd->parsed()) return cmd_emit(opts);
        if (eval_agents->parsed()) return cmd_eval_agents(opts);
        if (eval_rationales->parsed()) return cmd_eval_rationales(opts);
        if (stats->parsed()) return cmd_stats(opts);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
