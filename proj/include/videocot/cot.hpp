#pragma once

#include <filesystem>
#include <optional>

#include "videocot/executor.hpp"
#include "videocot/llm.hpp"

namespace videocot {

enum class VerdictProvenance { exact_match, llm_judge };

std::string to_string(VerdictProvenance p);

struct CoTRecord {
    std::string sample_id;
    std::string trace_ref;    // "traces.jsonl#<sample_id>"
    std::string cot_text;     // non-empty once conversion succeeded
    bool answer_verified = false;
    bool coherence_verified = false;  // may be true only if answer_verified
    VerdictProvenance verdict_provenance = VerdictProvenance::exact_match;
    std::string judge_raw;    // raw judge completions for audit
};

json to_json(const CoTRecord& r);
CoTRecord cot_record_from_json(const json& j);

struct YieldStats {
    struct Row {
        long long labels = 0;
        long long executed_ok = 0;
        long long answer_passed = 0;
        long long coherence_passed = 0;
    };
    std::map<std::string, Row> per_dataset;

    Row totals() const;
    void merge(const YieldStats& other);
    /// labels >= executed_ok >= answer_passed >= coherence_passed everywhere.
    bool funnel_monotone() const;

    json to_json() const;
    static YieldStats from_json(const json& j);
    /// Aligned-column table: Dataset | # Labels | # CoTs | Yield (%).
    std::string render_table() const;
};

// ---------------------------------------------------------------------------
// Single-sample operations

/// Normalized option letter of a free-form MC answer: accepts "B", "(B)",
/// "B.", "(B) <option text>" and the bare option text itself.
std::optional<std::string> mc_answer_letter(const std::string& text,
                                            const std::vector<std::string>& options);

struct VerifyResult {
    bool ok = false;
    VerdictProvenance provenance = VerdictProvenance::exact_match;
    std::string judge_raw;
};

/// MC: normalization + exact letter match, no model involved. OE: binary LLM
/// judgment at temperature 0. Throws VerificationError when a judge verdict
/// cannot be parsed.
VerifyResult verify_answer(const std::string& final_answer, const QASample& sample,
                           CompletionClient* llm);

/// "Yes"/"No" parsed case-insensitively from the first verdict token.
bool parse_yes_no(const std::string& verdict);

/// Binary coherence/usefulness judgment of a finished CoT.
bool verify_coherence(const std::string& cot, const QASample& sample, CompletionClient& llm,
                      std::string* judge_raw = nullptr);

/// Converts a completed trace into a natural-language rationale via the
/// conversion prompt. Throws DomainError on a non-completed trace or an empty
/// completion.
std::string trace_to_nl(const ExecutionTrace& trace, const QASample& sample,
                        CompletionClient& llm);

// ---------------------------------------------------------------------------
// Batch pipeline

struct PipelineConfig {
    Budget budget;
    int workers = 1;
    /// When set, per-sample results are checkpointed here and reused on rerun.
    std::optional<std::filesystem::path> checkpoint_dir;
    bool coherence_stage_enabled = true;
    std::string llm_model = "default";
};

struct SampleFailure {
    std::string sample_id;
    std::string stage;  // decompose | extract | parse | validate | execute | verify_answer | convert | verify_coherence
    std::string cause;
};

struct PipelineResult {
    /// One trace per QA sample, corpus order.
    std::vector<ExecutionTrace> traces;
    /// At most one record per sample that reached a completed execution.
    std::vector<CoTRecord> records;
    YieldStats stats;
    std::vector<SampleFailure> failures;
};

/// decompose -> extract/parse/validate -> execute -> verify answer ->
/// convert -> verify coherence, per sample, across a bounded worker pool.
/// Per-sample failures never abort the run.
PipelineResult run_pipeline(const Corpus& corpus, const AgentRegistry& agents,
                            CompletionClient& llm, const PipelineConfig& config);

/// Serialize pipeline outputs (traces.jsonl, cot_records.jsonl,
/// yield_stats.json + rendered table) into a directory.
void write_pipeline_outputs(const PipelineResult& result, const std::filesystem::path& dir,
                            bool include_latency = true);

}  // namespace videocot
