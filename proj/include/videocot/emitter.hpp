#pragma once

#include <filesystem>

#include "videocot/cot.hpp"
#include "videocot/corpus.hpp"

namespace videocot {

struct LossSpec {
    double lambda = 1.0;  // rationale term weight; answers are always 1.0
    /// QA pairs without a verified CoT emit only the answer sample, so the
    /// rationale term contributes nothing for them. Fixed behavior, recorded
    /// here for the manifest.
    static constexpr bool rationale_mask_when_absent = true;
};

enum class TargetKind { answer, rationale };

std::string to_string(TargetKind k);

struct EmittedSample {
    std::string sample_id;
    std::string video_id;
    std::string question;
    std::string suffix_prompt;
    std::string target;
    TargetKind target_kind = TargetKind::answer;
    double loss_weight = 1.0;
    std::string source_dataset;
    std::vector<std::string> options;  // empty for open-ended

    /// Conversation-form JSONL line (schema in docs/dataset.md).
    json to_json() const;
};

struct EmitManifest {
    long long qa_pairs = 0;
    long long answer_samples = 0;
    long long rationale_samples = 0;
    double lambda = 1.0;
    std::map<std::string, std::string> file_hashes;  // file -> fnv1a64
    std::map<std::string, std::pair<long long, long long>> per_dataset;  // labels, cots

    json to_json() const;
};

/// Builds the instruction-tuning records: exactly one answer-target sample per
/// QA pair, plus one rationale-target sample per QA pair whose CoT passed both
/// verification stages. Deterministic: ordered by sample_id, answers before
/// rationales. Throws EmissionError on a CoT record without a QA pair.
std::vector<EmittedSample> build_samples(const std::vector<QASample>& qa,
                                         const std::vector<CoTRecord>& records,
                                         const LossSpec& spec);

/// Writes train.jsonl (or train-xxxxx-of-yyyyy.jsonl shards keyed by
/// sample-id hash) plus manifest.json into `dir`.
EmitManifest emit(const std::vector<QASample>& qa, const std::vector<CoTRecord>& records,
                  const LossSpec& spec, const std::filesystem::path& dir, int shards = 1);

/// Table-3-style summary (Dataset | # Labels | # CoTs | Yield) from an emitted
/// dataset's manifest.
YieldStats stats_from_manifest(const json& manifest);

}  // namespace videocot
