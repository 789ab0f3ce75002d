#include "videocot/emitter.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "videocot/prompts.hpp"
#include "videocot/util.hpp"

namespace videocot {

std::string to_string(TargetKind k) {
    return k == TargetKind::answer ? "answer" : "rationale";
}

json EmittedSample::to_json() const {
    std::string user = "<video>\nQuestion: " + question + "\n";
    if (!options.empty()) user += "Options:\n" + prompts::render_options(options);
    user += suffix_prompt;
    json messages = json::array();
    messages.push_back(json{{"role", "system"},
                            {"content", "You are a helpful assistant that answers questions "
                                        "about videos."}});
    messages.push_back(json{{"role", "user"}, {"content", std::move(user)}});
    messages.push_back(json{{"role", "assistant"}, {"content", target}});
    return json{{"sample_id", sample_id},
                {"video_id", video_id},
                {"source_dataset", source_dataset},
                {"target_kind", to_string(target_kind)},
                {"loss_weight", loss_weight},
                {"messages", std::move(messages)}};
}

json EmitManifest::to_json() const {
    json files = json::object();
    for (const auto& [name, hash] : file_hashes) files[name] = hash;
    json per = json::object();
    for (const auto& [name, counts] : per_dataset)
        per[name] = json{{"labels", counts.first}, {"cots", counts.second}};
    return json{{"qa_pairs", qa_pairs},
                {"answer_samples", answer_samples},
                {"rationale_samples", rationale_samples},
                {"total_samples", answer_samples + rationale_samples},
                {"lambda", lambda},
                {"rationale_mask_when_absent", LossSpec::rationale_mask_when_absent},
                {"per_dataset", std::move(per)},
                {"files", std::move(files)},
                {"tool", "videocot 0.1.0"}};
}

namespace {

std::string answer_target(const QASample& qa) {
    if (qa.qtype != QType::multiple_choice) return qa.gold_answer;
    // MC answers train on the bare option letter
    auto idx = qa.gold_option_index();
    return idx ? QASample::option_letter(*idx) : trim(qa.gold_answer);
}

std::string rationale_target(const QASample& qa, const CoTRecord& record) {
    std::string answer = answer_target(qa);
    if (qa.qtype == QType::multiple_choice) {
        if (auto idx = qa.gold_option_index())
            answer = "(" + QASample::option_letter(*idx) + ") " + qa.options[*idx];
    }
    std::string text = record.cot_text;
    while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
    // rationales close by restating the answer
    return text + (text.empty() ? "" : " ") + "So the answer is " + answer + ".";
}

}  // namespace

std::vector<EmittedSample> build_samples(const std::vector<QASample>& qa,
                                         const std::vector<CoTRecord>& records,
                                         const LossSpec& spec) {
    if (spec.lambda < 0.0) throw DomainError("lambda must be >= 0");
    std::map<std::string, const QASample*> by_id;
    for (const auto& s : qa) by_id[s.sample_id] = &s;

    std::map<std::string, const CoTRecord*> verified;
    for (const auto& r : records) {
        auto it = by_id.find(r.sample_id);
        if (it == by_id.end())
            throw EmissionError("CoT record '" + r.sample_id +
                                "' has no matching QA sample");
        if (r.coherence_verified) {
            if (!r.answer_verified || r.cot_text.empty())
                throw EmissionError("CoT record '" + r.sample_id +
                                    "' is coherence-verified but not answer-verified");
            verified[r.sample_id] = &r;
        }
    }

    std::vector<EmittedSample> out;
    out.reserve(qa.size() + verified.size());
    for (const auto& [sid, sample] : by_id) {
        EmittedSample ans;
        ans.sample_id = sample->sample_id;
        ans.video_id = sample->video_id;
        ans.question = sample->question;
        ans.options = sample->options;
        ans.source_dataset = sample->source_dataset;
        ans.target_kind = TargetKind::answer;
        ans.suffix_prompt = sample->qtype == QType::multiple_choice
                                ? prompts::kMcAnswerSuffix
                                : prompts::kOeAnswerSuffix;
        ans.target = answer_target(*sample);
        ans.loss_weight = 1.0;
        out.push_back(ans);

        auto it = verified.find(sid);
        if (it == verified.end()) continue;  // no CoT: the rationale term is masked
        EmittedSample rat = ans;
        rat.target_kind = TargetKind::rationale;
        rat.suffix_prompt = prompts::kRationaleSuffix;
        rat.target = rationale_target(*sample, *it->second);
        rat.loss_weight = spec.lambda;
        out.push_back(std::move(rat));
    }
    return out;  // by_id is ordered: output sorted by sample_id, answer first
}

EmitManifest emit(const std::vector<QASample>& qa, const std::vector<CoTRecord>& records,
                  const LossSpec& spec, const std::filesystem::path& dir, int shards) {
    if (shards < 1) throw DomainError("shard count must be >= 1");
    const auto samples = build_samples(qa, records, spec);
    std::filesystem::create_directories(dir);

    EmitManifest manifest;
    manifest.lambda = spec.lambda;
    manifest.qa_pairs = static_cast<long long>(qa.size());
    for (const auto& s : qa) manifest.per_dataset[s.source_dataset].first += 1;
    for (const auto& s : samples) {
        if (s.target_kind == TargetKind::answer) {
            manifest.answer_samples += 1;
        } else {
            manifest.rationale_samples += 1;
            manifest.per_dataset[s.source_dataset].second += 1;
        }
    }

    std::vector<std::string> shard_names;
    std::vector<std::ostringstream> shard_bodies(static_cast<size_t>(shards));
    if (shards == 1) {
        shard_names.push_back("train.jsonl");
    } else {
        char name[64];
        for (int k = 0; k < shards; ++k) {
            std::snprintf(name, sizeof(name), "train-%05d-of-%05d.jsonl", k, shards);
            shard_names.push_back(name);
        }
    }
    for (const auto& s : samples) {
        const size_t shard =
            shards == 1 ? 0 : static_cast<size_t>(fnv1a64(s.sample_id) % shards);
        shard_bodies[shard] << s.to_json().dump() << "\n";
    }
    for (int k = 0; k < shards; ++k) {
        const std::string body = shard_bodies[static_cast<size_t>(k)].str();
        write_file_atomic(dir / shard_names[static_cast<size_t>(k)], body);
        manifest.file_hashes[shard_names[static_cast<size_t>(k)]] = fnv1a64_hex(body);
    }
    write_file_atomic(dir / "manifest.json", manifest.to_json().dump(2) + "\n");
    return manifest;
}

YieldStats stats_from_manifest(const json& manifest) {
    YieldStats stats;
    if (!manifest.contains("per_dataset"))
        throw DomainError("manifest has no per_dataset section");
    for (const auto& [name, counts] : manifest.at("per_dataset").items()) {
        YieldStats::Row row;
        row.labels = counts.at("labels").get<long long>();
        row.coherence_passed = counts.at("cots").get<long long>();
        row.executed_ok = row.labels;
        row.answer_passed = row.coherence_passed;
        stats.per_dataset[name] = row;
    }
    return stats;
}

}  // namespace videocot
