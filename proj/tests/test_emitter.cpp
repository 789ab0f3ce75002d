#include <doctest.h>

#include "support.hpp"
#include "videocot/emitter.hpp"
#include "videocot/prompts.hpp"
#include "videocot/synth.hpp"
#include "videocot/util.hpp"

using namespace videocot;

TEST_SUITE_BEGIN("emitter");

namespace {

std::vector<QASample> small_qa() {
    std::vector<QASample> qa;
    QASample mc;
    mc.sample_id = "a-mc";
    mc.video_id = "v1";
    mc.question = "Which one?";
    mc.qtype = QType::multiple_choice;
    mc.options = {"red", "green"};
    mc.gold_answer = "B";
    mc.source_dataset = "STAR";
    qa.push_back(mc);

    QASample oe;
    oe.sample_id = "b-oe";
    oe.video_id = "v2";
    oe.question = "What is it?";
    oe.qtype = QType::open_ended;
    oe.gold_answer = "a kite";
    oe.source_dataset = "AGQA";
    qa.push_back(oe);
    return qa;
}

CoTRecord verified_record(const std::string& sample_id) {
    CoTRecord r;
    r.sample_id = sample_id;
    r.trace_ref = "traces.jsonl#" + sample_id;
    r.cot_text = "Step 1: ground(...) → frames 3–9 of 32.";
    r.answer_verified = true;
    r.coherence_verified = true;
    r.verdict_provenance = VerdictProvenance::llm_judge;
    return r;
}

}  // namespace

TEST_CASE("one answer sample per QA pair plus one rationale per verified CoT") {
    const auto qa = small_qa();
    const std::vector<CoTRecord> records = {verified_record("a-mc")};
    const auto samples = build_samples(qa, records, {});
    REQUIRE(samples.size() == 3);  // 2 answers + 1 rationale

    CHECK(samples[0].sample_id == "a-mc");
    CHECK(samples[0].target_kind == TargetKind::answer);
    CHECK(samples[0].suffix_prompt == prompts::kMcAnswerSuffix);
    CHECK(samples[0].target == "B");
    CHECK(samples[0].loss_weight == 1.0);

    CHECK(samples[1].sample_id == "a-mc");
    CHECK(samples[1].target_kind == TargetKind::rationale);
    CHECK(samples[1].suffix_prompt == prompts::kRationaleSuffix);
    CHECK(samples[1].loss_weight == 1.0);  // lambda defaults to 1
    // the rationale restates the answer at the end
    CHECK(samples[1].target.find("So the answer is (B) green.") != std::string::npos);

    CHECK(samples[2].sample_id == "b-oe");
    CHECK(samples[2].suffix_prompt == prompts::kOeAnswerSuffix);
    CHECK(samples[2].target == "a kite");
}

TEST_CASE("lambda flows into rationale loss weights only") {
    const auto qa = small_qa();
    const std::vector<CoTRecord> records = {verified_record("b-oe")};
    LossSpec spec;
    spec.lambda = 0.5;
    const auto samples = build_samples(qa, records, spec);
    REQUIRE(samples.size() == 3);
    for (const auto& s : samples) {
        if (s.target_kind == TargetKind::rationale)
            CHECK(s.loss_weight == 0.5);
        else
            CHECK(s.loss_weight == 1.0);
    }
}

TEST_CASE("unverified records do not emit rationale samples") {
    const auto qa = small_qa();
    CoTRecord unverified = verified_record("a-mc");
    unverified.coherence_verified = false;
    const auto samples = build_samples(qa, {unverified}, {});
    CHECK(samples.size() == 2);  // answers only
}

TEST_CASE("a dangling CoT record is an emission error naming the record") {
    const auto qa = small_qa();
    try {
        build_samples(qa, {verified_record("ghost")}, {});
        FAIL("expected EmissionError");
    } catch (const EmissionError& e) {
        CHECK(std::string(e.what()).find("ghost") != std::string::npos);
    }
}

TEST_CASE("emit writes deterministic train.jsonl and a manifest with hashes") {
    testsupport::TempDir dir_a("emit-a");
    testsupport::TempDir dir_b("emit-b");
    const auto qa = small_qa();
    const std::vector<CoTRecord> records = {verified_record("a-mc")};

    const EmitManifest ma = emit(qa, records, {}, dir_a.path());
    const EmitManifest mb = emit(qa, records, {}, dir_b.path());
    CHECK(ma.qa_pairs == 2);
    CHECK(ma.answer_samples == 2);
    CHECK(ma.rationale_samples == 1);
    CHECK(read_file(dir_a.path() / "train.jsonl") == read_file(dir_b.path() / "train.jsonl"));
    CHECK(ma.file_hashes.at("train.jsonl") == mb.file_hashes.at("train.jsonl"));

    // the dataset line is conversation-shaped with the video placeholder
    const std::string line = read_file(dir_a.path() / "train.jsonl");
    const json first = json::parse(line.substr(0, line.find('\n')));
    REQUIRE(first.at("messages").size() == 3);
    CHECK(first["messages"][1]["content"].get<std::string>().rfind("<video>", 0) == 0);
    CHECK(first["messages"][1]["content"].get<std::string>().find("(A) red") !=
          std::string::npos);
    CHECK(json::parse(read_file(dir_a.path() / "manifest.json")).at("lambda") == 1.0);
}

TEST_CASE("sharded emission partitions by sample id and covers every sample") {
    testsupport::TempDir dir("emit-shards");
    const auto qa = small_qa();
    const EmitManifest m = emit(qa, {}, {}, dir.path(), 3);
    CHECK(m.file_hashes.size() == 3);
    size_t total_lines = 0;
    for (const auto& [name, hash] : m.file_hashes) {
        const std::string body = read_file(dir.path() / name);
        for (char c : body)
            if (c == '\n') ++total_lines;
    }
    CHECK(total_lines == 2);
}

TEST_CASE("sample-count identity holds on pipeline output") {
    SynthConfig cfg;
    cfg.videos = 6;
    cfg.qa_per_video = 3;
    cfg.seed = 33;
    const Corpus corpus = generate_synthetic_corpus(cfg);
    std::vector<CoTRecord> records;
    // verify a third of the samples
    for (size_t i = 0; i < corpus.samples.size(); i += 3)
        records.push_back(verified_record(corpus.samples[i].sample_id));
    const auto samples = build_samples(corpus.samples, records, {});
    CHECK(samples.size() == corpus.samples.size() + records.size());

    // suffix correctness is checkable by exhaustive scan
    for (const auto& s : samples) {
        if (s.target_kind == TargetKind::rationale) {
            CHECK(s.suffix_prompt == prompts::kRationaleSuffix);
        } else if (s.options.empty()) {
            CHECK(s.suffix_prompt == prompts::kOeAnswerSuffix);
        } else {
            CHECK(s.suffix_prompt == prompts::kMcAnswerSuffix);
        }
    }
}

TEST_CASE("stats reproduces the published counts fixture") {
    YieldStats stats;
    stats.per_dataset["AGQA"] = {25000, 25000, 5400, 5400};
    stats.per_dataset["ANetQA"] = {25000, 25000, 3600, 3600};
    stats.per_dataset["STAR"] = {45700, 45700, 11200, 11200};
    stats.per_dataset["NExT-QA"] = {34100, 34100, 12100, 12100};
    stats.per_dataset["CLEVRER"] = {21000, 21000, 0, 0};
    stats.per_dataset["EgoQA"] = {7800, 7800, 0, 0};

    const auto t = stats.totals();
    CHECK(t.labels == 158600);
    CHECK(t.coherence_passed == 32300);

    const double star_yield = 100.0 * 11200 / 45700;
    CHECK(star_yield == doctest::Approx(24.5).epsilon(0.004));
    const double total_yield = 100.0 * 32300 / 158600;
    CHECK(total_yield == doctest::Approx(20.4).epsilon(0.004));

    const std::string table = stats.render_table();
    CHECK(table.find("STAR") != std::string::npos);
    CHECK(table.find("45700") != std::string::npos);
    CHECK(table.find("11200") != std::string::npos);
    CHECK(table.find("24.5") != std::string::npos);
    CHECK(table.find("20.4") != std::string::npos);
    CHECK(table.find("Total") != std::string::npos);
}

TEST_CASE("stats_from_manifest rebuilds the labels/cots table") {
    json manifest{{"per_dataset",
                   json{{"STAR", json{{"labels", 45700}, {"cots", 11200}}},
                        {"AGQA", json{{"labels", 25000}, {"cots", 5400}}}}}};
    const YieldStats stats = stats_from_manifest(manifest);
    CHECK(stats.per_dataset.at("STAR").labels == 45700);
    CHECK(stats.per_dataset.at("STAR").coherence_passed == 11200);
    CHECK(stats.funnel_monotone());
    CHECK_THROWS_AS(stats_from_manifest(json::object()), DomainError);
}

TEST_CASE("empty dataset gives an empty table with zero totals") {
    YieldStats stats;
    CHECK(stats.totals().labels == 0);
    const std::string table = stats.render_table();
    CHECK(table.find("Total") != std::string::npos);
}

TEST_SUITE_END();
