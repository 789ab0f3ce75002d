#include "videocot/cot.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <sstream>
#include <thread>

#include "videocot/prompts.hpp"
#include "videocot/util.hpp"

namespace videocot {

std::string to_string(VerdictProvenance p) {
    return p == VerdictProvenance::exact_match ? "exact_match" : "llm_judge";
}

json to_json(const CoTRecord& r) {
    return json{{"sample_id", r.sample_id},
                {"trace_ref", r.trace_ref},
                {"cot_text", r.cot_text},
                {"answer_verified", r.answer_verified},
                {"coherence_verified", r.coherence_verified},
                {"verdict_provenance", to_string(r.verdict_provenance)},
                {"judge_raw", r.judge_raw}};
}

CoTRecord cot_record_from_json(const json& j) {
    CoTRecord r;
    r.sample_id = j.at("sample_id").get<std::string>();
    r.trace_ref = j.at("trace_ref").get<std::string>();
    r.cot_text = j.at("cot_text").get<std::string>();
    r.answer_verified = j.at("answer_verified").get<bool>();
    r.coherence_verified = j.at("coherence_verified").get<bool>();
    r.verdict_provenance = j.at("verdict_provenance").get<std::string>() == "llm_judge"
                               ? VerdictProvenance::llm_judge
                               : VerdictProvenance::exact_match;
    r.judge_raw = j.value("judge_raw", "");
    return r;
}

YieldStats::Row YieldStats::totals() const {
    Row t;
    for (const auto& [name, row] : per_dataset) {
        t.labels += row.labels;
        t.executed_ok += row.executed_ok;
        t.answer_passed += row.answer_passed;
        t.coherence_passed += row.coherence_passed;
    }
    return t;
}

void YieldStats::merge(const YieldStats& other) {
    for (const auto& [name, row] : other.per_dataset) {
        Row& mine = per_dataset[name];
        mine.labels += row.labels;
        mine.executed_ok += row.executed_ok;
        mine.answer_passed += row.answer_passed;
        mine.coherence_passed += row.coherence_passed;
    }
}

bool YieldStats::funnel_monotone() const {
    for (const auto& [name, r] : per_dataset) {
        if (!(r.labels >= r.executed_ok && r.executed_ok >= r.answer_passed &&
              r.answer_passed >= r.coherence_passed))
            return false;
    }
    return true;
}

json YieldStats::to_json() const {
    json per = json::object();
    for (const auto& [name, r] : per_dataset)
        per[name] = json{{"labels", r.labels},
                         {"executed_ok", r.executed_ok},
                         {"answer_passed", r.answer_passed},
                         {"coherence_passed", r.coherence_passed}};
    const Row t = totals();
    return json{{"per_dataset", std::move(per)},
                {"totals", json{{"labels", t.labels},
                                {"executed_ok", t.executed_ok},
                                {"answer_passed", t.answer_passed},
                                {"coherence_passed", t.coherence_passed}}}};
}

YieldStats YieldStats::from_json(const json& j) {
    YieldStats s;
    for (const auto& [name, rj] : j.at("per_dataset").items()) {
        Row r;
        r.labels = rj.at("labels").get<long long>();
        r.executed_ok = rj.value("executed_ok", r.labels);
        r.answer_passed = rj.value("answer_passed", rj.value("coherence_passed", 0LL));
        r.coherence_passed = rj.at("coherence_passed").get<long long>();
        s.per_dataset[name] = r;
    }
    return s;
}

std::string YieldStats::render_table() const {
    auto yield_text = [](const Row& r) -> std::string {
        if (r.labels == 0 || r.coherence_passed == 0) return "-";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.1f",
                      100.0 * static_cast<double>(r.coherence_passed) /
                          static_cast<double>(r.labels));
        return buf;
    };
    auto cots_text = [](const Row& r) -> std::string {
        return r.coherence_passed == 0 ? "-" : std::to_string(r.coherence_passed);
    };

    std::vector<std::array<std::string, 4>> rows;
    rows.push_back({"Dataset", "# Labels", "# CoTs", "Yield (%)"});
    for (const auto& [name, r] : per_dataset)
        rows.push_back({name, std::to_string(r.labels), cots_text(r), yield_text(r)});
    const Row t = totals();
    rows.push_back({"Total", std::to_string(t.labels), cots_text(t), yield_text(t)});

    std::array<size_t, 4> width{};
    for (const auto& row : rows)
        for (size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], row[c].size());

    std::ostringstream out;
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        out << row[0] << std::string(width[0] - row[0].size(), ' ');
        for (size_t c = 1; c < 4; ++c)
            out << "  " << std::string(width[c] - row[c].size(), ' ') << row[c];
        out << "\n";
        if (i == 0 || i + 2 == rows.size()) {
            out << std::string(width[0] + width[1] + width[2] + width[3] + 6, '-') << "\n";
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Answer verification

std::optional<std::string> mc_answer_letter(const std::string& text,
                                            const std::vector<std::string>& options) {
    const std::string t = trim(text);
    if (t.empty()) return std::nullopt;

    auto valid = [&](char letter) -> std::optional<std::string> {
        const char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(letter)));
        const size_t idx = static_cast<size_t>(upper - 'A');
        if (idx >= options.size()) return std::nullopt;
        return std::string(1, upper);
    };

    // "B" / "(B)" / "B." / "(B)." / "b"
    {
        size_t i = 0;
        bool paren = false;
        if (t[i] == '(') { paren = true; ++i; }
        if (i < t.size() && std::isalpha(static_cast<unsigned char>(t[i]))) {
            const char letter = t[i++];
            if (paren && i < t.size() && t[i] == ')') ++i;
            else if (paren) i = t.size() + 1;  // unclosed paren: no match
            while (i < t.size() && (t[i] == '.' || t[i] == ':')) ++i;
            if (i == t.size())
                if (auto ok = valid(letter)) return ok;
        }
    }
    // "(B) jumping" / "B. jumping" / "B: jumping" with the named option's text
    {
        size_t i = 0;
        bool paren = false;
        if (t[i] == '(') { paren = true; ++i; }
        if (i < t.size() && std::isalpha(static_cast<unsigned char>(t[i]))) {
            const char letter = t[i++];
            bool separated = false;
            if (paren && i < t.size() && t[i] == ')') { ++i; separated = true; }
            if (!paren && i < t.size() && (t[i] == '.' || t[i] == ':' || t[i] == ')')) {
                ++i;
                separated = true;
            }
            if (separated && i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) {
                const std::string rest = normalize_text(t.substr(i));
                if (auto ok = valid(letter)) {
                    const size_t idx = static_cast<size_t>((*ok)[0] - 'A');
                    if (!rest.empty() && rest == normalize_text(options[idx])) return ok;
                }
            }
        }
    }
    // bare option text
    const std::string norm = normalize_text(t);
    if (!norm.empty()) {
        for (size_t i = 0; i < options.size(); ++i)
            if (normalize_text(options[i]) == norm) return QASample::option_letter(i);
    }
    return std::nullopt;
}

bool parse_yes_no(const std::string& verdict) {
    // first alphabetic token decides, case-insensitively
    size_t i = 0;
    while (i < verdict.size() && !std::isalpha(static_cast<unsigned char>(verdict[i]))) ++i;
    std::string token;
    while (i < verdict.size() && std::isalpha(static_cast<unsigned char>(verdict[i])))
        token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(verdict[i++]))));
    if (token == "yes") return true;
    if (token == "no") return false;
    throw VerificationError("judge verdict is neither Yes nor No: '" + trim(verdict) + "'");
}

VerifyResult verify_answer(const std::string& final_answer, const QASample& sample,
                           CompletionClient* llm) {
    VerifyResult result;
    if (sample.qtype == QType::multiple_choice) {
        result.provenance = VerdictProvenance::exact_match;
        const auto letter = mc_answer_letter(final_answer, sample.options);
        const std::string gold = trim(sample.gold_answer);
        result.ok = letter && !gold.empty() &&
                    (*letter)[0] == std::toupper(static_cast<unsigned char>(gold[0]));
        return result;
    }
    if (llm == nullptr) {
        // no judge available: forgiving exact match
        result.provenance = VerdictProvenance::exact_match;
        result.ok = normalize_text(final_answer) == normalize_text(sample.gold_answer);
        return result;
    }
    LlmRequest req;
    req.prompt = prompts::oe_answer_judge(sample.question, sample.gold_answer, final_answer);
    req.temperature = 0.0;
    req.max_tokens = 8;
    const LlmResponse resp = llm->complete(req);
    result.provenance = VerdictProvenance::llm_judge;
    result.judge_raw = resp.text;
    result.ok = parse_yes_no(resp.text);
    return result;
}

bool verify_coherence(const std::string& cot, const QASample& sample, CompletionClient& llm,
                      std::string* judge_raw) {
    if (trim(cot).empty()) throw DomainError("verify_coherence on an empty CoT");
    LlmRequest req;
    req.prompt = prompts::cot_filter(sample.question, sample.options, cot);
    req.temperature = 0.0;
    req.max_tokens = 8;
    const LlmResponse resp = llm.complete(req);
    if (judge_raw) *judge_raw = resp.text;
    return parse_yes_no(resp.text);
}

std::string trace_to_nl(const ExecutionTrace& trace, const QASample& sample,
                        CompletionClient& llm) {
    if (!trace.completed())
        throw DomainError("trace_to_nl requires a completed trace (sample '" +
                          trace.sample_id + "')");
    LlmRequest req;
    req.prompt = prompts::cot_conversion(sample.question, sample.options,
                                         render_trace_steps(trace.steps));
    req.temperature = 0.0;
    req.max_tokens = 1024;
    const LlmResponse resp = llm.complete(req);
    if (trim(resp.text).empty())
        throw DomainError("conversion LLM returned an empty completion for sample '" +
                          trace.sample_id + "'");
    return resp.text;
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

struct SampleOutcome {
    bool executed_ok = false;
    bool answer_passed = false;
    bool coherence_passed = false;
    std::optional<ExecutionTrace> trace;
    std::optional<CoTRecord> record;
    std::optional<SampleFailure> failure;
};

std::string checkpoint_name(const std::string& sample_id) {
    std::string safe;
    for (char c : sample_id)
        safe.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
                               c == '.'
                           ? c
                           : '_');
    return safe + "-" + fnv1a64_hex(sample_id) + ".json";
}

json outcome_to_json(const std::string& sample_id, const SampleOutcome& o) {
    json j{{"sample_id", sample_id},
           {"executed_ok", o.executed_ok},
           {"answer_passed", o.answer_passed},
           {"coherence_passed", o.coherence_passed}};
    j["trace"] = o.trace ? trace_to_json(*o.trace) : json(nullptr);
    j["record"] = o.record ? to_json(*o.record) : json(nullptr);
    if (o.failure)
        j["failure"] = json{{"stage", o.failure->stage}, {"cause", o.failure->cause}};
    else
        j["failure"] = nullptr;
    return j;
}

SampleOutcome outcome_from_json(const json& j) {
    SampleOutcome o;
    o.executed_ok = j.at("executed_ok").get<bool>();
    o.answer_passed = j.at("answer_passed").get<bool>();
    o.coherence_passed = j.at("coherence_passed").get<bool>();
    if (!j.at("trace").is_null()) o.trace = trace_from_json(j["trace"]);
    if (!j.at("record").is_null()) o.record = cot_record_from_json(j["record"]);
    if (!j.at("failure").is_null())
        o.failure = SampleFailure{j.at("sample_id").get<std::string>(),
                                  j["failure"].at("stage").get<std::string>(),
                                  j["failure"].at("cause").get<std::string>()};
    return o;
}

class SampleProcessor {
public:
    SampleProcessor(const Corpus& corpus, const AgentRegistry& agents, CompletionClient& llm,
                    const PipelineConfig& config)
        : corpus_(corpus),
          agents_(agents),
          llm_(llm),
          config_(config),
          registry_(dsl::ApiRegistry::standard()),
          registry_docs_(registry_.docs_text()) {}

    SampleOutcome process(const QASample& sample) const {
        SampleOutcome out;
        auto fail = [&](const std::string& stage, const std::string& cause) {
            out.failure = SampleFailure{sample.sample_id, stage, cause};
            return out;
        };

        // 1. decompose
        dsl::SourceProgram source;
        try {
            auto* oracle = dynamic_cast<OracleDecomposer*>(agents_.decomposer.get());
            source = oracle ? oracle->decompose_sample(sample.sample_id)
                            : agents_.decomposer->decompose(sample.question, sample.options,
                                                            registry_docs_);
        } catch (const Error& e) {
            return fail("decompose", e.what());
        }

        // 2. extract
        if (source.code.empty()) {
            try {
                source.code = dsl::extract_code(source.raw_llm_output);
            } catch (const ExtractionError& e) {
                return fail("extract", e.what());
            }
        }

        // 3. parse + validate
        dsl::ValidatedProgram program;
        try {
            const dsl::Ast ast = dsl::parse_program(source.code);
            try {
                program = dsl::validate_program(ast, registry_);
            } catch (const ValidateError& e) {
                return fail("validate", e.what());
            }
        } catch (const ParseError& e) {
            return fail("parse", e.what());
        }

        // 4. execute (runtime problems land in the trace status, not here)
        ExecutionTrace trace =
            execute(program, corpus_.video(sample.video_id), sample, agents_, config_.budget);
        out.trace = trace;
        if (!trace.completed()) {
            return fail("execute",
                        to_string(trace.status.kind) +
                            (trace.status.message.empty() ? "" : ": " + trace.status.message));
        }
        out.executed_ok = true;

        CoTRecord record;
        record.sample_id = sample.sample_id;
        record.trace_ref = "traces.jsonl#" + sample.sample_id;

        // 5. verify the final answer
        try {
            const VerifyResult vr = verify_answer(*trace.final_answer, sample, &llm_);
            record.answer_verified = vr.ok;
            record.verdict_provenance = vr.provenance;
            if (!vr.judge_raw.empty()) record.judge_raw = "answer: " + vr.judge_raw;
        } catch (const Error& e) {
            out.record = record;  // answer_verified stays false
            return fail("verify_answer", e.what());
        }
        if (!record.answer_verified) {
            out.record = record;
            return out;
        }
        out.answer_passed = true;

        // 6. convert the trace into a rationale
        try {
            record.cot_text = trace_to_nl(trace, sample, llm_);
        } catch (const Error& e) {
            out.record = record;
            return fail("convert", e.what());
        }

        // 7. coherence filter
        if (config_.coherence_stage_enabled) {
            try {
                std::string judge_raw;
                record.coherence_verified =
                    verify_coherence(record.cot_text, sample, llm_, &judge_raw);
                if (!record.judge_raw.empty()) record.judge_raw += "\n";
                record.judge_raw += "coherence: " + judge_raw;
            } catch (const Error& e) {
                out.record = record;
                return fail("verify_coherence", e.what());
            }
        } else {
            // filtering disabled: every converted CoT flows through
            record.coherence_verified = !record.cot_text.empty();
        }
        out.coherence_passed = record.coherence_verified;
        out.record = record;
        return out;
    }

private:
    const Corpus& corpus_;
    const AgentRegistry& agents_;
    CompletionClient& llm_;
    const PipelineConfig& config_;
    dsl::ApiRegistry registry_;
    std::string registry_docs_;
};

}  // namespace

PipelineResult run_pipeline(const Corpus& corpus, const AgentRegistry& agents,
                            CompletionClient& llm, const PipelineConfig& config) {
    agents.require_complete();
    if (config.checkpoint_dir) std::filesystem::create_directories(*config.checkpoint_dir);

    const SampleProcessor processor(corpus, agents, llm, config);
    const size_t n = corpus.samples.size();
    std::vector<SampleOutcome> outcomes(n);

    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= n) break;
            const QASample& sample = corpus.samples[i];
            std::optional<std::filesystem::path> ckpt;
            if (config.checkpoint_dir)
                ckpt = *config.checkpoint_dir / checkpoint_name(sample.sample_id);
            if (ckpt && std::filesystem::exists(*ckpt)) {
                try {
                    outcomes[i] = outcome_from_json(json::parse(read_file(*ckpt)));
                    continue;
                } catch (const std::exception&) {
                    // unreadable checkpoint: recompute and overwrite
                }
            }
            SampleOutcome out;
            try {
                out = processor.process(sample);
            } catch (const std::exception& e) {
                out.failure = SampleFailure{sample.sample_id, "internal", e.what()};
            }
            if (ckpt) write_file_atomic(*ckpt, outcome_to_json(sample.sample_id, out).dump());
            outcomes[i] = std::move(out);
        }
    };

    const int workers = std::max(1, config.workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    PipelineResult result;
    for (size_t i = 0; i < n; ++i) {
        const QASample& sample = corpus.samples[i];
        SampleOutcome& out = outcomes[i];
        auto& row = result.stats.per_dataset[sample.source_dataset];
        row.labels += 1;
        row.executed_ok += out.executed_ok ? 1 : 0;
        row.answer_passed += out.answer_passed ? 1 : 0;
        row.coherence_passed += out.coherence_passed ? 1 : 0;
        if (out.trace) result.traces.push_back(std::move(*out.trace));
        if (out.record) result.records.push_back(std::move(*out.record));
        if (out.failure) result.failures.push_back(std::move(*out.failure));
    }
    return result;
}

void write_pipeline_outputs(const PipelineResult& result, const std::filesystem::path& dir,
                            bool include_latency) {
    std::filesystem::create_directories(dir);
    std::ostringstream traces;
    for (const auto& t : result.traces)
        traces << trace_to_json(t, include_latency).dump() << "\n";
    write_file_atomic(dir / "traces.jsonl", traces.str());

    std::ostringstream records;
    for (const auto& r : result.records) records << to_json(r).dump() << "\n";
    write_file_atomic(dir / "cot_records.jsonl", records.str());

    write_file_atomic(dir / "yield_stats.json", result.stats.to_json().dump(2) + "\n");
    write_file_atomic(dir / "yield_table.txt", result.stats.render_table());

    std::ostringstream failures;
    for (const auto& f : result.failures)
        failures << json{{"sample_id", f.sample_id}, {"stage", f.stage}, {"cause", f.cause}}
                        .dump()
                 << "\n";
    write_file_atomic(dir / "failures.jsonl", failures.str());
}

}  // namespace videocot
