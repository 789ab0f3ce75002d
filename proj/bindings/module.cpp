#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "videocot/cot.hpp"
#include "videocot/emitter.hpp"
#include "videocot/evalharness.hpp"
#include "videocot/prompts.hpp"
#include "videocot/synth.hpp"
#include "videocot/util.hpp"

namespace py = pybind11;
using namespace videocot;

namespace {

using Span = std::pair<int, int>;
using Box = std::tuple<double, double, double, double>;

TemporalSpan to_span(Span s) {
    if (s.first < 0 || s.second >= kNormFrameCount || s.first > s.second)
        throw DomainError("span must satisfy 0 <= start <= end <= 31");
    return TemporalSpan{NormFrame{s.first}, NormFrame{s.second}};
}

BoundingBox to_box(const Box& b) {
    BoundingBox box;
    box.x_min = std::get<0>(b);
    box.y_min = std::get<1>(b);
    box.x_max = std::get<2>(b);
    box.y_max = std::get<3>(b);
    return box;
}

std::shared_ptr<StubCompletionClient> pipeline_stub_llm() {
    return std::make_shared<StubCompletionClient>([](const LlmRequest& req) {
        const auto at = req.prompt.rfind(prompts::kTraceMarker);
        if (at != std::string::npos)
            return req.prompt.substr(at + std::string(prompts::kTraceMarker).size());
        return std::string("Yes");
    });
}

py::dict funnel_dict(const YieldStats& stats) {
    py::dict out;
    for (const auto& [name, row] : stats.per_dataset) {
        py::dict r;
        r["labels"] = row.labels;
        r["executed_ok"] = row.executed_ok;
        r["answer_passed"] = row.answer_passed;
        r["coherence_passed"] = row.coherence_passed;
        out[py::str(name)] = r;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "videocot core: frame grid, metric kernels, the restricted program "
              "language, rationale parsing, and offline pipeline runs";

    py::register_exception<ParseError>(m, "ProgramParseError", PyExc_ValueError);
    py::register_exception<ValidateError>(m, "ProgramValidateError", PyExc_ValueError);
    py::register_exception<ExtractionError>(m, "CodeExtractionError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.attr("NORM_FRAME_COUNT") = kNormFrameCount;
    m.attr("MC_ANSWER_SUFFIX") = prompts::kMcAnswerSuffix;
    m.attr("OE_ANSWER_SUFFIX") = prompts::kOeAnswerSuffix;
    m.attr("RATIONALE_SUFFIX") = prompts::kRationaleSuffix;

    m.def(
        "normalize_frame_index",
        [](long long f, long long total) { return normalize_frame_index(f, total).index; },
        py::arg("frame"), py::arg("total_frames"),
        "Map a raw frame index onto the 32-frame grid (round half-up).");

    m.def(
        "denormalize_span",
        [](Span span, long long total) { return denormalize_span(to_span(span), total); },
        py::arg("span"), py::arg("total_frames"),
        "Raw-frame interval whose normalization covers the span.");

    m.def(
        "box_iou",
        [](const Box& a, const Box& b) { return box_iou(to_box(a), to_box(b)); },
        py::arg("a"), py::arg("b"),
        "Intersection-over-union of two (x_min, y_min, x_max, y_max) boxes.");

    m.def(
        "temporal_iou",
        [](Span p, Span g) { return temporal_iou(to_span(p), to_span(g)); },
        py::arg("predicted"), py::arg("gold"),
        "Closed-interval IoU over normalized frame spans.");

    m.def(
        "keyframe_recall",
        [](Span w, const std::vector<int>& keys) {
            std::set<NormFrame> set;
            for (int k : keys) set.insert(NormFrame{k});
            return keyframe_recall(to_span(w), set);
        },
        py::arg("window"), py::arg("keys"),
        "Fraction of key frames covered by the window.");

    m.def("extract_code", &dsl::extract_code, py::arg("raw"),
          "Extract the program region from an LLM completion.");

    m.def(
        "canonical_program",
        [](const std::string& code) { return dsl::pretty_print(dsl::parse_program(code)); },
        py::arg("code"), "Parse and pretty-print a program into its canonical form.");

    m.def(
        "validate_program",
        [](const std::string& code) {
            const auto program = dsl::validate_program(dsl::parse_program(code),
                                                       dsl::ApiRegistry::standard());
            py::list out;
            for (const auto& binding : program.bindings) {
                py::dict b;
                b["api"] = binding.api;
                b["sub_task"] = to_string(binding.tag);
                b["line"] = binding.pos.line;
                b["col"] = binding.pos.col;
                out.append(b);
            }
            return out;
        },
        py::arg("code"),
        "Validate a program against the standard API registry; returns the call "
        "bindings in evaluation order.");

    m.def(
        "parse_rationale",
        [](const std::string& text) {
            const ParsedRationale parsed = parse_rationale(text);
            py::dict out;
            py::list intervals;
            for (const auto& s : parsed.intervals)
                intervals.append(py::make_tuple(s.start.index, s.end.index));
            py::list boxes;
            for (const auto& b : parsed.boxes)
                boxes.append(py::make_tuple(b.x_min, b.y_min, b.x_max, b.y_max));
            out["intervals"] = intervals;
            out["boxes"] = boxes;
            out["parse_ok"] = parsed.parse_ok;
            return out;
        },
        py::arg("text"), "Recover temporal windows and boxes from rationale text.");

    m.def(
        "render_span", [](Span s) { return render_span(to_span(s)); }, py::arg("span"),
        "Canonical text rendering of a frame span.");
    m.def(
        "render_box", [](const Box& b) { return render_box(to_box(b)); }, py::arg("box"),
        "Canonical text rendering of a bounding box.");

    m.def(
        "mc_answer_letter",
        [](const std::string& text, const std::vector<std::string>& options)
            -> std::optional<std::string> { return mc_answer_letter(text, options); },
        py::arg("text"), py::arg("options"),
        "Normalize a free-form multiple-choice answer to its option letter.");

    m.def("best_text_match", &best_text_match, py::arg("candidates"), py::arg("text"),
          "Highest token-F1 candidate, ties by list order.");
    m.def("token_f1", &token_f1, py::arg("a"), py::arg("b"),
          "Case-folded token-overlap F1.");

    m.def(
        "generate_synthetic_corpus",
        [](const std::filesystem::path& out_dir, int videos, int qa_per_video,
           unsigned long long seed) {
            SynthConfig cfg;
            cfg.videos = videos;
            cfg.qa_per_video = qa_per_video;
            cfg.seed = seed;
            const Corpus corpus = generate_synthetic_corpus(cfg);
            save_corpus(corpus, out_dir);
            py::dict out;
            out["videos"] = corpus.videos.size();
            out["samples"] = corpus.samples.size();
            out["gold_programs"] = corpus.gold_programs.size();
            return out;
        },
        py::arg("out_dir"), py::arg("videos") = 50, py::arg("qa_per_video") = 4,
        py::arg("seed") = 0,
        "Write a seed-deterministic synthetic scene-graph corpus to disk.");

    m.def(
        "run_generate",
        [](const std::filesystem::path& corpus_dir, const std::filesystem::path& out_dir,
           int workers, bool strip_latency) {
            const Corpus corpus = load_corpus(corpus_dir);
            auto shared = std::make_shared<const Corpus>(corpus);
            const AgentRegistry agents = oracle_registry(shared);
            auto llm = pipeline_stub_llm();
            PipelineConfig pc;
            pc.workers = workers;
            const PipelineResult result = run_pipeline(corpus, agents, *llm, pc);
            write_pipeline_outputs(result, out_dir, !strip_latency);
            return funnel_dict(result.stats);
        },
        py::arg("corpus_dir"), py::arg("out_dir"), py::arg("workers") = 1,
        py::arg("strip_latency") = false,
        "Offline pipeline run over a corpus with scene-graph oracle agents and "
        "deterministic stub LLMs; returns the per-dataset yield funnel.");

    m.def(
        "emit_dataset",
        [](const std::filesystem::path& corpus_dir,
           const std::filesystem::path& records_dir, const std::filesystem::path& out_dir,
           double lambda) {
            const Corpus corpus = load_corpus(corpus_dir);
            std::vector<CoTRecord> records;
            std::istringstream in(read_file(records_dir / "cot_records.jsonl"));
            std::string line;
            while (std::getline(in, line)) {
                if (trim(line).empty()) continue;
                records.push_back(cot_record_from_json(json::parse(line)));
            }
            LossSpec spec;
            spec.lambda = lambda;
            const EmitManifest manifest = emit(corpus.samples, records, spec, out_dir);
            py::dict out;
            out["qa_pairs"] = manifest.qa_pairs;
            out["answer_samples"] = manifest.answer_samples;
            out["rationale_samples"] = manifest.rationale_samples;
            out["lambda"] = manifest.lambda;
            return out;
        },
        py::arg("corpus_dir"), py::arg("records_dir"), py::arg("out_dir"),
        py::arg("lambda") = 1.0,
        "Materialize answer/rationale training records from pipeline outputs.");
}
