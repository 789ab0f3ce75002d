#include "videocot/agents.hpp"

#include <algorithm>

#include "videocot/util.hpp"

namespace videocot {

void AgentRegistry::require_complete() const {
    if (!decomposer || !detector || !grounder || !recognizer || !answerer)
        throw ConfigError("agent registry is missing a backend for at least one sub-task");
}

namespace {

constexpr double kMatchThreshold = 0.5;

// exact case-folded match scores above any token-F1 score
double match_score(const std::string& query, const std::string& label) {
    if (to_lower(trim(query)) == to_lower(trim(label))) return 2.0;
    const double f1 = token_f1(query, label);
    return f1 >= kMatchThreshold ? f1 : 0.0;
}

const SceneGraph& graph_for(const Corpus& corpus, const VideoContext& video,
                            const std::string& sub_task) {
    const SceneGraph* sg = corpus.scene_graph(video.video_id);
    if (!sg)
        throw AgentError("oracle backend has no scene graph for video '" + video.video_id +
                             "'", sub_task);
    return *sg;
}

}  // namespace

std::optional<size_t> match_object(const SceneGraph& sg, const std::string& query,
                                   std::optional<TemporalSpan> within) {
    double best = 0.0;
    std::optional<size_t> best_idx;
    for (size_t i = 0; i < sg.objects.size(); ++i) {
        if (within) {
            bool in_clip = false;
            for (const auto& [frame, box] : sg.objects[i].track)
                if (within->contains(frame)) { in_clip = true; break; }
            if (!in_clip) continue;
        }
        const double s = match_score(query, sg.objects[i].label);
        if (s > best) {
            best = s;
            best_idx = i;
        }
    }
    return best_idx;
}

std::optional<size_t> match_action(const SceneGraph& sg, const std::string& query) {
    double best = 0.0;
    std::optional<size_t> best_idx;
    for (size_t i = 0; i < sg.actions.size(); ++i) {
        const double s = match_score(query, sg.actions[i].label);
        if (s > best) {
            best = s;
            best_idx = i;
        }
    }
    return best_idx;
}

std::optional<TemporalSpan> oracle_ground_span(const SceneGraph& sg, const std::string& query) {
    const std::string q = trim(query);
    if (starts_with_ci(q, "after ")) {
        auto idx = match_action(sg, q.substr(6));
        if (!idx) return std::nullopt;
        const int start = sg.actions[*idx].span.end.index + 1;
        if (start >= kNormFrameCount) return std::nullopt;
        return TemporalSpan{NormFrame{start}, NormFrame{kNormFrameCount - 1}};
    }
    if (starts_with_ci(q, "before ")) {
        auto idx = match_action(sg, q.substr(7));
        if (!idx) return std::nullopt;
        const int end = sg.actions[*idx].span.start.index - 1;
        if (end < 0) return std::nullopt;
        return TemporalSpan{NormFrame{0}, NormFrame{end}};
    }
    auto idx = match_action(sg, q);
    if (!idx) return std::nullopt;
    return sg.actions[*idx].span;
}

std::vector<std::string> oracle_ranked_actions(const SceneGraph& sg, TemporalSpan clip,
                                               size_t limit) {
    std::vector<std::pair<int, size_t>> ranked;  // (overlap, annotation index)
    for (size_t i = 0; i < sg.actions.size(); ++i) {
        const int ov = span_overlap(sg.actions[i].span, clip);
        if (ov > 0) ranked.emplace_back(ov, i);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.first > b.first;  // stable: ties keep annotation order
    });
    std::vector<std::string> labels;
    for (const auto& [ov, i] : ranked) {
        const std::string& label = sg.actions[i].label;
        if (std::find(labels.begin(), labels.end(), label) != labels.end()) continue;
        labels.push_back(label);
        if (labels.size() >= limit) break;
    }
    return labels;
}

std::string best_text_match(const std::vector<std::string>& candidates,
                            const std::string& text) {
    if (candidates.empty())
        throw DomainError("best_text_match with no candidates");
    size_t best_idx = 0;
    double best = -1.0;
    for (size_t i = 0; i < candidates.size(); ++i) {
        double s = token_f1(candidates[i], text);
        if (to_lower(trim(candidates[i])) == to_lower(trim(text))) s = 2.0;
        if (s > best) {  // strict: ties keep the earliest candidate
            best = s;
            best_idx = i;
        }
    }
    return candidates[best_idx];
}

// ---------------------------------------------------------------------------
// Oracle backends

std::vector<Detection> OracleDetector::detect(TemporalSpan clip, const VideoContext& video,
                                              const std::string& query) {
    const SceneGraph& sg = graph_for(*corpus_, video, "detect");
    auto idx = match_object(sg, query, clip);
    if (!idx) return {};
    const ObjectTrack& obj = sg.objects[*idx];
    std::vector<Detection> out;
    for (const auto& [frame, box] : obj.track) {
        if (!clip.contains(frame)) continue;
        Detection d{box, frame, obj.label};
        d.box.confidence = 1.0;
        out.push_back(std::move(d));
    }
    return out;  // track map iterates frames ascending; confidences all 1.0
}

TemporalSpan OracleGrounder::ground(const VideoContext& video, const std::string& query) {
    const SceneGraph& sg = graph_for(*corpus_, video, "ground");
    auto span = oracle_ground_span(sg, query);
    if (!span)
        throw NoSpanError("no annotated action matches query '" + query + "' in video '" +
                          video.video_id + "'");
    return *span;
}

std::vector<std::string> OracleRecognizer::recognize(TemporalSpan clip,
                                                     const VideoContext& video) {
    const SceneGraph& sg = graph_for(*corpus_, video, "recognize");
    return oracle_ranked_actions(sg, clip);
}

std::string OracleAnswerer::answer(TemporalSpan clip, const VideoContext& video,
                                   const std::string& question, const std::string& context) {
    (void)context;  // the oracle reads annotations directly
    const SceneGraph& sg = graph_for(*corpus_, video, "qa");
    const std::string q = to_lower(trim(question));
    const auto tokens = tokenize(q);
    auto has = [&](const char* word) {
        return std::find(tokens.begin(), tokens.end(), word) != tokens.end();
    };

    if (has("what") && (has("do") || has("did") || has("doing") || has("action")) &&
        !has("object")) {
        auto ranked = oracle_ranked_actions(sg, clip, 1);
        return ranked.empty() ? "nothing" : ranked.front();
    }

    if ((has("what") || has("which")) && (has("object") || has("visible"))) {
        // most frequently visible object in the clip, ties by annotation order
        size_t best_count = 0;
        const ObjectTrack* best = nullptr;
        for (const auto& obj : sg.objects) {
            size_t count = 0;
            for (const auto& [frame, box] : obj.track)
                if (clip.contains(frame)) ++count;
            if (count > best_count) {
                best_count = count;
                best = &obj;
            }
        }
        return best ? best->label : "nothing";
    }

    if (starts_with_ci(q, "is there a ") || starts_with_ci(q, "is there an ")) {
        std::string target =
            starts_with_ci(q, "is there an ") ? q.substr(12) : q.substr(11);
        // strip trailing clause ("... while the person is ...") and punctuation
        for (const char* cut : {" while ", " during ", " when ", "?"}) {
            const auto at = target.find(cut);
            if (at != std::string::npos) target = target.substr(0, at);
        }
        auto idx = match_object(sg, trim(target), clip);
        return idx ? "yes" : "no";
    }

    return "unknown";
}

dsl::SourceProgram OracleDecomposer::decompose(const std::string& question,
                                               const std::vector<std::string>& options,
                                               const std::string& registry_docs) {
    (void)options;
    (void)registry_docs;
    // look the program up by question text
    for (const auto& sample : corpus_->samples) {
        if (sample.question != question) continue;
        if (const std::string* code = corpus_->gold_program(sample.sample_id))
            return dsl::SourceProgram{*code, *code, dsl::ProgramOrigin::handwritten};
    }
    throw AgentError("oracle decomposer has no gold program for question: " + question,
                     "decompose");
}

dsl::SourceProgram OracleDecomposer::decompose_sample(const std::string& sample_id) {
    if (const std::string* code = corpus_->gold_program(sample_id))
        return dsl::SourceProgram{*code, *code, dsl::ProgramOrigin::handwritten};
    throw AgentError("no gold program for sample '" + sample_id + "'", "decompose");
}

// ---------------------------------------------------------------------------
// Stubs

std::vector<Detection> StubDetector::detect(TemporalSpan, const VideoContext&,
                                            const std::string& query) {
    std::vector<Detection> out;
    auto it = by_query_.find(query);
    out = it != by_query_.end() ? it->second : fixed_;
    std::stable_sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) {
        return a.box.confidence.value_or(0.0) > b.box.confidence.value_or(0.0);
    });
    return out;
}

TemporalSpan StubGrounder::ground(const VideoContext&, const std::string& query) {
    auto it = by_query_.find(query);
    if (it != by_query_.end()) return it->second;
    if (fixed_) return *fixed_;
    throw NoSpanError("stub grounder has no span for query '" + query + "'");
}

std::vector<std::string> StubRecognizer::recognize(TemporalSpan, const VideoContext&) {
    std::vector<std::string> out;
    for (const auto& label : fixed_) {
        if (std::find(out.begin(), out.end(), label) == out.end()) out.push_back(label);
        if (out.size() >= 5) break;
    }
    return out;
}

std::string StubAnswerer::answer(TemporalSpan, const VideoContext&,
                                 const std::string& question, const std::string&) {
    auto it = by_question_.find(question);
    if (it != by_question_.end()) return it->second;
    return fixed_;
}

dsl::SourceProgram StubDecomposer::decompose(const std::string& question,
                                             const std::vector<std::string>&,
                                             const std::string&) {
    auto it = by_question_.find(question);
    const std::string& raw = it != by_question_.end() ? it->second : fixed_;
    if (raw.empty())
        throw AgentError("stub decomposer has no completion for question: " + question,
                         "decompose");
    return dsl::SourceProgram{raw, "", dsl::ProgramOrigin::llm};
}

AgentRegistry oracle_registry(std::shared_ptr<const Corpus> corpus) {
    AgentRegistry reg;
    reg.decomposer = std::make_shared<OracleDecomposer>(corpus);
    reg.detector = std::make_shared<OracleDetector>(corpus);
    reg.grounder = std::make_shared<OracleGrounder>(corpus);
    reg.recognizer = std::make_shared<OracleRecognizer>(corpus);
    reg.answerer = std::make_shared<OracleAnswerer>(corpus);
    return reg;
}

}  // namespace videocot
