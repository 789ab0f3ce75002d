#include "videocot/model.hpp"

#include <algorithm>
#include <cmath>

#include "videocot/util.hpp"

namespace videocot {

std::string to_string(SubTask t) {
    switch (t) {
        case SubTask::detect: return "detect";
        case SubTask::ground: return "ground";
        case SubTask::recognize: return "recognize";
        case SubTask::qa: return "qa";
        case SubTask::logic: return "logic";
    }
    return "?";
}

SubTask sub_task_from_string(const std::string& s) {
    if (s == "detect") return SubTask::detect;
    if (s == "ground") return SubTask::ground;
    if (s == "recognize") return SubTask::recognize;
    if (s == "qa") return SubTask::qa;
    if (s == "logic") return SubTask::logic;
    throw DomainError("unknown sub-task tag: " + s);
}

NormFrame normalize_frame_index(long long f, long long total_frames) {
    if (total_frames < 1) throw DomainError("total_frames must be >= 1");
    if (f < 0 || f >= total_frames)
        throw DomainError("frame index " + std::to_string(f) +
                          " out of range for a video with " +
                          std::to_string(total_frames) + " frames");
    if (total_frames == 1) return NormFrame{0};
    // round-half-up of f*31/(t-1) without floating point
    const long long num = 2 * f * (kNormFrameCount - 1) + (total_frames - 1);
    const long long den = 2 * (total_frames - 1);
    return NormFrame{static_cast<int>(num / den)};
}

int span_overlap(TemporalSpan a, TemporalSpan b) {
    const int lo = std::max(a.start.index, b.start.index);
    const int hi = std::min(a.end.index, b.end.index);
    return hi >= lo ? hi - lo + 1 : 0;
}

std::optional<TemporalSpan> span_intersection(TemporalSpan a, TemporalSpan b) {
    const int lo = std::max(a.start.index, b.start.index);
    const int hi = std::min(a.end.index, b.end.index);
    if (hi < lo) return std::nullopt;
    return TemporalSpan{NormFrame{lo}, NormFrame{hi}};
}

std::pair<long long, long long> denormalize_span(TemporalSpan span, long long total_frames) {
    if (total_frames < 1) throw DomainError("total_frames must be >= 1");
    if (total_frames == 1) return {0, 0};
    auto norm = [&](long long f) { return normalize_frame_index(f, total_frames).index; };
    // normalize_frame_index is monotone, so both bounds binary-search cleanly.
    auto lower_for = [&](int target) -> long long {  // first f with norm(f) >= target
        long long lo = 0, hi = total_frames;         // hi = "not found"
        while (lo < hi) {
            const long long mid = lo + (hi - lo) / 2;
            if (norm(mid) >= target) hi = mid; else lo = mid + 1;
        }
        return lo;
    };
    auto upper_for = [&](int target) -> long long {  // last f with norm(f) <= target
        long long lo = -1, hi = total_frames - 1;    // lo = "not found"
        while (lo < hi) {
            const long long mid = hi - (hi - lo) / 2;
            if (norm(mid) <= target) lo = mid; else hi = mid - 1;
        }
        return lo;
    };
    long long lo = lower_for(span.start.index);
    long long hi = upper_for(span.end.index);
    if (lo >= total_frames || hi < 0 || lo > hi) {
        // No raw frame normalizes into the span (only possible when
        // total_frames < 32). Collapse to the frame nearest the midpoint.
        const double mid = (span.start.index + span.end.index) / 2.0;
        long long f = std::llround(mid * (total_frames - 1) / (kNormFrameCount - 1));
        f = std::clamp<long long>(f, 0, total_frames - 1);
        return {f, f};
    }
    return {lo, hi};
}

std::string to_string(CoordSpace s) {
    return s == CoordSpace::pixel ? "pixel" : "normalized";
}

CoordSpace coord_space_from_string(const std::string& s) {
    if (s == "pixel") return CoordSpace::pixel;
    if (s == "normalized") return CoordSpace::normalized;
    throw CorpusError("unknown coordinate space: " + s);
}

bool BoundingBox::geometry_valid() const {
    if (!std::isfinite(x_min) || !std::isfinite(y_min) || !std::isfinite(x_max) ||
        !std::isfinite(y_max))
        return false;
    if (!(x_min < x_max) || !(y_min < y_max)) return false;
    if (confidence && (*confidence < 0.0 || *confidence > 1.0)) return false;
    return true;
}

std::string render_span(TemporalSpan span) {
    if (span.start.index == span.end.index)
        return "frame " + std::to_string(span.start.index) + " of " +
               std::to_string(kNormFrameCount);
    return "frames " + std::to_string(span.start.index) + "–" +
           std::to_string(span.end.index) + " of " + std::to_string(kNormFrameCount);
}

std::string render_box(const BoundingBox& box) {
    return "[" + format_double(box.x_min) + "," + format_double(box.y_min) + "," +
           format_double(box.x_max) + "," + format_double(box.y_max) + "]";
}

ValidationReport validate_scene_graph(const SceneGraph& sg) {
    ValidationReport report;
    auto add = [&](std::string path, std::string msg) {
        report.violations.push_back({std::move(path), std::move(msg)});
    };

    if (sg.video_id.empty()) add("video_id", "video_id is empty");

    std::set<std::string> object_ids;
    for (size_t i = 0; i < sg.objects.size(); ++i) {
        const auto& obj = sg.objects[i];
        const std::string path = "objects[" + std::to_string(i) + "]";
        if (obj.object_id.empty()) add(path, "object_id is empty");
        if (!object_ids.insert(obj.object_id).second)
            add(path, "duplicate object_id '" + obj.object_id + "'");
        for (const auto& [frame, box] : obj.track) {
            if (frame.index < 0 || frame.index >= kNormFrameCount)
                add(path, "track frame " + std::to_string(frame.index) +
                              " outside [0, 31]");
            if (!box.geometry_valid())
                add(path, "invalid box at frame " + std::to_string(frame.index));
        }
    }

    for (size_t i = 0; i < sg.actions.size(); ++i) {
        const auto& act = sg.actions[i];
        const std::string path = "actions[" + std::to_string(i) + "]";
        if (act.span.start.index < 0 || act.span.end.index >= kNormFrameCount ||
            act.span.start.index > act.span.end.index)
            add(path, "invalid span for action '" + act.label + "'");
        for (const auto& kf : act.key_frames) {
            if (!act.span.contains(kf))
                add(path, "key frame " + std::to_string(kf.index) +
                              " outside the span of action '" + act.label + "'");
        }
    }

    for (size_t i = 0; i < sg.relations.size(); ++i) {
        const auto& rel = sg.relations[i];
        const std::string path = "relations[" + std::to_string(i) + "]";
        if (!object_ids.count(rel.subject_id))
            add(path, "relation subject_id '" + rel.subject_id + "' not in objects");
        if (!object_ids.count(rel.object_id))
            add(path, "relation object_id '" + rel.object_id + "' not in objects");
        if (rel.span.start.index < 0 || rel.span.end.index >= kNormFrameCount ||
            rel.span.start.index > rel.span.end.index)
            add(path, "invalid relation span");
    }
    return report;
}

std::string to_string(QType q) {
    return q == QType::multiple_choice ? "multiple_choice" : "open_ended";
}

QType qtype_from_string(const std::string& s) {
    if (s == "multiple_choice") return QType::multiple_choice;
    if (s == "open_ended") return QType::open_ended;
    throw CorpusError("unknown qtype: " + s);
}

std::string QASample::option_letter(size_t i) {
    return std::string(1, static_cast<char>('A' + i));
}

std::optional<size_t> QASample::gold_option_index() const {
    if (qtype != QType::multiple_choice) return std::nullopt;
    const std::string g = trim(gold_answer);
    if (g.size() == 1 && std::isalpha(static_cast<unsigned char>(g[0]))) {
        const size_t idx = static_cast<size_t>(std::toupper(static_cast<unsigned char>(g[0])) - 'A');
        if (idx < options.size()) return idx;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// JSON

json to_json(const VideoContext& v) {
    json j{{"video_id", v.video_id}, {"total_frames", v.total_frames}};
    if (v.fps) j["fps"] = *v.fps;
    j["uri"] = v.uri;
    return j;
}

json to_json(const BoundingBox& b) {
    json j{{"x_min", b.x_min}, {"y_min", b.y_min}, {"x_max", b.x_max}, {"y_max", b.y_max}};
    if (b.confidence) j["confidence"] = *b.confidence;
    return j;
}

json to_json(TemporalSpan s) {
    return json{{"start", s.start.index}, {"end", s.end.index}};
}

json to_json(const SceneGraph& sg) {
    json objects = json::array();
    for (const auto& obj : sg.objects) {
        json track = json::object();
        for (const auto& [frame, box] : obj.track)
            track[std::to_string(frame.index)] = to_json(box);
        objects.push_back(json{{"object_id", obj.object_id},
                               {"label", obj.label},
                               {"track", std::move(track)}});
    }
    json actions = json::array();
    for (const auto& act : sg.actions) {
        json keys = json::array();
        for (const auto& kf : act.key_frames) keys.push_back(kf.index);
        actions.push_back(json{{"label", act.label},
                               {"span", to_json(act.span)},
                               {"key_frames", std::move(keys)}});
    }
    json relations = json::array();
    for (const auto& rel : sg.relations)
        relations.push_back(json{{"subject_id", rel.subject_id},
                                 {"predicate", rel.predicate},
                                 {"object_id", rel.object_id},
                                 {"span", to_json(rel.span)}});
    return json{{"video_id", sg.video_id},
                {"objects", std::move(objects)},
                {"actions", std::move(actions)},
                {"relations", std::move(relations)}};
}

json to_json(const QASample& q) {
    json j{{"sample_id", q.sample_id},
           {"video_id", q.video_id},
           {"question", q.question},
           {"qtype", to_string(q.qtype)}};
    if (q.qtype == QType::multiple_choice) j["options"] = q.options;
    j["gold_answer"] = q.gold_answer;
    j["source_dataset"] = q.source_dataset;
    return j;
}

namespace {

const json& require(const json& j, const char* field, const char* ctx) {
    auto it = j.find(field);
    if (it == j.end())
        throw CorpusError(std::string("missing field '") + field + "' in " + ctx);
    return *it;
}

}  // namespace

VideoContext video_from_json(const json& j) {
    VideoContext v;
    v.video_id = require(j, "video_id", "video record").get<std::string>();
    v.total_frames = require(j, "total_frames", "video record").get<long long>();
    if (j.contains("fps") && !j["fps"].is_null()) v.fps = j["fps"].get<double>();
    if (j.contains("uri")) v.uri = j["uri"].get<std::string>();
    if (v.video_id.empty()) throw CorpusError("video record with empty video_id");
    if (v.total_frames < 1)
        throw CorpusError("video '" + v.video_id + "' has total_frames < 1");
    return v;
}

BoundingBox box_from_json(const json& j, CoordSpace space) {
    BoundingBox b;
    b.x_min = require(j, "x_min", "box").get<double>();
    b.y_min = require(j, "y_min", "box").get<double>();
    b.x_max = require(j, "x_max", "box").get<double>();
    b.y_max = require(j, "y_max", "box").get<double>();
    if (j.contains("confidence") && !j["confidence"].is_null())
        b.confidence = j["confidence"].get<double>();
    b.space = space;
    return b;
}

TemporalSpan span_from_json(const json& j) {
    return TemporalSpan{NormFrame{require(j, "start", "span").get<int>()},
                        NormFrame{require(j, "end", "span").get<int>()}};
}

SceneGraph scene_graph_from_json(const json& j, CoordSpace space) {
    SceneGraph sg;
    sg.video_id = require(j, "video_id", "scene graph").get<std::string>();
    for (const auto& oj : require(j, "objects", "scene graph")) {
        ObjectTrack obj;
        obj.object_id = require(oj, "object_id", "object").get<std::string>();
        obj.label = require(oj, "label", "object").get<std::string>();
        for (const auto& [key, bj] : require(oj, "track", "object").items())
            obj.track[NormFrame{std::stoi(key)}] = box_from_json(bj, space);
        sg.objects.push_back(std::move(obj));
    }
    for (const auto& aj : require(j, "actions", "scene graph")) {
        ActionSpan act;
        act.label = require(aj, "label", "action").get<std::string>();
        act.span = span_from_json(require(aj, "span", "action"));
        for (const auto& kf : require(aj, "key_frames", "action"))
            act.key_frames.insert(NormFrame{kf.get<int>()});
        sg.actions.push_back(std::move(act));
    }
    if (j.contains("relations")) {
        for (const auto& rj : j["relations"]) {
            Relation rel;
            rel.subject_id = require(rj, "subject_id", "relation").get<std::string>();
            rel.predicate = require(rj, "predicate", "relation").get<std::string>();
            rel.object_id = require(rj, "object_id", "relation").get<std::string>();
            rel.span = span_from_json(require(rj, "span", "relation"));
            sg.relations.push_back(std::move(rel));
        }
    }
    return sg;
}

QASample qa_from_json(const json& j) {
    QASample q;
    q.sample_id = require(j, "sample_id", "qa record").get<std::string>();
    q.video_id = require(j, "video_id", "qa record").get<std::string>();
    q.question = require(j, "question", "qa record").get<std::string>();
    q.qtype = qtype_from_string(require(j, "qtype", "qa record").get<std::string>());
    if (j.contains("options"))
        q.options = j["options"].get<std::vector<std::string>>();
    q.gold_answer = require(j, "gold_answer", "qa record").get<std::string>();
    q.source_dataset = require(j, "source_dataset", "qa record").get<std::string>();
    if (q.qtype == QType::multiple_choice) {
        if (q.options.empty())
            throw CorpusError("multiple-choice sample '" + q.sample_id + "' has no options");
        if (!q.gold_option_index())
            throw CorpusError("gold answer of sample '" + q.sample_id +
                              "' does not name an option letter");
    }
    return q;
}

}  // namespace videocot
