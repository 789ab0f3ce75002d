#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "videocot/error.hpp"

namespace videocot {

using json = nlohmann::ordered_json;

/// Videos are addressed through a fixed grid of 32 normalized frames; all
/// spans, key frames and boxes live on this grid regardless of the raw clip
/// length.
inline constexpr int kNormFrameCount = 32;

/// Sub-task taxonomy shared by the DSL registry, the agents and the
/// evaluation harness.
enum class SubTask { detect, ground, recognize, qa, logic };

std::string to_string(SubTask t);
SubTask sub_task_from_string(const std::string& s);

// ---------------------------------------------------------------------------
// Frame grid

struct NormFrame {
    int index = 0;  // in [0, 31]

    friend constexpr auto operator<=>(NormFrame, NormFrame) = default;
};

/// Maps a raw frame index onto the 32-frame grid: round(f * 31 / (t - 1)),
/// ties rounding half-up, computed in integer arithmetic so independent
/// tooling agrees bit-exactly. A single-frame video maps to 0.
NormFrame normalize_frame_index(long long f, long long total_frames);

struct TemporalSpan {
    NormFrame start;
    NormFrame end;  // inclusive

    constexpr int length() const { return end.index - start.index + 1; }
    constexpr bool contains(NormFrame f) const {
        return start.index <= f.index && f.index <= end.index;
    }
    friend constexpr bool operator==(TemporalSpan, TemporalSpan) = default;
};

/// Full grid [0, 31].
constexpr TemporalSpan full_span() { return {NormFrame{0}, NormFrame{kNormFrameCount - 1}}; }

/// Overlap in frames between two closed spans; 0 when disjoint.
int span_overlap(TemporalSpan a, TemporalSpan b);

/// Intersection of two closed spans, or nullopt when disjoint.
std::optional<TemporalSpan> span_intersection(TemporalSpan a, TemporalSpan b);

/// Inverse of normalize_frame_index: the raw-frame interval [lo, hi] whose
/// normalization covers the span. Re-normalizing the endpoints returns the
/// span's endpoints whenever they are reachable on the raw grid (always true
/// for total_frames >= 32). When no raw frame maps into the span (short
/// videos), collapses to the raw frame nearest the span midpoint.
std::pair<long long, long long> denormalize_span(TemporalSpan span, long long total_frames);

// ---------------------------------------------------------------------------
// Geometry

enum class CoordSpace { pixel, normalized };

std::string to_string(CoordSpace s);
CoordSpace coord_space_from_string(const std::string& s);

struct BoundingBox {
    double x_min = 0, y_min = 0, x_max = 0, y_max = 0;
    std::optional<double> confidence;
    // Declared per-corpus, stamped onto every box at load time; not serialized
    // per box.
    CoordSpace space = CoordSpace::pixel;

    double area() const { return (x_max - x_min) * (y_max - y_min); }
    bool geometry_valid() const;
};

/// "frames a–b of 32", or "frame a of 32" for a single-frame span. This is
/// the canonical spatial-temporal rendering used in traces, prompts and CoTs;
/// parse_rationale recovers it exactly.
std::string render_span(TemporalSpan span);
/// "[x_min,y_min,x_max,y_max]".
std::string render_box(const BoundingBox& box);

// ---------------------------------------------------------------------------
// Video + annotations

struct VideoContext {
    std::string video_id;
    long long total_frames = 1;
    std::optional<double> fps;
    std::string uri;  // opaque; raw media is never decoded here
};

struct ObjectTrack {
    std::string object_id;
    std::string label;
    std::map<NormFrame, BoundingBox> track;
};

struct ActionSpan {
    std::string label;
    TemporalSpan span;
    std::set<NormFrame> key_frames;  // each within span
};

struct Relation {
    std::string subject_id;
    std::string predicate;
    std::string object_id;
    TemporalSpan span;
};

struct SceneGraph {
    std::string video_id;
    std::vector<ObjectTrack> objects;
    std::vector<ActionSpan> actions;
    std::vector<Relation> relations;
};

struct ValidationReport {
    struct Violation {
        std::string path;     // e.g. "actions[2]"
        std::string message;
    };
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

/// Checks every SceneGraph invariant; never throws. Empty report iff valid.
ValidationReport validate_scene_graph(const SceneGraph& sg);

// ---------------------------------------------------------------------------
// QA samples

enum class QType { multiple_choice, open_ended };

std::string to_string(QType q);
QType qtype_from_string(const std::string& s);

struct QASample {
    std::string sample_id;
    std::string video_id;
    std::string question;
    QType qtype = QType::open_ended;
    std::vector<std::string> options;  // present iff multiple_choice
    std::string gold_answer;           // MC: the option letter
    std::string source_dataset;        // e.g. "STAR", "NExT-QA", "synthetic"

    /// MC option letter ("A", "B", ...) for position i.
    static std::string option_letter(size_t i);
    /// Index of the option named by this sample's gold letter, or nullopt.
    std::optional<size_t> gold_option_index() const;
};

// ---------------------------------------------------------------------------
// JSON serialization (field names match the on-disk corpus schema)

json to_json(const VideoContext& v);
json to_json(const BoundingBox& b);
json to_json(TemporalSpan s);
json to_json(const SceneGraph& sg);
json to_json(const QASample& q);

VideoContext video_from_json(const json& j);
BoundingBox box_from_json(const json& j, CoordSpace space);
TemporalSpan span_from_json(const json& j);
SceneGraph scene_graph_from_json(const json& j, CoordSpace space);
QASample qa_from_json(const json& j);

}  // namespace videocot
