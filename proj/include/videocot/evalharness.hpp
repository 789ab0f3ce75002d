#pragma once

#include <optional>
#include <set>

#include "videocot/agents.hpp"
#include "videocot/cot.hpp"
#include "videocot/executor.hpp"
#include "videocot/metrics.hpp"

namespace videocot {

struct MetricReport {
    struct SampleRow {
        std::string sample_id;
        int call_index = -1;               // agent-call index inside the trace
        std::map<std::string, double> values;  // metric name -> percentage
        bool skipped = false;
        std::string note;
    };

    std::string sub_task;
    /// Aggregate means in percent, e.g. {"iou": 63.0} or {"iou": 24.7,
    /// "recall": 35.3}. Absent when no row was scorable.
    std::map<std::string, double> metrics;
    long long n = 0;        // scored rows
    long long n_raw = 0;    // scored + skipped (silent dropping is forbidden)
    std::vector<SampleRow> rows;

    json to_json() const;
    std::string render_table() const;
};

struct EvalOptions {
    Budget budget;
    /// Evaluate a random subset of this size (seeded); 0 = all samples.
    size_t subset = 0;
    unsigned long long seed = 0;
    SubstitutionPlan::Mode mode = SubstitutionPlan::Mode::single_step;
    /// Optional judge for open-ended QA accuracy; normalized exact match
    /// otherwise.
    CompletionClient* oe_judge = nullptr;
};

/// Table-1-style per-sub-task evaluation with ground-truth substitution:
/// every step other than the tested sub-task replays oracle outputs, the
/// candidate backend runs live, and the step outputs (or the final answer,
/// for decomposition/qa) are scored against the oracle run.
/// `sub_task == logic` is not evaluable and throws DomainError.
MetricReport eval_subtask(SubTask sub_task, const AgentRegistry& candidate,
                          const Corpus& corpus, const EvalOptions& opts = {});

/// Decomposition accuracy: full ground-truth substitution, final answer must
/// match the gold answer; non-executable programs count as failures.
MetricReport eval_decomposition(const AgentRegistry& candidate, const Corpus& corpus,
                                const EvalOptions& opts = {});

// ---------------------------------------------------------------------------
// Rationale grading

struct ParsedRationale {
    std::vector<TemporalSpan> intervals;
    std::vector<BoundingBox> boxes;
    bool parse_ok = false;  // false => both lists empty
};

/// Recovers temporal windows ("frames 5–10 of 32", "frame 7 of 32", "5 to 10",
/// "5-10") and boxes ("[x1,y1,x2,y2]", spaces tolerated) from free text.
/// Total: never throws.
ParsedRationale parse_rationale(const std::string& text);

/// Per-sample ground truth for rationale grading.
struct RationaleGroundTruth {
    std::string sample_id;
    std::vector<TemporalSpan> windows;
    std::vector<std::set<NormFrame>> window_keys;  // aligned with windows
    std::vector<BoundingBox> boxes;
};

/// Derives grading ground truth from a sample's scene graph: windows and key
/// frames from actions whose label overlaps the question text (all actions if
/// none match), boxes from objects named in the question.
RationaleGroundTruth rationale_gt_for(const QASample& sample, const SceneGraph& sg);

/// Grades generated rationales against ground truth: temporal IoU + key-frame
/// recall and greedy one-to-one spatial IoU, averaged over parseable outputs,
/// plus the unparseable rate. Throws DomainError when the lists are
/// misaligned.
MetricReport eval_rationales(const std::vector<RationaleGroundTruth>& ground_truth,
                             const std::vector<std::string>& outputs,
                             CoordSpace box_space = CoordSpace::pixel);

}  // namespace videocot
