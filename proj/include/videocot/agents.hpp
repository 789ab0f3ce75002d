#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "videocot/corpus.hpp"
#include "videocot/dsl.hpp"
#include "videocot/model.hpp"

namespace videocot {

/// One detected object instance on the normalized frame grid.
struct Detection {
    BoundingBox box;
    NormFrame frame;
    std::string label;
};

// ---------------------------------------------------------------------------
// Sub-task agent contracts. Implementations must be safe for concurrent
// invocation from multiple pipeline workers.

class ObjectDetector {
public:
    virtual ~ObjectDetector() = default;
    /// Boxes sorted by confidence descending; may be empty.
    virtual std::vector<Detection> detect(TemporalSpan clip, const VideoContext& video,
                                          const std::string& query) = 0;
    virtual std::string backend_kind() const = 0;
};

class TemporalGrounder {
public:
    virtual ~TemporalGrounder() = default;
    /// Span within [0, 31]. Throws NoSpanError when the query grounds nowhere.
    virtual TemporalSpan ground(const VideoContext& video, const std::string& query) = 0;
    virtual std::string backend_kind() const = 0;
};

class ActionRecognizer {
public:
    virtual ~ActionRecognizer() = default;
    /// Up to five distinct labels, most likely first.
    virtual std::vector<std::string> recognize(TemporalSpan clip,
                                               const VideoContext& video) = 0;
    virtual std::string backend_kind() const = 0;
};

class QuestionAnswerer {
public:
    virtual ~QuestionAnswerer() = default;
    /// `context` carries a text rendering of upstream agent findings.
    virtual std::string answer(TemporalSpan clip, const VideoContext& video,
                               const std::string& question, const std::string& context) = 0;
    virtual std::string backend_kind() const = 0;
};

class Decomposer {
public:
    virtual ~Decomposer() = default;
    virtual dsl::SourceProgram decompose(const std::string& question,
                                         const std::vector<std::string>& options,
                                         const std::string& registry_docs) = 0;
    virtual std::string backend_kind() const = 0;
};

struct AgentRegistry {
    std::shared_ptr<Decomposer> decomposer;
    std::shared_ptr<ObjectDetector> detector;
    std::shared_ptr<TemporalGrounder> grounder;
    std::shared_ptr<ActionRecognizer> recognizer;
    std::shared_ptr<QuestionAnswerer> answerer;

    /// Throws ConfigError unless all five slots are populated.
    void require_complete() const;
};

// ---------------------------------------------------------------------------
// Query -> annotation label matching shared by the oracle backends: exact
// case-folded match first, then best token-overlap F1 >= 0.5, ties broken by
// annotation order.

std::optional<size_t> match_object(const SceneGraph& sg, const std::string& query,
                                   std::optional<TemporalSpan> within = std::nullopt);
std::optional<size_t> match_action(const SceneGraph& sg, const std::string& query);

/// Grounding semantics for oracle agents: a plain query returns the matched
/// action's span; "after <label>" / "before <label>" return the rest of the
/// grid beyond/ahead of the matched action.
std::optional<TemporalSpan> oracle_ground_span(const SceneGraph& sg, const std::string& query);

/// Actions overlapping the clip ordered by overlap length (desc), ties by
/// annotation order; distinct labels.
std::vector<std::string> oracle_ranked_actions(const SceneGraph& sg, TemporalSpan clip,
                                               size_t limit = 5);

/// Case-folded token-overlap F1 similarity argmax, ties by list order.
/// Resolved without any agent call.
std::string best_text_match(const std::vector<std::string>& candidates,
                            const std::string& text);

// ---------------------------------------------------------------------------
// Scene-graph oracle backends

class OracleDetector : public ObjectDetector {
public:
    explicit OracleDetector(std::shared_ptr<const Corpus> corpus) : corpus_(std::move(corpus)) {}
    std::vector<Detection> detect(TemporalSpan clip, const VideoContext& video,
                                  const std::string& query) override;
    std::string backend_kind() const override { return "oracle"; }

private:
    std::shared_ptr<const Corpus> corpus_;
};

class OracleGrounder : public TemporalGrounder {
public:
    explicit OracleGrounder(std::shared_ptr<const Corpus> corpus) : corpus_(std::move(corpus)) {}
    TemporalSpan ground(const VideoContext& video, const std::string& query) override;
    std::string backend_kind() const override { return "oracle"; }

private:
    std::shared_ptr<const Corpus> corpus_;
};

class OracleRecognizer : public ActionRecognizer {
public:
    explicit OracleRecognizer(std::shared_ptr<const Corpus> corpus)
        : corpus_(std::move(corpus)) {}
    std::vector<std::string> recognize(TemporalSpan clip, const VideoContext& video) override;
    std::string backend_kind() const override { return "oracle"; }

private:
    std::shared_ptr<const Corpus> corpus_;
};

/// Answers the question-template family used by scene-graph corpora
/// ("what did the person do ...", "what object is visible ...",
/// "is there a ..."). Everything else answers "unknown".
class OracleAnswerer : public QuestionAnswerer {
public:
    explicit OracleAnswerer(std::shared_ptr<const Corpus> corpus) : corpus_(std::move(corpus)) {}
    std::string answer(TemporalSpan clip, const VideoContext& video,
                       const std::string& question, const std::string& context) override;
    std::string backend_kind() const override { return "oracle"; }

private:
    std::shared_ptr<const Corpus> corpus_;
};

/// Replays the corpus gold program for the sample id embedded in the
/// question context; used for ground-truth substitution and synthetic runs.
class OracleDecomposer : public Decomposer {
public:
    OracleDecomposer(std::shared_ptr<const Corpus> corpus) : corpus_(std::move(corpus)) {}
    /// The oracle looks programs up by question text; set_current_sample
    /// routes by sample id instead when the pipeline knows it.
    dsl::SourceProgram decompose(const std::string& question,
                                 const std::vector<std::string>& options,
                                 const std::string& registry_docs) override;
    dsl::SourceProgram decompose_sample(const std::string& sample_id);

private:
    std::string backend_kind() const override { return "oracle"; }
    std::shared_ptr<const Corpus> corpus_;
};

// ---------------------------------------------------------------------------
// Canned stub backends for tests and offline runs

class StubDetector : public ObjectDetector {
public:
    StubDetector() = default;
    explicit StubDetector(std::vector<Detection> fixed) : fixed_(std::move(fixed)) {}
    StubDetector(std::map<std::string, std::vector<Detection>> by_query)
        : by_query_(std::move(by_query)) {}
    std::vector<Detection> detect(TemporalSpan clip, const VideoContext& video,
                                  const std::string& query) override;
    std::string backend_kind() const override { return "stub"; }

private:
    std::vector<Detection> fixed_;
    std::map<std::string, std::vector<Detection>> by_query_;
};

class StubGrounder : public TemporalGrounder {
public:
    explicit StubGrounder(TemporalSpan fixed) : fixed_(fixed) {}
    explicit StubGrounder(std::map<std::string, TemporalSpan> by_query)
        : by_query_(std::move(by_query)) {}
    TemporalSpan ground(const VideoContext& video, const std::string& query) override;
    std::string backend_kind() const override { return "stub"; }

private:
    std::optional<TemporalSpan> fixed_;
    std::map<std::string, TemporalSpan> by_query_;
};

class StubRecognizer : public ActionRecognizer {
public:
    explicit StubRecognizer(std::vector<std::string> fixed) : fixed_(std::move(fixed)) {}
    std::vector<std::string> recognize(TemporalSpan, const VideoContext&) override;
    std::string backend_kind() const override { return "stub"; }

private:
    std::vector<std::string> fixed_;
};

class StubAnswerer : public QuestionAnswerer {
public:
    explicit StubAnswerer(std::string fixed) : fixed_(std::move(fixed)) {}
    explicit StubAnswerer(std::map<std::string, std::string> by_question)
        : by_question_(std::move(by_question)) {}
    std::string answer(TemporalSpan, const VideoContext&, const std::string& question,
                       const std::string&) override;
    std::string backend_kind() const override { return "stub"; }

private:
    std::string fixed_;
    std::map<std::string, std::string> by_question_;
};

class StubDecomposer : public Decomposer {
public:
    explicit StubDecomposer(std::string fixed_completion)
        : fixed_(std::move(fixed_completion)) {}
    explicit StubDecomposer(std::map<std::string, std::string> by_question)
        : by_question_(std::move(by_question)) {}
    dsl::SourceProgram decompose(const std::string& question,
                                 const std::vector<std::string>& options,
                                 const std::string& registry_docs) override;
    std::string backend_kind() const override { return "stub"; }

private:
    std::string fixed_;
    std::map<std::string, std::string> by_question_;
};

/// Registry with all five slots backed by the scene-graph oracle.
AgentRegistry oracle_registry(std::shared_ptr<const Corpus> corpus);

}  // namespace videocot
