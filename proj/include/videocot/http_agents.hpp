#pragma once

#include "videocot/agents.hpp"
#include "videocot/llm.hpp"

namespace videocot {

/// Connection settings shared by the HTTP agent clients. One client object is
/// created per request, so concurrent pipeline workers never share state.
struct HttpAgentOptions {
    std::string endpoint;  // http://host:port
    int max_retries = 2;
    int backoff_base_ms = 50;
    int timeout_sec = 30;
};

/// POST /detect {video_id, span, query} -> {detections: [{box, frame, label}]}
class HttpDetector : public ObjectDetector {
public:
    explicit HttpDetector(HttpAgentOptions opts) : opts_(std::move(opts)) {}
    std::vector<Detection> detect(TemporalSpan clip, const VideoContext& video,
                                  const std::string& query) override;
    std::string backend_kind() const override { return "http"; }

private:
    HttpAgentOptions opts_;
};

/// POST /ground {video_id, query} -> {span: {start, end}} or {span: null}.
/// Spans are clamped to [0, 31] client-side.
class HttpGrounder : public TemporalGrounder {
public:
    explicit HttpGrounder(HttpAgentOptions opts) : opts_(std::move(opts)) {}
    TemporalSpan ground(const VideoContext& video, const std::string& query) override;
    std::string backend_kind() const override { return "http"; }

private:
    HttpAgentOptions opts_;
};

/// POST /recognize {video_id, span} -> {actions: [text]}; truncated to five
/// distinct labels client-side.
class HttpRecognizer : public ActionRecognizer {
public:
    explicit HttpRecognizer(HttpAgentOptions opts) : opts_(std::move(opts)) {}
    std::vector<std::string> recognize(TemporalSpan clip, const VideoContext& video) override;
    std::string backend_kind() const override { return "http"; }

private:
    HttpAgentOptions opts_;
};

/// POST /qa {video_id, span, question, context} -> {answer: text}
class HttpAnswerer : public QuestionAnswerer {
public:
    explicit HttpAnswerer(HttpAgentOptions opts) : opts_(std::move(opts)) {}
    std::string answer(TemporalSpan clip, const VideoContext& video,
                       const std::string& question, const std::string& context) override;
    std::string backend_kind() const override { return "http"; }

private:
    HttpAgentOptions opts_;
};

/// Decomposition through the shared completion client with the
/// program-generation prompt template.
class LlmDecomposer : public Decomposer {
public:
    LlmDecomposer(std::shared_ptr<CompletionClient> llm, std::string model = "default")
        : llm_(std::move(llm)), model_(std::move(model)) {}
    dsl::SourceProgram decompose(const std::string& question,
                                 const std::vector<std::string>& options,
                                 const std::string& registry_docs) override;
    std::string backend_kind() const override { return llm_->backend_kind(); }

private:
    std::shared_ptr<CompletionClient> llm_;
    std::string model_;
};

}  // namespace videocot
