#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "videocot/model.hpp"

namespace videocot {

struct LlmRequest {
    std::string prompt;
    int max_tokens = 1024;
    double temperature = 0.0;  // verification and judging always run at 0
    std::vector<std::string> stop;
    std::string model = "default";
};

struct LlmResponse {
    std::string text;
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
    bool cached = false;
};

class CompletionClient {
public:
    virtual ~CompletionClient() = default;
    virtual LlmResponse complete(const LlmRequest& req) = 0;
    virtual std::string backend_kind() const = 0;
};

/// Deterministic completion backend driven by a plain function; the building
/// block for all stub LLMs.
class StubCompletionClient : public CompletionClient {
public:
    using Fn = std::function<std::string(const LlmRequest&)>;

    explicit StubCompletionClient(Fn fn) : fn_(std::move(fn)) {}
    /// Always returns the same text.
    static std::shared_ptr<StubCompletionClient> fixed(std::string text);
    /// Always answers "Yes" (judge stub).
    static std::shared_ptr<StubCompletionClient> yes();
    /// Echoes everything after the last occurrence of `marker` in the prompt.
    /// With the conversion prompt's trailing trace section this reproduces the
    /// trace rendering verbatim.
    static std::shared_ptr<StubCompletionClient> echo_after(std::string marker);

    LlmResponse complete(const LlmRequest& req) override;
    std::string backend_kind() const override { return "stub"; }

private:
    Fn fn_;
};

/// POST /v1/completions client with bounded retries and exponential backoff.
class HttpCompletionClient : public CompletionClient {
public:
    struct Options {
        std::string endpoint;          // e.g. http://127.0.0.1:8080
        std::string api_key;           // optional bearer token
        int max_retries = 3;           // retries after the first attempt
        int backoff_base_ms = 50;
        int timeout_sec = 60;
    };

    explicit HttpCompletionClient(Options opts) : opts_(std::move(opts)) {}
    LlmResponse complete(const LlmRequest& req) override;
    std::string backend_kind() const override { return "http"; }

private:
    Options opts_;
};

/// Stamps a fixed model name onto every request before delegating, so cache
/// keys and server calls see the effective model.
class ModelBoundClient : public CompletionClient {
public:
    ModelBoundClient(std::shared_ptr<CompletionClient> inner, std::string model)
        : inner_(std::move(inner)), model_(std::move(model)) {}
    LlmResponse complete(const LlmRequest& req) override {
        LlmRequest bound = req;
        bound.model = model_;
        return inner_->complete(bound);
    }
    std::string backend_kind() const override { return inner_->backend_kind(); }

private:
    std::shared_ptr<CompletionClient> inner_;
    std::string model_;
};

/// On-disk request cache keyed by a content hash of (model, sampling params,
/// prompt). Identical requests are served from disk with cached=true; writes
/// are atomic and last-writer-wins on identical keys.
class DiskCachedClient : public CompletionClient {
public:
    DiskCachedClient(std::shared_ptr<CompletionClient> inner, std::filesystem::path dir)
        : inner_(std::move(inner)), dir_(std::move(dir)) {}
    LlmResponse complete(const LlmRequest& req) override;
    std::string backend_kind() const override { return inner_->backend_kind(); }

    static std::string cache_key(const LlmRequest& req);

private:
    std::shared_ptr<CompletionClient> inner_;
    std::filesystem::path dir_;
};

}  // namespace videocot
