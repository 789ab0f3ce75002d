#include "videocot/llm.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>

#include "videocot/error.hpp"
#include "videocot/util.hpp"

namespace videocot {

std::shared_ptr<StubCompletionClient> StubCompletionClient::fixed(std::string text) {
    return std::make_shared<StubCompletionClient>(
        [text = std::move(text)](const LlmRequest&) { return text; });
}

std::shared_ptr<StubCompletionClient> StubCompletionClient::yes() {
    return fixed("Yes");
}

std::shared_ptr<StubCompletionClient> StubCompletionClient::echo_after(std::string marker) {
    return std::make_shared<StubCompletionClient>(
        [marker = std::move(marker)](const LlmRequest& req) {
            const auto at = req.prompt.rfind(marker);
            if (at == std::string::npos) return req.prompt;
            return req.prompt.substr(at + marker.size());
        });
}

LlmResponse StubCompletionClient::complete(const LlmRequest& req) {
    if (req.prompt.empty()) throw DomainError("complete() with an empty prompt");
    LlmResponse resp;
    resp.text = fn_(req);
    resp.prompt_tokens = static_cast<long long>(tokenize(req.prompt).size());
    resp.completion_tokens = static_cast<long long>(tokenize(resp.text).size());
    return resp;
}

LlmResponse HttpCompletionClient::complete(const LlmRequest& req) {
    if (req.prompt.empty()) throw DomainError("complete() with an empty prompt");
    json body{{"model", req.model},
              {"prompt", req.prompt},
              {"max_tokens", req.max_tokens},
              {"temperature", req.temperature}};
    if (!req.stop.empty()) body["stop"] = req.stop;
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= opts_.max_retries; ++attempt) {
        if (attempt > 0) {
            const int delay = opts_.backoff_base_ms * (1 << (attempt - 1));
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        httplib::Client client(opts_.endpoint);
        client.set_connection_timeout(opts_.timeout_sec, 0);
        client.set_read_timeout(opts_.timeout_sec, 0);
        httplib::Headers headers;
        if (!opts_.api_key.empty())
            headers.emplace("Authorization", "Bearer " + opts_.api_key);
        auto res = client.Post("/v1/completions", headers, payload, "application/json");
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "server error " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw TransportError("LLM endpoint returned status " +
                                 std::to_string(res->status) + ": " + res->body);
        json reply;
        try {
            reply = json::parse(res->body);
        } catch (const std::exception& e) {
            throw TransportError(std::string("malformed LLM reply: ") + e.what());
        }
        if (!reply.contains("choices") || reply["choices"].empty() ||
            !reply["choices"][0].contains("text"))
            throw TransportError("malformed LLM reply: missing choices[0].text");
        LlmResponse out;
        out.text = reply["choices"][0]["text"].get<std::string>();
        if (reply.contains("usage")) {
            const auto& u = reply["usage"];
            if (u.contains("prompt_tokens")) out.prompt_tokens = u["prompt_tokens"].get<long long>();
            if (u.contains("completion_tokens"))
                out.completion_tokens = u["completion_tokens"].get<long long>();
        }
        return out;
    }
    throw TransportError("LLM request failed after " + std::to_string(opts_.max_retries + 1) +
                         " attempts: " + last_error);
}

std::string DiskCachedClient::cache_key(const LlmRequest& req) {
    json key{{"model", req.model},
             {"temperature", req.temperature},
             {"max_tokens", req.max_tokens},
             {"stop", req.stop},
             {"prompt", req.prompt}};
    return fnv1a64_hex(key.dump());
}

LlmResponse DiskCachedClient::complete(const LlmRequest& req) {
    const std::string key = cache_key(req);
    const auto path = dir_ / (key + ".json");
    json request_json{{"model", req.model},
                      {"temperature", req.temperature},
                      {"max_tokens", req.max_tokens},
                      {"stop", req.stop},
                      {"prompt", req.prompt}};
    if (std::filesystem::exists(path)) {
        try {
            json entry = json::parse(read_file(path));
            // hash collisions are cheap to rule out: replay only on full match
            if (entry.contains("request") && entry["request"] == request_json) {
                LlmResponse out;
                out.text = entry["response"]["text"].get<std::string>();
                out.prompt_tokens = entry["response"].value("prompt_tokens", 0LL);
                out.completion_tokens = entry["response"].value("completion_tokens", 0LL);
                out.cached = true;
                return out;
            }
        } catch (const std::exception&) {
            // unreadable cache entry: fall through and overwrite
        }
    }
    LlmResponse fresh = inner_->complete(req);
    json entry{{"request", std::move(request_json)},
               {"response",
                json{{"text", fresh.text},
                     {"prompt_tokens", fresh.prompt_tokens},
                     {"completion_tokens", fresh.completion_tokens}}}};
    std::filesystem::create_directories(dir_);
    write_file_atomic(path, entry.dump());
    return fresh;
}

}  // namespace videocot
