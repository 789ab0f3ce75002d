#include "videocot/http_agents.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include <httplib.h>

#include "videocot/prompts.hpp"
#include "videocot/util.hpp"

namespace videocot {

namespace {

json post_json(const HttpAgentOptions& opts, const std::string& path, const json& body,
               const std::string& sub_task) {
    std::string last_error;
    for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(opts.backoff_base_ms * (1 << (attempt - 1))));
        httplib::Client client(opts.endpoint);
        client.set_connection_timeout(opts.timeout_sec, 0);
        client.set_read_timeout(opts.timeout_sec, 0);
        auto res = client.Post(path, body.dump(), "application/json");
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "server error " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw AgentError("agent endpoint " + path + " returned status " +
                                 std::to_string(res->status),
                             sub_task);
        try {
            return json::parse(res->body);
        } catch (const std::exception& e) {
            throw AgentError("malformed reply from " + path + ": " + e.what(), sub_task);
        }
    }
    throw AgentError("agent endpoint " + path + " unreachable: " + last_error, sub_task);
}

int clamp_frame(int f) { return std::clamp(f, 0, kNormFrameCount - 1); }

}  // namespace

std::vector<Detection> HttpDetector::detect(TemporalSpan clip, const VideoContext& video,
                                            const std::string& query) {
    json body{{"video_id", video.video_id}, {"span", to_json(clip)}, {"query", query}};
    json reply = post_json(opts_, "/detect", body, "detect");
    std::vector<Detection> out;
    if (reply.contains("detections")) {
        for (const auto& dj : reply["detections"]) {
            Detection d;
            d.box = box_from_json(dj.at("box"), CoordSpace::pixel);
            d.frame = NormFrame{clamp_frame(dj.value("frame", clip.start.index))};
            d.label = dj.value("label", query);
            out.push_back(std::move(d));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) {
        return a.box.confidence.value_or(0.0) > b.box.confidence.value_or(0.0);
    });
    return out;
}

TemporalSpan HttpGrounder::ground(const VideoContext& video, const std::string& query) {
    json body{{"video_id", video.video_id}, {"query", query}};
    json reply = post_json(opts_, "/ground", body, "ground");
    if (!reply.contains("span") || reply["span"].is_null())
        throw NoSpanError("grounder found no span for query '" + query + "'");
    const auto& sj = reply["span"];
    int start = clamp_frame(sj.at("start").get<int>());
    int end = clamp_frame(sj.at("end").get<int>());
    if (start > end)
        throw NoSpanError("grounder returned an empty span for query '" + query + "'");
    return TemporalSpan{NormFrame{start}, NormFrame{end}};
}

std::vector<std::string> HttpRecognizer::recognize(TemporalSpan clip,
                                                   const VideoContext& video) {
    json body{{"video_id", video.video_id}, {"span", to_json(clip)}};
    json reply = post_json(opts_, "/recognize", body, "recognize");
    std::vector<std::string> out;
    if (reply.contains("actions")) {
        for (const auto& a : reply["actions"]) {
            const std::string label = a.get<std::string>();
            if (std::find(out.begin(), out.end(), label) == out.end()) out.push_back(label);
            if (out.size() >= 5) break;
        }
    }
    return out;
}

std::string HttpAnswerer::answer(TemporalSpan clip, const VideoContext& video,
                                 const std::string& question, const std::string& context) {
    json body{{"video_id", video.video_id},
              {"span", to_json(clip)},
              {"question", question},
              {"context", context}};
    json reply = post_json(opts_, "/qa", body, "qa");
    if (!reply.contains("answer"))
        throw AgentError("qa endpoint reply missing 'answer'", "qa");
    return reply["answer"].get<std::string>();
}

dsl::SourceProgram LlmDecomposer::decompose(const std::string& question,
                                            const std::vector<std::string>& options,
                                            const std::string& registry_docs) {
    if (trim(question).empty()) throw DomainError("decompose() with an empty question");
    LlmRequest req;
    req.prompt = prompts::program_generation(question, options, registry_docs);
    req.model = model_;
    req.temperature = 0.0;
    LlmResponse resp;
    try {
        resp = llm_->complete(req);
    } catch (const TransportError& e) {
        throw AgentError(std::string("decomposer transport failure: ") + e.what(),
                         "decompose");
    }
    if (trim(resp.text).empty())
        throw AgentError("decomposer returned an empty completion", "decompose");
    return dsl::SourceProgram{resp.text, "", dsl::ProgramOrigin::llm};
}

}  // namespace videocot
