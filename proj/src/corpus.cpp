#include "videocot/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "videocot/util.hpp"

namespace videocot {

namespace {

void for_each_jsonl(const std::filesystem::path& file,
                    const std::function<void(const json&, int)>& fn) {
    std::ifstream in(file);
    if (!in) throw CorpusError("cannot open " + file.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const std::exception& e) {
            throw CorpusError(file.filename().string() + ":" + std::to_string(line_no) +
                              ": " + e.what());
        }
        fn(j, line_no);
    }
}

}  // namespace

void Corpus::build_index() const {
    if (video_index_.size() == videos.size() && sample_index_.size() == samples.size())
        return;
    video_index_.clear();
    sample_index_.clear();
    for (size_t i = 0; i < videos.size(); ++i) video_index_[videos[i].video_id] = i;
    for (size_t i = 0; i < samples.size(); ++i) sample_index_[samples[i].sample_id] = i;
}

const VideoContext& Corpus::video(const std::string& video_id) const {
    build_index();
    auto it = video_index_.find(video_id);
    if (it == video_index_.end()) throw CorpusError("unknown video_id: " + video_id);
    return videos[it->second];
}

const SceneGraph* Corpus::scene_graph(const std::string& video_id) const {
    auto it = scene_graphs.find(video_id);
    return it == scene_graphs.end() ? nullptr : &it->second;
}

const QASample& Corpus::sample(const std::string& sample_id) const {
    build_index();
    auto it = sample_index_.find(sample_id);
    if (it == sample_index_.end()) throw CorpusError("unknown sample_id: " + sample_id);
    return samples[it->second];
}

const std::string* Corpus::gold_program(const std::string& sample_id) const {
    auto it = gold_programs.find(sample_id);
    return it == gold_programs.end() ? nullptr : &it->second;
}

ValidationReport Corpus::validate() const {
    ValidationReport report;
    auto add = [&](std::string path, std::string msg) {
        report.violations.push_back({std::move(path), std::move(msg)});
    };

    std::set<std::string> video_ids;
    for (size_t i = 0; i < videos.size(); ++i) {
        const auto& v = videos[i];
        const std::string path = "videos[" + std::to_string(i) + "]";
        if (v.video_id.empty()) add(path, "empty video_id");
        if (!video_ids.insert(v.video_id).second)
            add(path, "duplicate video_id '" + v.video_id + "'");
        if (v.total_frames < 1) add(path, "total_frames < 1");
    }

    for (const auto& [vid, sg] : scene_graphs) {
        if (!video_ids.count(vid))
            add("scene_graphs['" + vid + "']", "scene graph for unknown video");
        auto sub = validate_scene_graph(sg);
        for (auto& v : sub.violations)
            add("scene_graphs['" + vid + "']." + v.path, v.message);
        if (sg.video_id != vid)
            add("scene_graphs['" + vid + "']", "video_id mismatch inside record");
    }

    std::set<std::string> sample_ids;
    for (size_t i = 0; i < samples.size(); ++i) {
        const auto& q = samples[i];
        const std::string path = "qa[" + std::to_string(i) + "]";
        if (!sample_ids.insert(q.sample_id).second)
            add(path, "duplicate sample_id '" + q.sample_id + "'");
        if (!video_ids.count(q.video_id))
            add(path, "sample '" + q.sample_id + "' references unknown video '" +
                          q.video_id + "'");
        if (q.qtype == QType::multiple_choice && !q.gold_option_index())
            add(path, "gold answer does not name an option");
    }

    for (const auto& [sid, code] : gold_programs) {
        if (!sample_ids.count(sid))
            add("programs['" + sid + "']", "gold program for unknown sample");
        if (trim(code).empty())
            add("programs['" + sid + "']", "empty program code");
    }
    return report;
}

Corpus load_corpus(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw CorpusError("corpus directory does not exist: " + dir.string());
    Corpus corpus;

    const auto meta_path = dir / "corpus.json";
    if (std::filesystem::exists(meta_path)) {
        json meta = json::parse(read_file(meta_path));
        if (meta.contains("coordinate_space"))
            corpus.coordinate_space =
                coord_space_from_string(meta["coordinate_space"].get<std::string>());
    }

    for_each_jsonl(dir / "videos.jsonl", [&](const json& j, int) {
        corpus.videos.push_back(video_from_json(j));
    });
    const auto sg_path = dir / "scene_graphs.jsonl";
    if (std::filesystem::exists(sg_path)) {
        for_each_jsonl(sg_path, [&](const json& j, int line) {
            SceneGraph sg = scene_graph_from_json(j, corpus.coordinate_space);
            if (corpus.scene_graphs.count(sg.video_id))
                throw CorpusError("scene_graphs.jsonl:" + std::to_string(line) +
                                  ": duplicate scene graph for video '" + sg.video_id + "'");
            corpus.scene_graphs.emplace(sg.video_id, std::move(sg));
        });
    }
    for_each_jsonl(dir / "qa.jsonl", [&](const json& j, int) {
        corpus.samples.push_back(qa_from_json(j));
    });
    const auto prog_path = dir / "programs.jsonl";
    if (std::filesystem::exists(prog_path)) {
        for_each_jsonl(prog_path, [&](const json& j, int line) {
            if (!j.contains("sample_id") || !j.contains("code"))
                throw CorpusError("programs.jsonl:" + std::to_string(line) +
                                  ": expected {sample_id, code}");
            corpus.gold_programs[j["sample_id"].get<std::string>()] =
                j["code"].get<std::string>();
        });
    }

    // A normalized-space corpus must keep every coordinate inside [0, 1];
    // out-of-range values mean pixel data leaked in and the corpus is mixed.
    if (corpus.coordinate_space == CoordSpace::normalized) {
        for (const auto& [vid, sg] : corpus.scene_graphs)
            for (const auto& obj : sg.objects)
                for (const auto& [frame, box] : obj.track)
                    if (box.x_min < 0 || box.y_min < 0 || box.x_max > 1 || box.y_max > 1)
                        throw CorpusError(
                            "corpus declares normalized coordinates but video '" + vid +
                            "' object '" + obj.object_id + "' has a box outside [0,1]");
    }

    auto report = corpus.validate();
    if (!report.ok())
        throw CorpusError("corpus validation failed: " + report.violations[0].path + ": " +
                          report.violations[0].message + " (and " +
                          std::to_string(report.violations.size() - 1) + " more)");
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        json meta{{"coordinate_space", to_string(corpus.coordinate_space)}};
        write_file_atomic(dir / "corpus.json", meta.dump(2) + "\n");
    }
    auto dump_lines = [&](const std::filesystem::path& p, const std::vector<json>& lines) {
        std::ostringstream out;
        for (const auto& j : lines) out << j.dump() << "\n";
        write_file_atomic(p, out.str());
    };
    std::vector<json> lines;
    for (const auto& v : corpus.videos) lines.push_back(to_json(v));
    dump_lines(dir / "videos.jsonl", lines);

    lines.clear();
    for (const auto& [vid, sg] : corpus.scene_graphs) lines.push_back(to_json(sg));
    dump_lines(dir / "scene_graphs.jsonl", lines);

    lines.clear();
    for (const auto& q : corpus.samples) lines.push_back(to_json(q));
    dump_lines(dir / "qa.jsonl", lines);

    if (!corpus.gold_programs.empty()) {
        lines.clear();
        for (const auto& [sid, code] : corpus.gold_programs)
            lines.push_back(json{{"sample_id", sid}, {"code", code}});
        dump_lines(dir / "programs.jsonl", lines);
    }
}

std::map<std::string, std::string> corpus_file_hashes(const std::filesystem::path& dir) {
    std::map<std::string, std::string> hashes;
    for (const char* name :
         {"corpus.json", "videos.jsonl", "scene_graphs.jsonl", "qa.jsonl", "programs.jsonl"}) {
        const auto p = dir / name;
        if (std::filesystem::exists(p)) hashes[name] = fnv1a64_hex(read_file(p));
    }
    return hashes;
}

}  // namespace videocot
