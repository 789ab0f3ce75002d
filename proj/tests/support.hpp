#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "videocot/agents.hpp"
#include "videocot/corpus.hpp"

namespace testsupport {

/// Self-deleting temporary directory.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path() / "videocot-tests";
        std::filesystem::create_directories(base);
        static std::atomic<unsigned> counter{0};
        path_ = base / (tag + "-" + std::to_string(::getpid()) + "-" +
                        std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Two-action / three-object corpus with hand-picked numbers, used wherever a
/// predictable scene graph beats a generated one.
inline videocot::Corpus tiny_corpus() {
    using namespace videocot;
    Corpus corpus;
    corpus.coordinate_space = CoordSpace::pixel;

    VideoContext video;
    video.video_id = "vid-1";
    video.total_frames = 64;
    video.uri = "synthetic://vid-1";
    corpus.videos.push_back(video);

    SceneGraph sg;
    sg.video_id = "vid-1";

    ObjectTrack laptop;
    laptop.object_id = "o0";
    laptop.label = "laptop";
    for (int f = 4; f <= 9; ++f) {
        BoundingBox box;
        box.x_min = 100 + f;
        box.y_min = 50;
        box.x_max = 220 + f;
        box.y_max = 170;
        laptop.track[NormFrame{f}] = box;
    }
    sg.objects.push_back(laptop);

    ObjectTrack cup;
    cup.object_id = "o1";
    cup.label = "cup";
    {
        BoundingBox box;
        box.x_min = 300;
        box.y_min = 200;
        box.x_max = 360;
        box.y_max = 260;
        cup.track[NormFrame{20}] = box;
    }
    sg.objects.push_back(cup);

    ActionSpan taking;
    taking.label = "taking the laptop";
    taking.span = {NormFrame{4}, NormFrame{9}};
    taking.key_frames = {NormFrame{5}, NormFrame{8}};
    sg.actions.push_back(taking);

    ActionSpan drinking;
    drinking.label = "drinking from the cup";
    drinking.span = {NormFrame{18}, NormFrame{22}};
    drinking.key_frames = {NormFrame{20}};
    sg.actions.push_back(drinking);

    Relation rel;
    rel.subject_id = "o0";
    rel.predicate = "near";
    rel.object_id = "o1";
    rel.span = {NormFrame{18}, NormFrame{22}};
    sg.relations.push_back(rel);

    corpus.scene_graphs.emplace("vid-1", std::move(sg));

    QASample qa;
    qa.sample_id = "s1";
    qa.video_id = "vid-1";
    qa.question = "What object is visible while the person is taking the laptop?";
    qa.qtype = QType::open_ended;
    qa.gold_answer = "laptop";
    qa.source_dataset = "synthetic";
    corpus.samples.push_back(qa);
    corpus.gold_programs["s1"] =
        "clip = trim(video, \"taking the laptop\")\n"
        "boxes = find(clip, \"laptop\")\n"
        "answer(query(clip, question))\n";
    return corpus;
}

inline std::shared_ptr<const videocot::Corpus> shared(videocot::Corpus corpus) {
    return std::make_shared<const videocot::Corpus>(std::move(corpus));
}

}  // namespace testsupport
