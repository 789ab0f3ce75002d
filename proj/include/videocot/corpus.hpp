#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "videocot/model.hpp"

namespace videocot {

/// An on-disk corpus directory:
///   videos.jsonl        one VideoContext per line
///   scene_graphs.jsonl  one SceneGraph per line
///   qa.jsonl            one QASample per line
///   programs.jsonl      optional {sample_id, code} gold decompositions
///   corpus.json         optional metadata ({"coordinate_space": "pixel"})
struct Corpus {
    CoordSpace coordinate_space = CoordSpace::pixel;
    std::vector<VideoContext> videos;
    std::map<std::string, SceneGraph> scene_graphs;   // by video_id
    std::vector<QASample> samples;                    // corpus order
    std::map<std::string, std::string> gold_programs; // sample_id -> code

    const VideoContext& video(const std::string& video_id) const;
    const SceneGraph* scene_graph(const std::string& video_id) const;
    const QASample& sample(const std::string& sample_id) const;
    const std::string* gold_program(const std::string& sample_id) const;

    bool has_scene_graphs() const { return !scene_graphs.empty(); }
    bool has_gold_programs() const { return !gold_programs.empty(); }

    /// Structural checks beyond per-record parsing: unique ids, QA referencing
    /// known videos, scene-graph invariants, single coordinate space.
    ValidationReport validate() const;

private:
    mutable std::map<std::string, size_t> video_index_;
    mutable std::map<std::string, size_t> sample_index_;
    void build_index() const;
};

Corpus load_corpus(const std::filesystem::path& dir);
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);

/// Stable content hash over the corpus files that exist in `dir`, for run
/// manifests.
std::map<std::string, std::string> corpus_file_hashes(const std::filesystem::path& dir);

}  // namespace videocot
