#pragma once

#include "videocot/corpus.hpp"

namespace videocot {

/// Seed-deterministic synthetic scene-graph corpus: videos with annotated
/// non-overlapping actions and object tracks, QA pairs across six question
/// templates (open-ended and multiple-choice), and a gold decomposition
/// program per sample whose oracle execution reaches the gold answer.
struct SynthConfig {
    int videos = 50;
    int qa_per_video = 4;
    unsigned long long seed = 0;
    std::string dataset_name = "synthetic";
};

Corpus generate_synthetic_corpus(const SynthConfig& config);

}  // namespace videocot
