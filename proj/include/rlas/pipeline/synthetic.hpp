#pragma once

#include <cstdint>

#include "rlas/pipeline/dataset.hpp"
#include "rlas/pipeline/embeddings.hpp"

namespace rlas::pipeline {

/// Toy answer-selection task. Every question mentions one topic word; its
/// correct answers mention another word of the same topic, the wrong ones a
/// word of a different topic. Topic words are noisy copies of a per-topic
/// center, so matching is learnable but not trivially separable.
struct SyntheticOptions {
    std::size_t questions = 200;
    std::size_t candidates = 10;  // answers per question
    std::size_t positives = 1;    // correct answers per question
    std::size_t topics = 20;
    std::size_t words_per_topic = 4;
    std::size_t fillers = 40;
    std::size_t filler_tokens = 2; // filler words added to every sentence
    Eigen::Index embedding_dim = 8;
    double word_noise = 0.5;   // spread of topic words around their center
    double filler_scale = 0.7; // spread of filler vectors
    std::uint64_t seed = 0;
};

struct SyntheticTask {
    Dataset dataset;
    EmbeddingStore embeddings;
};

/// Embedding table shared by every dataset drawn with the same options seed.
EmbeddingStore synthetic_embeddings(const SyntheticOptions& opts);

/// Dataset drawn with `sample_seed` over the vocabulary of `opts`.
Dataset synthetic_dataset(const SyntheticOptions& opts, std::uint64_t sample_seed, const std::string& split);

SyntheticTask make_synthetic_task(const SyntheticOptions& opts);

} // namespace rlas::pipeline
