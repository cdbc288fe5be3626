#include "rlas/pipeline/synthetic.hpp"

#include "rlas/random.hpp"

namespace rlas::pipeline {

namespace {

std::string topic_word(std::size_t topic, std::size_t word) {
    return "t" + std::to_string(topic) + "w" + std::to_string(word);
}

std::string filler_word(std::size_t i) { return "f" + std::to_string(i); }

void validate(const SyntheticOptions& s) {
    if (s.questions == 0 || s.candidates == 0 || s.topics < 2 || s.words_per_topic == 0 || s.embedding_dim < 1)
        throw ConfigError("degenerate synthetic task options");
    if (s.positives > s.candidates) throw ConfigError("more positives than candidates");
    if (s.filler_tokens > 0 && s.fillers == 0) throw ConfigError("filler tokens requested without filler words");
}

} // namespace

EmbeddingStore synthetic_embeddings(const SyntheticOptions& opts) {
    validate(opts);
    Rng rng(opts.seed);
    const Eigen::Index d = opts.embedding_dim;
    std::vector<std::string> tokens;
    Eigen::MatrixXd vectors(static_cast<Eigen::Index>(opts.topics * opts.words_per_topic + opts.fillers), d);
    Eigen::Index row = 0;
    for (std::size_t t = 0; t < opts.topics; ++t) {
        Eigen::VectorXd center(d);
        for (Eigen::Index j = 0; j < d; ++j) center(j) = rng.normal();
        for (std::size_t w = 0; w < opts.words_per_topic; ++w) {
            tokens.push_back(topic_word(t, w));
            for (Eigen::Index j = 0; j < d; ++j) vectors(row, j) = center(j) + opts.word_noise * rng.normal();
            ++row;
        }
    }
    for (std::size_t f = 0; f < opts.fillers; ++f) {
        tokens.push_back(filler_word(f));
        for (Eigen::Index j = 0; j < d; ++j) vectors(row, j) = opts.filler_scale * rng.normal();
        ++row;
    }
    return EmbeddingStore(std::move(tokens), std::move(vectors), "synthetic-seeded");
}

Dataset synthetic_dataset(const SyntheticOptions& opts, std::uint64_t sample_seed, const std::string& split) {
    validate(opts);
    Rng rng(sample_seed);
    Dataset ds;
    ds.name = "synthetic";
    ds.split = split;
    std::size_t line = 0;

    const auto sentence = [&](std::size_t topic) {
        std::vector<std::string> words{topic_word(topic, static_cast<std::size_t>(rng.below(opts.words_per_topic)))};
        for (std::size_t i = 0; i < opts.filler_tokens; ++i)
            words.push_back(filler_word(static_cast<std::size_t>(rng.below(opts.fillers))));
        rng.shuffle(std::span<std::string>(words));
        return words;
    };

    for (std::size_t q = 0; q < opts.questions; ++q) {
        const auto topic = static_cast<std::size_t>(rng.below(opts.topics));
        const std::string qid = split + "-q" + std::to_string(q);
        const auto question = sentence(topic);
        std::vector<int> labels(opts.candidates, 0);
        std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(opts.positives), 1);
        rng.shuffle(std::span<int>(labels));
        for (int label : labels) {
            std::size_t answer_topic = topic;
            if (label == 0) {
                answer_topic = static_cast<std::size_t>(rng.below(opts.topics - 1));
                if (answer_topic >= topic) ++answer_topic;
            }
            ds.records.push_back({qid, question, sentence(answer_topic), label, ++line});
        }
    }
    index_dataset(ds);
    return ds;
}

SyntheticTask make_synthetic_task(const SyntheticOptions& opts) {
    return {synthetic_dataset(opts, opts.seed ^ 0x5DEECE66DULL, "train"), synthetic_embeddings(opts)};
}

} // namespace rlas::pipeline
