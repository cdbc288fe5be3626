#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "rlas/neural/types.hpp"
#include "rlas/pipeline/dataset.hpp"
#include "rlas/rl/environment.hpp"

namespace rlas::pipeline {

/// Token -> vector table. Unknown tokens map to the zero vector.
class EmbeddingStore {
public:
    EmbeddingStore(std::vector<std::string> tokens, Eigen::MatrixXd vectors, std::string source = "file");

    Eigen::Index dim() const { return vectors_.cols(); }
    std::size_t vocabulary_size() const { return tokens_.size(); }
    const std::string& source() const { return source_; }
    const std::vector<std::string>& tokens() const { return tokens_; }

    bool contains(const std::string& token) const { return index_.count(token) != 0; }
    /// Stored vector of `token`, or zeros when it is out of vocabulary.
    Eigen::VectorXd lookup(const std::string& token) const;

private:
    std::vector<std::string> tokens_;
    Eigen::MatrixXd vectors_; // one row per token
    std::unordered_map<std::string, Eigen::Index> index_;
    std::string source_;
};

/// Text format: header "V D", then V lines "token v_1 ... v_D".
EmbeddingStore parse_embeddings(std::istream& in, const std::string& name = "embeddings");
EmbeddingStore load_embeddings(const std::string& path);
void write_embeddings(std::ostream& out, const EmbeddingStore& store);

/// Embeds one token list as a sequence (one column per token), keeping at
/// most `max_length` leading tokens.
neural::Sequence<double> embed_tokens(const std::vector<std::string>& tokens, const EmbeddingStore& store,
                                      Eigen::Index max_length);

neural::EmbeddedPaird embed_pair(const QARecord& record, const EmbeddingStore& store, Eigen::Index max_length);

std::vector<rl::LabeledPair> embed_dataset(const Dataset& ds, const EmbeddingStore& store, Eigen::Index max_length);

} // namespace rlas::pipeline
