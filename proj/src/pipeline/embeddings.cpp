#include "rlas/pipeline/embeddings.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rlas/errors.hpp"

namespace rlas::pipeline {

EmbeddingStore::EmbeddingStore(std::vector<std::string> tokens, Eigen::MatrixXd vectors, std::string source)
    : tokens_(std::move(tokens)), vectors_(std::move(vectors)), source_(std::move(source)) {
    if (static_cast<Eigen::Index>(tokens_.size()) != vectors_.rows())
        throw ShapeError("embedding table has " + std::to_string(vectors_.rows()) + " rows for " +
                         std::to_string(tokens_.size()) + " tokens");
    if (vectors_.cols() < 1) throw ShapeError("embedding dimension must be positive");
    for (Eigen::Index i = 0; i < vectors_.rows(); ++i) {
        if (!index_.try_emplace(tokens_[static_cast<std::size_t>(i)], i).second)
            throw FormatError("duplicate embedding token '" + tokens_[static_cast<std::size_t>(i)] + "'");
    }
}

Eigen::VectorXd EmbeddingStore::lookup(const std::string& token) const {
    const auto it = index_.find(token);
    if (it == index_.end()) return Eigen::VectorXd::Zero(dim());
    return vectors_.row(it->second).transpose();
}

EmbeddingStore parse_embeddings(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError(name + ": missing header");
    std::istringstream header(line);
    long long vocab = -1, dim = -1;
    if (!(header >> vocab >> dim) || vocab < 0 || dim < 1)
        throw FormatError(name + ": header must be 'V D' with V >= 0 and D >= 1");

    std::vector<std::string> tokens;
    tokens.reserve(static_cast<std::size_t>(vocab));
    Eigen::MatrixXd vectors(vocab, dim);
    for (long long row = 0; row < vocab; ++row) {
        if (!std::getline(in, line))
            throw FormatError(name + ": expected " + std::to_string(vocab) + " vectors, found " + std::to_string(row));
        const auto where = name + ":" + std::to_string(row + 2);
        std::istringstream fields(line);
        std::string token;
        if (!(fields >> token)) throw FormatError(where + ": empty line");
        std::string value;
        long long col = 0;
        while (fields >> value) {
            if (col >= dim) throw FormatError(where + ": more than " + std::to_string(dim) + " values");
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec != std::errc() || ptr != value.data() + value.size())
                throw FormatError(where + ": bad number '" + value + "'");
            vectors(row, col++) = v;
        }
        if (col != dim)
            throw FormatError(where + ": expected " + std::to_string(dim) + " values, found " + std::to_string(col));
        tokens.push_back(token);
    }
    return EmbeddingStore(std::move(tokens), std::move(vectors), name);
}

EmbeddingStore load_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open embeddings " + path);
    return parse_embeddings(in, path);
}

void write_embeddings(std::ostream& out, const EmbeddingStore& store) {
    out << store.vocabulary_size() << ' ' << store.dim() << '\n';
    char buf[32];
    for (const auto& token : store.tokens()) {
        out << token;
        const Eigen::VectorXd v = store.lookup(token);
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v(j));
            out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
        }
        out << '\n';
    }
}

neural::Sequence<double> embed_tokens(const std::vector<std::string>& tokens, const EmbeddingStore& store,
                                      Eigen::Index max_length) {
    if (tokens.empty()) throw InputError("cannot embed an empty token list");
    const auto n = std::min<Eigen::Index>(static_cast<Eigen::Index>(tokens.size()), max_length);
    neural::Sequence<double> seq(store.dim(), n);
    for (Eigen::Index t = 0; t < n; ++t) seq.col(t) = store.lookup(tokens[static_cast<std::size_t>(t)]);
    return seq;
}

neural::EmbeddedPaird embed_pair(const QARecord& record, const EmbeddingStore& store, Eigen::Index max_length) {
    return {embed_tokens(record.question, store, max_length), embed_tokens(record.answer, store, max_length)};
}

std::vector<rl::LabeledPair> embed_dataset(const Dataset& ds, const EmbeddingStore& store, Eigen::Index max_length) {
    std::vector<rl::LabeledPair> out;
    out.reserve(ds.records.size());
    for (const auto& r : ds.records) out.push_back({embed_pair(r, store, max_length), r.label});
    return out;
}

} // namespace rlas::pipeline
