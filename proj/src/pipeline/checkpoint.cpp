#include "rlas/pipeline/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace rlas::pipeline {

namespace {

constexpr char kMagic[8] = {'R', 'L', 'A', 'S', 'C', 'K', 'P', 'T'};

template <typename T>
void put_le(std::string& out, T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

class Reader {
public:
    Reader(const std::vector<char>& bytes, std::string path) : bytes_(bytes), path_(std::move(path)) {}

    template <typename T>
    T le() {
        need(sizeof(T));
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i)
            v |= static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += sizeof(T);
        return v;
    }

    std::string text() {
        const auto n = le<std::uint32_t>();
        need(n);
        std::string s(bytes_.data() + pos_, n);
        pos_ += n;
        return s;
    }

    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) throw FormatError(path_ + ": truncated checkpoint");
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }
    std::size_t pos() const { return pos_; }
    void skip(std::size_t n) { pos_ += n; }

private:
    const std::vector<char>& bytes_;
    std::string path_;
    std::size_t pos_ = 0;
};

} // namespace

std::size_t checkpoint_header_size(const RunConfig& cfg) {
    const abc::ParameterLayout layout(cfg.model);
    return sizeof kMagic + 4 + 8 + 8 + 4 + layout.descriptor().size() + 4 + to_json(cfg).dump().size();
}

void save_checkpoint(const std::string& path, const abc::WeightVector& weights, const RunConfig& cfg) {
    const abc::ParameterLayout layout(cfg.model);
    if (weights.size() != layout.size())
        throw ShapeError("checkpoint weights have length " + std::to_string(weights.size()) + ", layout needs " +
                         std::to_string(layout.size()));
    const std::string descriptor = layout.descriptor();
    const std::string config_text = to_json(cfg).dump();

    std::string out(kMagic, sizeof kMagic);
    put_le<std::uint32_t>(out, kCheckpointVersion);
    put_le<std::uint64_t>(out, config_hash(cfg));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(layout.size()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(descriptor.size()));
    out += descriptor;
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(config_text.size()));
    out += config_text;
    for (Eigen::Index i = 0; i < weights.size(); ++i) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(weights(i)));

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write checkpoint " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw InputError("failed writing checkpoint " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open checkpoint " + path);
    const std::vector<char> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    Reader r(bytes, path);
    r.need(sizeof kMagic);
    if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) throw FormatError(path + ": not a checkpoint file");
    r.skip(sizeof kMagic);
    const auto version = r.le<std::uint32_t>();
    if (version != kCheckpointVersion)
        throw FormatError(path + ": unsupported checkpoint version " + std::to_string(version));

    Checkpoint ck;
    ck.hash = r.le<std::uint64_t>();
    const auto d = r.le<std::uint64_t>();
    ck.descriptor = r.text();
    const std::string config_text = r.text();
    if (r.remaining() != d * 8)
        throw FormatError(path + ": expected " + std::to_string(d) + " weights, file holds " +
                          std::to_string(r.remaining()) + " bytes");

    try {
        ck.config = config_from_json(nlohmann::json::parse(config_text));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ": unreadable embedded config: " + e.what());
    }
    if (config_hash(ck.config) != ck.hash) throw IncompatibleError(path + ": config hash mismatch");
    const abc::ParameterLayout layout(ck.config.model);
    if (layout.descriptor() != ck.descriptor || static_cast<std::uint64_t>(layout.size()) != d)
        throw IncompatibleError(path + ": layout descriptor does not match the embedded config");

    ck.weights.resize(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < ck.weights.size(); ++i) ck.weights(i) = std::bit_cast<double>(r.le<std::uint64_t>());
    return ck;
}

Checkpoint load_checkpoint(const std::string& path, const neural::ModelDims& expected) {
    Checkpoint ck = load_checkpoint(path);
    if (!(ck.config.model == expected)) {
        throw IncompatibleError(path + ": checkpoint model (" + ck.descriptor + ") differs from expected (" +
                                abc::ParameterLayout(expected).descriptor() + ")");
    }
    return ck;
}

} // namespace rlas::pipeline
