#pragma once

#include <cstdint>
#include <string>

#include "rlas/abc/layout.hpp"
#include "rlas/pipeline/config.hpp"

namespace rlas::pipeline {

// Binary layout (all integers little-endian):
//   "RLASCKPT"          8 bytes magic
//   u32 version         currently 1
//   u64 config hash     FNV-1a of the embedded config JSON
//   u64 D               number of weights
//   u32 n, n bytes      layout descriptor
//   u32 m, m bytes      config JSON
//   D x f64             weights in layout order, IEEE-754 little-endian

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    abc::WeightVector weights;
    RunConfig config;
    std::string descriptor;
    std::uint64_t hash = 0;
};

/// Size in bytes of everything before the weights.
std::size_t checkpoint_header_size(const RunConfig& cfg);

void save_checkpoint(const std::string& path, const abc::WeightVector& weights, const RunConfig& cfg);

/// Reads and verifies a checkpoint. Throws FormatError on malformed or
/// truncated files and IncompatibleError on hash or layout mismatch.
Checkpoint load_checkpoint(const std::string& path);

/// As above, additionally requiring the stored model dims to equal `expected`.
Checkpoint load_checkpoint(const std::string& path, const neural::ModelDims& expected);

} // namespace rlas::pipeline
