#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "rlas/abc/colony.hpp"
#include "rlas/neural/types.hpp"
#include "rlas/rl/trainer.hpp"

namespace rlas::pipeline {

/// Settings of the ABC pretraining stage (per-run, on the flat weight vector).
struct PretrainConfig {
    std::size_t population = 100;
    std::size_t limit = 0;
    std::size_t max_iterations = 1000000;
    std::size_t max_evaluations = 3000;
    double lower_bound = -1.0;
    double upper_bound = 1.0;
    double mutual_factor = 1.5;
    abc::Mode mode = abc::Mode::Mutual;
    std::size_t fitness_subsample = 256; // fixed training subset scored by the fitness
};

struct RunConfig {
    std::uint64_t seed = 0;
    neural::ModelDims model;
    PretrainConfig pretrain;
    rl::TrainConfig train;

    void validate() const;
    /// ColonyConfig for a weight vector of dimension `dimension`.
    abc::ColonyConfig colony(neural::Index dimension) const;
    /// TrainConfig with the run seed applied.
    rl::TrainConfig training() const;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// FNV-1a 64 of the canonical JSON text.
std::uint64_t config_hash(const RunConfig& cfg);
std::string hash_hex(std::uint64_t hash);

} // namespace rlas::pipeline
