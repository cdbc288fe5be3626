#pragma once

#include <span>
#include <vector>

#include "rlas/abc/layout.hpp"
#include "rlas/random.hpp"
#include "rlas/rl/environment.hpp"

namespace rlas::abc {

/// 1 / (1 + sum_i (label_i - score_i)^2) with score = softmax(Q)(action 1)
/// under the weights decoded from `position`.
double training_fitness(const WeightVector& position, std::span<const rl::LabeledPair> samples,
                        const ParameterLayout& layout);

/// Fitness from precomputed predictions; shared by the pipeline and tests.
double fitness_from_predictions(std::span<const double> labels, std::span<const double> predictions);

/// First `count` indices of a seeded shuffle of [0, n), sorted ascending.
std::vector<std::size_t> frozen_subsample(std::size_t n, std::size_t count, std::uint64_t seed);

/// Uniform draw of a full weight vector inside [lower, upper].
WeightVector random_weights(const ParameterLayout& layout, double lower, double upper, Rng& rng);

} // namespace rlas::abc
