#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rlas/abc/layout.hpp"
#include "rlas/random.hpp"

namespace rlas::abc {

enum class Mode { Standard, Mutual };

/// Fitness to maximize; larger is better, expected to be finite and >= 0.
using FitnessFn = std::function<double(const WeightVector&)>;

struct ColonyConfig {
    std::size_t population = 100; // BN, number of food sources
    Index dimension = 0;          // D
    // Abandonment threshold; 0 selects population x dimension.
    std::size_t limit = 0;
    std::size_t max_iterations = 100;
    // Total fitness evaluations allowed, initial population included; 0 = no cap.
    std::size_t max_evaluations = 0;
    double lower_bound = -1.0;
    double upper_bound = 1.0;
    // Optional per-coordinate bounds; override the scalar bounds when set.
    WeightVector lower;
    WeightVector upper;
    double mutual_factor = 1.5; // F
    Mode mode = Mode::Mutual;
    std::uint64_t seed = 0;

    void validate() const;
    std::size_t effective_limit() const;
    WeightVector lower_bounds() const;
    WeightVector upper_bounds() const;
};

struct FoodSource {
    WeightVector position;
    double fitness = 0.0;
    std::size_t trials = 0;
};

struct Colony {
    std::vector<FoodSource> sources;
    WeightVector lower;
    WeightVector upper;
};

/// A neighbor candidate plus the random choices that produced it.
struct NeighborMove {
    WeightVector candidate;
    std::size_t partner = 0; // k
    Index coordinate = 0;    // j
    double phi = 0.0;
};

/// Uniform sample inside [lower, upper], coordinate-wise.
WeightVector sample_position(const WeightVector& lower, const WeightVector& upper, Rng& rng);

Colony init_population(const ColonyConfig& cfg, const FitnessFn& fitness, Rng& rng);

/// v^j = x_i^j + phi (x_i^j - x_k^j); other coordinates from x_i.
WeightVector perturb_standard(const WeightVector& x_i, const WeightVector& x_k, Index j, double phi);

/// Mutual-learning rule for coordinate j:
///   fit_i <  fit_k: v^j = x_i^j + phi (x_k^j - x_i^j)
///   fit_i >= fit_k: v^j = x_k^j + phi (x_i^j - x_k^j)
/// All other coordinates are copied from x_i.
WeightVector perturb_mutual(const WeightVector& x_i, double fit_i, const WeightVector& x_k, double fit_k, Index j,
                            double phi);

NeighborMove neighbor_standard(const Colony& colony, std::size_t i, Rng& rng);
NeighborMove neighbor_mutual(const Colony& colony, std::size_t i, Rng& rng, double factor);

/// p_i = fit_i / sum(fit). An all-zero input yields the uniform vector.
std::vector<double> selection_probabilities(std::span<const double> fitnesses);

struct IterationStats {
    std::size_t iteration = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    std::size_t abandonments = 0;
};

struct AbcResult {
    WeightVector best_position;
    double best_fitness = 0.0;
    std::vector<IterationStats> history; // entry 0 is the initial population
    std::size_t evaluations = 0;
};

using IterationObserver = std::function<void(const Colony&, const IterationStats&)>;

/// Employed, onlooker and scout phases until the iteration or evaluation
/// budget runs out. Returns the best position ever seen.
AbcResult run_abc(const FitnessFn& fitness, const ColonyConfig& cfg, const IterationObserver& observer = {});

} // namespace rlas::abc
