#include "rlas/abc/fitness.hpp"

#include <algorithm>
#include <numeric>

#include "rlas/abc/colony.hpp"
#include "rlas/neural/policy.hpp"

namespace rlas::abc {

double fitness_from_predictions(std::span<const double> labels, std::span<const double> predictions) {
    if (labels.size() != predictions.size()) throw ShapeError("labels and predictions differ in length");
    double sse = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double e = labels[i] - predictions[i];
        sse += e * e;
    }
    return 1.0 / (1.0 + sse);
}

double training_fitness(const WeightVector& position, std::span<const rl::LabeledPair> samples,
                        const ParameterLayout& layout) {
    if (samples.empty()) throw InputError("fitness needs at least one sample");
    const auto params = layout.decode(position);
    double sse = 0.0;
    for (const auto& s : samples) {
        const double p = neural::match_probability<double>(neural::policy_forward(s.pair, params));
        const double e = static_cast<double>(s.label) - p;
        sse += e * e;
    }
    return 1.0 / (1.0 + sse);
}

std::vector<std::size_t> frozen_subsample(std::size_t n, std::size_t count, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (count >= n) return idx;
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(idx));
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    return idx;
}

WeightVector random_weights(const ParameterLayout& layout, double lower, double upper, Rng& rng) {
    return sample_position(WeightVector::Constant(layout.size(), lower), WeightVector::Constant(layout.size(), upper),
                           rng);
}

} // namespace rlas::abc
