#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rlas/neural/types.hpp"
#include "rlas/random.hpp"

namespace rlas::rl {

/// Positive (matched) pairs form the minority class, negatives the majority.
enum class ClassTag { Minority, Majority };

inline ClassTag class_of(int label) { return label == 1 ? ClassTag::Minority : ClassTag::Majority; }

/// One embedded training sample as seen by the agent.
struct LabeledPair {
    neural::EmbeddedPaird pair;
    int label = 0;
    ClassTag tag() const { return class_of(label); }
};

struct RewardOutcome {
    double reward = 0.0;
    bool end = false;
    bool operator==(const RewardOutcome&) const = default;
};

/// +1 / -1 for the minority class (a miss ends the episode), +lambda / -lambda
/// for the majority class.
RewardOutcome reward(ClassTag tag, int action, int label, double lambda);

/// Greedy action with probability 1 - epsilon, uniform otherwise. Ties go to 0.
int epsilon_greedy(const Eigen::VectorXd& q_values, double epsilon, Rng& rng);

struct Transition {
    std::size_t state = 0;      // dataset index of s_t
    int action = 0;
    double reward = 0.0;
    std::size_t next_state = 0; // dataset index of s_{t+1}; equals state when end
    bool end = false;
};

struct EpisodeOutcome {
    std::size_t steps = 0;
    double cumulative_reward = 0.0;
    bool minority_miss = false;
};

using ActionFn = std::function<int(std::size_t state)>;
using TransitionFn = std::function<void(const Transition&)>;

/// Walks `order` (dataset indices) once, acting with `act`, until the order is
/// exhausted or a minority sample is misclassified. The final transition of
/// an episode always carries end = true.
EpisodeOutcome play_episode(std::span<const std::size_t> order, std::span<const LabeledPair> data, double lambda,
                            const ActionFn& act, const TransitionFn& on_transition = {});

} // namespace rlas::rl
