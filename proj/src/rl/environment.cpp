#include "rlas/rl/environment.hpp"

#include <cmath>

namespace rlas::rl {

RewardOutcome reward(ClassTag tag, int action, int label, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in [0, 1]");
    const bool correct = action == label;
    if (tag == ClassTag::Minority) return correct ? RewardOutcome{1.0, false} : RewardOutcome{-1.0, true};
    return correct ? RewardOutcome{lambda, false} : RewardOutcome{-lambda, false};
}

int epsilon_greedy(const Eigen::VectorXd& q_values, double epsilon, Rng& rng) {
    if (q_values.size() != 2) throw ShapeError("expected two Q-values");
    if (epsilon > 0.0 && rng.uniform() < epsilon) return static_cast<int>(rng.below(2));
    return q_values(1) > q_values(0) ? 1 : 0;
}

EpisodeOutcome play_episode(std::span<const std::size_t> order, std::span<const LabeledPair> data, double lambda,
                            const ActionFn& act, const TransitionFn& on_transition) {
    EpisodeOutcome out;
    for (std::size_t t = 0; t < order.size(); ++t) {
        const std::size_t s = order[t];
        const auto& sample = data[s];
        const int a = act(s);
        const RewardOutcome r = reward(sample.tag(), a, sample.label, lambda);
        const bool last = t + 1 == order.size();
        Transition tr{s, a, r.reward, last ? s : order[t + 1], r.end || last};
        ++out.steps;
        out.cumulative_reward += r.reward;
        if (on_transition) on_transition(tr);
        if (r.end) {
            out.minority_miss = true;
            break;
        }
    }
    return out;
}

} // namespace rlas::rl
