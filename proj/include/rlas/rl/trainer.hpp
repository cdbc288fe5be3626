#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rlas/neural/policy.hpp"
#include "rlas/rl/environment.hpp"
#include "rlas/rl/replay_memory.hpp"

namespace rlas::rl {

using neural::Gradientsd;
using neural::ModelParamsd;

struct TrainConfig {
    double lambda = 0.5;
    double gamma = 0.9;
    std::size_t episodes = 200;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    double epsilon_decay_fraction = 0.3; // share of episodes over which epsilon decays linearly
    std::size_t batch_size = 128;
    double learning_rate = 1e-3;
    std::size_t replay_capacity = 10000;
    std::size_t target_refresh = 200; // gradient steps between target-network copies
    std::uint64_t seed = 0;

    void validate() const;
    /// Exploration rate used during episode `episode` (0-based).
    double epsilon_at(std::size_t episode) const;
};

/// r if the transition ends the episode, else r + gamma * max_a' Q_target(s', a').
double td_target(const Transition& t, double gamma, const std::function<double(std::size_t)>& max_target_q);

struct LossResult {
    double loss = 0.0;
    Gradientsd gradients;
};

/// Sum over the batch of (y - Q(s, a))^2 with y held constant; gradients are
/// taken w.r.t. `params` only.
LossResult dqn_loss(std::span<const Transition> batch, std::span<const LabeledPair> data, const ModelParamsd& params,
                    const ModelParamsd& target, double gamma);

/// Same loss with max_a' Q_target(s', a') supplied by the caller.
LossResult dqn_loss(std::span<const Transition> batch, std::span<const LabeledPair> data, const ModelParamsd& params,
                    const std::function<double(std::size_t)>& max_target_q, double gamma);

/// Probability that the pair is a true match: softmax(Q) of action 1.
double score(const neural::EmbeddedPaird& pair, const ModelParamsd& params);

struct EpisodeLog {
    std::size_t episode = 0;
    std::size_t steps = 0;
    double cumulative_reward = 0.0;
    double mean_loss = 0.0;
    double epsilon = 0.0;
};

struct TrainHooks {
    /// Called after every episode with the current weights.
    std::function<void(const EpisodeLog&, const ModelParamsd&)> on_episode;
    /// Called with the offending weights before a non-finite loss is reported.
    std::function<void(const ModelParamsd&)> on_nonfinite;
};

struct TrainResult {
    ModelParamsd params;
    std::vector<EpisodeLog> log;
    std::size_t gradient_steps = 0;
};

/// Episodic deep Q-learning over the shuffled dataset with replay memory and
/// a periodically refreshed target network.
TrainResult train(std::span<const LabeledPair> data, const ModelParamsd& init, const TrainConfig& cfg,
                  const TrainHooks& hooks = {});

/// Supervised reference: SGD on sum (label - score)^2 over uniformly sampled
/// mini-batches for a fixed number of gradient steps.
ModelParamsd train_mse_baseline(std::span<const LabeledPair> data, const ModelParamsd& init, std::size_t steps,
                                std::size_t batch_size, double learning_rate, std::uint64_t seed);

} // namespace rlas::rl
