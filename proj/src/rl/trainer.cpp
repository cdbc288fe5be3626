#include "rlas/rl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rlas::rl {

void TrainConfig::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in [0, 1]");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
    if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 && epsilon_end <= 1.0))
        throw ConfigError("epsilon schedule must stay within [0, 1]");
    if (epsilon_decay_fraction < 0.0) throw ConfigError("epsilon decay fraction must be >= 0");
    if (batch_size == 0) throw ConfigError("batch size must be positive");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning rate must be positive");
    if (replay_capacity == 0) throw ConfigError("replay capacity must be positive");
    if (target_refresh == 0) throw ConfigError("target refresh interval must be positive");
}

double TrainConfig::epsilon_at(std::size_t episode) const {
    const double span = epsilon_decay_fraction * static_cast<double>(episodes);
    if (span <= 0.0) return epsilon_end;
    const double progress = std::min(1.0, static_cast<double>(episode) / span);
    return epsilon_start + (epsilon_end - epsilon_start) * progress;
}

double td_target(const Transition& t, double gamma, const std::function<double(std::size_t)>& max_target_q) {
    if (t.end) return t.reward;
    return t.reward + gamma * max_target_q(t.next_state);
}

LossResult dqn_loss(std::span<const Transition> batch, std::span<const LabeledPair> data, const ModelParamsd& params,
                    const ModelParamsd& target, double gamma) {
    const auto max_q = [&](std::size_t s) { return neural::policy_forward(data[s].pair, target).maxCoeff(); };
    return dqn_loss(batch, data, params, max_q, gamma);
}

LossResult dqn_loss(std::span<const Transition> batch, std::span<const LabeledPair> data, const ModelParamsd& params,
                    const std::function<double(std::size_t)>& max_q, double gamma) {
    if (batch.empty()) throw InputError("empty mini-batch");
    LossResult out{0.0, neural::zeros_like(params)};
    Eigen::VectorXd d_q(2);
    for (const Transition& t : batch) {
        const double y = td_target(t, gamma, max_q);
        const auto trace = neural::policy_trace(data[t.state].pair, params);
        const double err = y - trace.q_values()(t.action);
        out.loss += err * err;
        d_q.setZero();
        d_q(t.action) = -2.0 * err;
        neural::accumulate_policy_gradient(trace, d_q, params, out.gradients);
    }
    return out;
}

double score(const neural::EmbeddedPaird& pair, const ModelParamsd& params) {
    return neural::match_probability<double>(neural::policy_forward(pair, params));
}

TrainResult train(std::span<const LabeledPair> data, const ModelParamsd& init, const TrainConfig& cfg,
                  const TrainHooks& hooks) {
    cfg.validate();
    if (data.empty()) throw InputError("training set is empty");

    Rng rng(cfg.seed);
    TrainResult result{init, {}, 0};
    ModelParamsd& params = result.params;
    ModelParamsd target = init;
    ReplayMemory memory(cfg.replay_capacity);
    // max_a' Q_target(s, a') per state, valid until the next target refresh
    std::vector<double> target_max(data.size());
    std::vector<char> cached(data.size(), 0);
    const auto max_target_q = [&](std::size_t s) {
        if (!cached[s]) {
            target_max[s] = neural::policy_forward(data[s].pair, target).maxCoeff();
            cached[s] = 1;
        }
        return target_max[s];
    };

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t e = 0; e < cfg.episodes; ++e) {
        const double epsilon = cfg.epsilon_at(e);
        rng.shuffle(std::span<std::size_t>(order));
        double loss_sum = 0.0;
        std::size_t loss_count = 0;

        const auto act = [&](std::size_t s) {
            return epsilon_greedy(neural::policy_forward(data[s].pair, params), epsilon, rng);
        };
        const auto learn = [&](const Transition& t) {
            memory.push(t);
            const auto batch = memory.sample(cfg.batch_size, rng);
            LossResult l = dqn_loss(batch, data, params, max_target_q, cfg.gamma);
            if (!std::isfinite(l.loss) || !neural::all_finite(l.gradients)) {
                if (hooks.on_nonfinite) hooks.on_nonfinite(params);
                throw NumericError("non-finite loss in episode " + std::to_string(e));
            }
            neural::axpy(-cfg.learning_rate, l.gradients, params);
            loss_sum += l.loss;
            ++loss_count;
            if (++result.gradient_steps % cfg.target_refresh == 0) {
                target = params;
                std::fill(cached.begin(), cached.end(), 0);
            }
        };

        const EpisodeOutcome outcome = play_episode(order, data, cfg.lambda, act, learn);
        EpisodeLog entry{e, outcome.steps, outcome.cumulative_reward,
                         loss_count ? loss_sum / static_cast<double>(loss_count) : 0.0, epsilon};
        result.log.push_back(entry);
        if (hooks.on_episode) hooks.on_episode(entry, params);
    }
    return result;
}

ModelParamsd train_mse_baseline(std::span<const LabeledPair> data, const ModelParamsd& init, std::size_t steps,
                                std::size_t batch_size, double learning_rate, std::uint64_t seed) {
    if (data.empty()) throw InputError("training set is empty");
    if (batch_size == 0) throw ConfigError("batch size must be positive");
    Rng rng(seed);
    ModelParamsd params = init;
    std::vector<std::size_t> all(data.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const std::size_t k = std::min(batch_size, data.size());
    Eigen::VectorXd d_q(2);
    for (std::size_t step = 0; step < steps; ++step) {
        // partial Fisher-Yates: the first k entries become the mini-batch
        for (std::size_t i = 0; i < k; ++i) {
            const auto j = i + static_cast<std::size_t>(rng.below(all.size() - i));
            std::swap(all[i], all[j]);
        }
        auto grads = neural::zeros_like(params);
        for (std::size_t i = 0; i < k; ++i) {
            const auto& sample = data[all[i]];
            const auto trace = neural::policy_trace(sample.pair, params);
            const double p = neural::match_probability<double>(trace.q_values());
            const double d = -2.0 * (static_cast<double>(sample.label) - p) * p * (1.0 - p);
            d_q << -d, d;
            neural::accumulate_policy_gradient(trace, d_q, params, grads);
        }
        neural::axpy(-learning_rate, grads, params);
    }
    return params;
}

} // namespace rlas::rl
