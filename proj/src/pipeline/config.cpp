#include "rlas/pipeline/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace rlas::pipeline {

using nlohmann::json;

void RunConfig::validate() const {
    model.validate();
    colony(1).validate();
    if (pretrain.fitness_subsample == 0) throw ConfigError("fitness subsample must be positive");
    training().validate();
}

abc::ColonyConfig RunConfig::colony(neural::Index dimension) const {
    abc::ColonyConfig c;
    c.population = pretrain.population;
    c.dimension = dimension;
    c.limit = pretrain.limit;
    c.max_iterations = pretrain.max_iterations;
    c.max_evaluations = pretrain.max_evaluations;
    c.lower_bound = pretrain.lower_bound;
    c.upper_bound = pretrain.upper_bound;
    c.mutual_factor = pretrain.mutual_factor;
    c.mode = pretrain.mode;
    c.seed = seed;
    return c;
}

rl::TrainConfig RunConfig::training() const {
    rl::TrainConfig t = train;
    t.seed = seed;
    return t;
}

json to_json(const RunConfig& cfg) {
    const auto& m = cfg.model;
    const auto& p = cfg.pretrain;
    const auto& t = cfg.train;
    return json{
        {"seed", cfg.seed},
        {"model",
         {{"embedding_dim", m.embedding_dim},
          {"hidden", m.hidden},
          {"attention", m.attention},
          {"depth", m.depth},
          {"dense_hidden", m.dense_hidden},
          {"max_length", m.max_length}}},
        {"pretrain",
         {{"population", p.population},
          {"limit", p.limit},
          {"max_iterations", p.max_iterations},
          {"max_evaluations", p.max_evaluations},
          {"lower_bound", p.lower_bound},
          {"upper_bound", p.upper_bound},
          {"mutual_factor", p.mutual_factor},
          {"mode", p.mode == abc::Mode::Mutual ? "mutual" : "standard"},
          {"fitness_subsample", p.fitness_subsample}}},
        {"train",
         {{"lambda", t.lambda},
          {"gamma", t.gamma},
          {"episodes", t.episodes},
          {"epsilon_start", t.epsilon_start},
          {"epsilon_end", t.epsilon_end},
          {"epsilon_decay_fraction", t.epsilon_decay_fraction},
          {"batch_size", t.batch_size},
          {"learning_rate", t.learning_rate},
          {"replay_capacity", t.replay_capacity},
          {"target_refresh", t.target_refresh}}},
    };
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw ConfigError("unknown config key " + where + "." + key);
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) {
        try {
            out = it->get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config key '") + key + "': " + e.what());
        }
    }
}

} // namespace

RunConfig config_from_json(const json& j) {
    RunConfig cfg;
    reject_unknown(j, {"seed", "model", "pretrain", "train"}, "config");
    read(j, "seed", cfg.seed);
    if (auto it = j.find("model"); it != j.end()) {
        const json& m = *it;
        reject_unknown(m, {"embedding_dim", "hidden", "attention", "depth", "dense_hidden", "max_length"}, "model");
        read(m, "embedding_dim", cfg.model.embedding_dim);
        read(m, "hidden", cfg.model.hidden);
        read(m, "attention", cfg.model.attention);
        read(m, "depth", cfg.model.depth);
        read(m, "dense_hidden", cfg.model.dense_hidden);
        read(m, "max_length", cfg.model.max_length);
    }
    if (auto it = j.find("pretrain"); it != j.end()) {
        const json& p = *it;
        reject_unknown(p,
                       {"population", "limit", "max_iterations", "max_evaluations", "lower_bound", "upper_bound",
                        "mutual_factor", "mode", "fitness_subsample"},
                       "pretrain");
        read(p, "population", cfg.pretrain.population);
        read(p, "limit", cfg.pretrain.limit);
        read(p, "max_iterations", cfg.pretrain.max_iterations);
        read(p, "max_evaluations", cfg.pretrain.max_evaluations);
        read(p, "lower_bound", cfg.pretrain.lower_bound);
        read(p, "upper_bound", cfg.pretrain.upper_bound);
        read(p, "mutual_factor", cfg.pretrain.mutual_factor);
        read(p, "fitness_subsample", cfg.pretrain.fitness_subsample);
        std::string mode = cfg.pretrain.mode == abc::Mode::Mutual ? "mutual" : "standard";
        read(p, "mode", mode);
        if (mode == "mutual")
            cfg.pretrain.mode = abc::Mode::Mutual;
        else if (mode == "standard")
            cfg.pretrain.mode = abc::Mode::Standard;
        else
            throw ConfigError("pretrain.mode must be 'mutual' or 'standard'");
    }
    if (auto it = j.find("train"); it != j.end()) {
        const json& t = *it;
        reject_unknown(t,
                       {"lambda", "gamma", "episodes", "epsilon_start", "epsilon_end", "epsilon_decay_fraction",
                        "batch_size", "learning_rate", "replay_capacity", "target_refresh"},
                       "train");
        read(t, "lambda", cfg.train.lambda);
        read(t, "gamma", cfg.train.gamma);
        read(t, "episodes", cfg.train.episodes);
        read(t, "epsilon_start", cfg.train.epsilon_start);
        read(t, "epsilon_end", cfg.train.epsilon_end);
        read(t, "epsilon_decay_fraction", cfg.train.epsilon_decay_fraction);
        read(t, "batch_size", cfg.train.batch_size);
        read(t, "learning_rate", cfg.train.learning_rate);
        read(t, "replay_capacity", cfg.train.replay_capacity);
        read(t, "target_refresh", cfg.train.target_refresh);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return config_from_json(j);
}

std::uint64_t config_hash(const RunConfig& cfg) {
    const std::string text = to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t hash) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

} // namespace rlas::pipeline
