// Command-line front end: pretraining, training, evaluation and the sweep
// experiments. Every artifact lands in --out and carries the config hash.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "rlas/pipeline/checkpoint.hpp"
#include "rlas/pipeline/experiments.hpp"
#include "rlas/pipeline/synthetic.hpp"

namespace fs = std::filesystem;
using namespace rlas;
using namespace rlas::pipeline;

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string dataset;
    std::string eval_dataset;
    std::string embeddings;
    std::string init;
    std::string out = ".";
    std::optional<double> lambda;
    std::optional<double> factor;
    std::optional<std::uint32_t> episodes;
    // bench-abc and make-synthetic
    std::size_t seeds = 10;
    std::size_t questions = 200;
};

RunConfig resolve_config(const Options& o) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (o.lambda) cfg.train.lambda = *o.lambda;
    if (o.factor) cfg.pretrain.mutual_factor = *o.factor;
    if (o.episodes) cfg.train.episodes = *o.episodes;
    cfg.validate();
    return cfg;
}

fs::path out_dir(const Options& o) {
    fs::path dir(o.out);
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_csv(const fs::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path.string());
    return f;
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw ConfigError(std::string(flag) + " is required for this subcommand");
}

PreparedData load_prepared(const std::string& dataset, const EmbeddingStore& store, const RunConfig& cfg) {
    return prepare(load_dataset(dataset), store, cfg.model);
}

// Weights from --init, or a seeded uniform draw inside the pretraining bounds.
abc::WeightVector initial_weights(const Options& o, const RunConfig& cfg) {
    const abc::ParameterLayout layout(cfg.model);
    if (!o.init.empty()) return load_checkpoint(o.init, cfg.model).weights;
    Rng rng(cfg.seed ^ 0x9E3779B97F4A7C15ULL);
    return abc::random_weights(layout, cfg.pretrain.lower_bound, cfg.pretrain.upper_bound, rng);
}

void announce(const fs::path& p) { std::cout << p.string() << '\n'; }

int cmd_pretrain(const Options& o) {
    require(o.dataset, "--dataset");
    require(o.embeddings, "--embeddings");
    const RunConfig cfg = resolve_config(o);
    const auto hash = hash_hex(config_hash(cfg));
    const auto data = load_prepared(o.dataset, load_embeddings(o.embeddings), cfg);
    const auto res = pretrain(data, cfg);
    const auto dir = out_dir(o);
    save_checkpoint((dir / "pretrained.ckpt").string(), res.weights, cfg);
    auto csv = open_csv(dir / "pretrain_iterations.csv");
    write_iteration_csv(csv, res.history, hash);
    announce(dir / "pretrained.ckpt");
    announce(dir / "pretrain_iterations.csv");
    return 0;
}

int cmd_train(const Options& o) {
    require(o.dataset, "--dataset");
    require(o.embeddings, "--embeddings");
    const RunConfig cfg = resolve_config(o);
    const auto hash = hash_hex(config_hash(cfg));
    const abc::ParameterLayout layout(cfg.model);
    const auto data = load_prepared(o.dataset, load_embeddings(o.embeddings), cfg);
    const auto init = layout.decode(initial_weights(o, cfg));
    const auto dir = out_dir(o);
    const auto ckpt = (dir / "policy.ckpt").string();

    rl::TrainHooks hooks;
    hooks.on_episode = [&](const rl::EpisodeLog&, const neural::ModelParamsd& p) {
        save_checkpoint(ckpt, layout.encode(p), cfg);
    };
    hooks.on_nonfinite = [&](const neural::ModelParamsd& p) {
        save_checkpoint((dir / "nonfinite.ckpt").string(), layout.encode(p), cfg);
        std::cerr << "offending weights written to " << (dir / "nonfinite.ckpt").string() << '\n';
    };
    const auto res = rl::train(data.samples, init, cfg.training(), hooks);
    save_checkpoint(ckpt, layout.encode(res.params), cfg);
    auto csv = open_csv(dir / "episodes.csv");
    write_episode_csv(csv, res.log, hash);
    announce(ckpt);
    announce(dir / "episodes.csv");
    return 0;
}

int cmd_evaluate(const Options& o) {
    require(o.dataset, "--dataset");
    require(o.embeddings, "--embeddings");
    require(o.init, "--init");
    const RunConfig cfg = resolve_config(o);
    const auto ck = load_checkpoint(o.init, cfg.model);
    const auto data = load_prepared(o.dataset, load_embeddings(o.embeddings), cfg);
    const auto report = evaluate(data, abc::ParameterLayout(cfg.model).decode(ck.weights));
    const auto dir = out_dir(o);
    auto csv = open_csv(dir / "report.csv");
    write_report_csv(csv, data.dataset.name, data.dataset.split, report, hash_hex(ck.hash));
    announce(dir / "report.csv");
    return 0;
}

int cmd_sweep_lambda(const Options& o) {
    require(o.dataset, "--dataset");
    require(o.embeddings, "--embeddings");
    const RunConfig cfg = resolve_config(o);
    const auto store = load_embeddings(o.embeddings);
    const auto train = load_prepared(o.dataset, store, cfg);
    const auto eval = o.eval_dataset.empty() ? train : load_prepared(o.eval_dataset, store, cfg);
    const auto rows = sweep_lambda(train, eval, initial_weights(o, cfg), cfg);
    const auto dir = out_dir(o);
    auto csv = open_csv(dir / "sweep_lambda.csv");
    write_lambda_csv(csv, rows, hash_hex(config_hash(cfg)));
    announce(dir / "sweep_lambda.csv");
    return 0;
}

int cmd_sweep_f(const Options& o) {
    require(o.dataset, "--dataset");
    require(o.embeddings, "--embeddings");
    const RunConfig cfg = resolve_config(o);
    const auto store = load_embeddings(o.embeddings);
    const auto train = load_prepared(o.dataset, store, cfg);
    const auto eval = o.eval_dataset.empty() ? train : load_prepared(o.eval_dataset, store, cfg);
    const auto rows = sweep_factor(train, eval, cfg);
    const auto dir = out_dir(o);
    auto csv = open_csv(dir / "sweep_f.csv");
    write_factor_csv(csv, rows, hash_hex(config_hash(cfg)));
    announce(dir / "sweep_f.csv");
    return 0;
}

int cmd_bench_abc(const Options& o) {
    const RunConfig cfg = resolve_config(o);
    BenchConfig b;
    b.seeds = o.seeds;
    b.first_seed = cfg.seed;
    b.mutual_factor = cfg.pretrain.mutual_factor;
    const auto rows = bench_abc(b);
    const auto dir = out_dir(o);
    auto csv = open_csv(dir / "bench_abc.csv");
    write_bench_csv(csv, rows, hash_hex(config_hash(cfg)));
    announce(dir / "bench_abc.csv");
    return 0;
}

int cmd_make_synthetic(const Options& o) {
    const RunConfig cfg = resolve_config(o);
    SyntheticOptions opts;
    opts.questions = o.questions;
    opts.embedding_dim = cfg.model.embedding_dim;
    opts.seed = cfg.seed;
    const auto dir = out_dir(o);
    const auto write = [&](const Dataset& ds, const fs::path& p) {
        std::ofstream f(p, std::ios::binary);
        write_dataset(f, ds);
        announce(p);
    };
    write(synthetic_dataset(opts, cfg.seed * 2 + 1, "train"), dir / "train.tsv");
    write(synthetic_dataset(opts, cfg.seed * 2 + 2, "test"), dir / "test.tsv");
    std::ofstream f(dir / "embeddings.txt", std::ios::binary);
    write_embeddings(f, synthetic_embeddings(opts));
    announce(dir / "embeddings.txt");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Answer selection with colony-pretrained, reinforcement-trained BLSTM policies"};
    app.require_subcommand(1);
    Options o;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON run configuration");
        sub->add_option("--seed", o.seed, "run seed (overrides the config)");
        sub->add_option("--out", o.out, "output directory");
    };
    const auto data = [&](CLI::App* sub) {
        sub->add_option("--dataset", o.dataset, "tab-separated qid/question/answer/label file");
        sub->add_option("--embeddings", o.embeddings, "embedding table (header 'V D')");
    };

    auto* pretrain_cmd = app.add_subcommand("pretrain", "ABC search for initial weights");
    common(pretrain_cmd);
    data(pretrain_cmd);
    pretrain_cmd->add_option("--factor-f", o.factor, "mutual learning factor F");

    auto* train_cmd = app.add_subcommand("train", "episodic Q-learning from an initial checkpoint");
    common(train_cmd);
    data(train_cmd);
    train_cmd->add_option("--init", o.init, "initial weights checkpoint (default: seeded uniform draw)");
    train_cmd->add_option("--lambda", o.lambda, "majority-class reward magnitude");
    train_cmd->add_option("--episodes", o.episodes, "number of episodes");

    auto* eval_cmd = app.add_subcommand("evaluate", "MAP/MRR report for a checkpoint");
    common(eval_cmd);
    data(eval_cmd);
    eval_cmd->add_option("--init", o.init, "checkpoint to evaluate");

    auto* lambda_cmd = app.add_subcommand("sweep-lambda", "retrain and evaluate for lambda in 0.1..1.0");
    common(lambda_cmd);
    data(lambda_cmd);
    lambda_cmd->add_option("--eval-dataset", o.eval_dataset, "evaluation split (default: --dataset)");
    lambda_cmd->add_option("--init", o.init, "initial weights checkpoint");
    lambda_cmd->add_option("--episodes", o.episodes, "episodes per run");

    auto* f_cmd = app.add_subcommand("sweep-f", "pretrain and evaluate for F in 0.5..5.0");
    common(f_cmd);
    data(f_cmd);
    f_cmd->add_option("--eval-dataset", o.eval_dataset, "evaluation split (default: --dataset)");

    auto* bench_cmd = app.add_subcommand("bench-abc", "standard vs mutual ABC on sphere and Rosenbrock");
    common(bench_cmd);
    bench_cmd->add_option("--factor-f", o.factor, "mutual learning factor F");
    bench_cmd->add_option("--seeds", o.seeds, "number of paired seeds")->check(CLI::PositiveNumber);

    auto* synth_cmd = app.add_subcommand("make-synthetic", "write the toy train/test split and embeddings");
    common(synth_cmd);
    synth_cmd->add_option("--questions", o.questions, "questions per split")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (pretrain_cmd->parsed()) return cmd_pretrain(o);
        if (train_cmd->parsed()) return cmd_train(o);
        if (eval_cmd->parsed()) return cmd_evaluate(o);
        if (lambda_cmd->parsed()) return cmd_sweep_lambda(o);
        if (f_cmd->parsed()) return cmd_sweep_f(o);
        if (bench_cmd->parsed()) return cmd_bench_abc(o);
        if (synth_cmd->parsed()) return cmd_make_synthetic(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
