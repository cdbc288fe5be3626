#include "rlas/pipeline/experiments.hpp"

#include <charconv>
#include <ostream>

#include "rlas/abc/benchmarks.hpp"
#include "rlas/neural/policy.hpp"

namespace rlas::pipeline {

PreparedData prepare(Dataset dataset, const EmbeddingStore& store, const neural::ModelDims& dims) {
    if (store.dim() != dims.embedding_dim)
        throw IncompatibleError("embeddings have dimension " + std::to_string(store.dim()) + ", model expects " +
                                std::to_string(dims.embedding_dim));
    auto samples = embed_dataset(dataset, store, dims.max_length);
    return {std::move(dataset), std::move(samples)};
}

PretrainResult pretrain(const PreparedData& train, const RunConfig& cfg) {
    cfg.validate();
    const abc::ParameterLayout layout(cfg.model);
    const auto subset_idx = abc::frozen_subsample(train.samples.size(), cfg.pretrain.fitness_subsample, cfg.seed);
    std::vector<rl::LabeledPair> subset;
    subset.reserve(subset_idx.size());
    for (std::size_t i : subset_idx) subset.push_back(train.samples[i]);

    const abc::FitnessFn fitness = [&](const abc::WeightVector& x) {
        return abc::training_fitness(x, subset, layout);
    };
    auto res = abc::run_abc(fitness, cfg.colony(layout.size()));
    return {std::move(res.best_position), res.best_fitness, std::move(res.history), res.evaluations};
}

double minority_recall(std::span<const rl::LabeledPair> samples, const neural::ModelParamsd& params) {
    std::size_t positives = 0, hits = 0;
    for (const auto& s : samples) {
        if (s.label != 1) continue;
        ++positives;
        hits += rl::score(s.pair, params) > 0.5;
    }
    return positives ? static_cast<double>(hits) / static_cast<double>(positives) : 0.0;
}

EvaluationReport evaluate(const PreparedData& data, const neural::ModelParamsd& params) {
    std::vector<double> scores(data.samples.size());
    for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = rl::score(data.samples[i].pair, params);

    std::vector<eval::RankedResult> ranked;
    ranked.reserve(data.dataset.groups.size());
    for (const auto& g : data.dataset.groups) {
        std::vector<eval::Candidate> cands;
        cands.reserve(g.rows.size());
        for (std::size_t row : g.rows)
            cands.push_back({"a" + std::to_string(data.dataset.records[row].line), data.dataset.records[row].label == 1, row});
        ranked.push_back(
            eval::rank_candidates(g.question_id, cands, [&](const eval::Candidate& c) { return scores[c.index]; }));
    }
    EvaluationReport rep;
    rep.map = eval::map_score(ranked);
    rep.mrr = eval::mrr_score(ranked);
    rep.questions = eval::includable_questions(ranked);
    rep.pairs = data.samples.size();
    std::size_t positives = 0, hits = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (data.samples[i].label != 1) continue;
        ++positives;
        hits += scores[i] > 0.5;
    }
    rep.minority_recall = positives ? static_cast<double>(hits) / static_cast<double>(positives) : 0.0;
    return rep;
}

std::vector<double> lambda_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 10; ++i) g.push_back(i / 10.0);
    return g;
}

std::vector<double> factor_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 10; ++i) g.push_back(i / 2.0);
    return g;
}

std::vector<LambdaRow> sweep_lambda(const PreparedData& train, const PreparedData& eval,
                                    const abc::WeightVector& init, const RunConfig& cfg) {
    const abc::ParameterLayout layout(cfg.model);
    const auto init_params = layout.decode(init);
    std::vector<LambdaRow> rows;
    for (double lambda : lambda_grid()) {
        RunConfig run = cfg;
        run.train.lambda = lambda;
        const auto trained = rl::train(train.samples, init_params, run.training());
        rows.push_back({lambda, evaluate(eval, trained.params)});
    }
    return rows;
}

std::vector<FactorRow> sweep_factor(const PreparedData& train, const PreparedData& eval, const RunConfig& cfg) {
    const abc::ParameterLayout layout(cfg.model);
    std::vector<FactorRow> rows;
    for (double f : factor_grid()) {
        RunConfig run = cfg;
        run.pretrain.mutual_factor = f;
        run.pretrain.mode = abc::Mode::Mutual;
        const auto res = pretrain(train, run);
        rows.push_back({f, res.best_fitness, evaluate(eval, layout.decode(res.weights))});
    }
    return rows;
}

std::vector<BenchRow> bench_abc(const BenchConfig& cfg) {
    std::vector<BenchRow> rows;
    for (const auto& name : cfg.functions) {
        const abc::Objective objective = abc::objective_by_name(name);
        const abc::FitnessFn fitness = [objective](const abc::WeightVector& x) {
            return abc::error_to_fitness(objective(x));
        };
        for (std::size_t s = 0; s < cfg.seeds; ++s) {
            for (abc::Mode mode : {abc::Mode::Standard, abc::Mode::Mutual}) {
                abc::ColonyConfig c;
                c.population = cfg.population;
                c.dimension = cfg.dimension;
                c.max_iterations = cfg.max_evaluations; // the evaluation budget binds first
                c.max_evaluations = cfg.max_evaluations;
                c.lower_bound = cfg.lower_bound;
                c.upper_bound = cfg.upper_bound;
                c.mutual_factor = cfg.mutual_factor;
                c.mode = mode;
                c.seed = cfg.first_seed + s;
                const auto res = abc::run_abc(fitness, c);
                rows.push_back({name, c.seed, mode == abc::Mode::Mutual ? "mutual" : "standard",
                                objective(res.best_position), res.evaluations});
            }
        }
    }
    return rows;
}

std::string format_number(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_iteration_csv(std::ostream& out, const std::vector<abc::IterationStats>& history, const std::string& hash) {
    out << "iteration,best_fitness,mean_fitness,abandonments,config_hash\n";
    for (const auto& h : history)
        out << h.iteration << ',' << format_number(h.best_fitness) << ',' << format_number(h.mean_fitness) << ','
            << h.abandonments << ',' << hash << '\n';
}

void write_episode_csv(std::ostream& out, const std::vector<rl::EpisodeLog>& log, const std::string& hash) {
    out << "episode,steps,cumulative_reward,mean_loss,epsilon,config_hash\n";
    for (const auto& e : log)
        out << e.episode << ',' << e.steps << ',' << format_number(e.cumulative_reward) << ','
            << format_number(e.mean_loss) << ',' << format_number(e.epsilon) << ',' << hash << '\n';
}

void write_report_csv(std::ostream& out, const std::string& dataset, const std::string& split,
                      const EvaluationReport& report, const std::string& hash) {
    out << "dataset,split,MAP,MRR,n_questions,n_pairs,config_hash\n";
    out << dataset << ',' << split << ',' << format_number(report.map) << ',' << format_number(report.mrr) << ','
        << report.questions << ',' << report.pairs << ',' << hash << '\n';
}

void write_lambda_csv(std::ostream& out, const std::vector<LambdaRow>& rows, const std::string& hash) {
    out << "lambda,MAP,MRR,minority_recall,config_hash\n";
    for (const auto& r : rows)
        out << format_number(r.lambda) << ',' << format_number(r.report.map) << ',' << format_number(r.report.mrr)
            << ',' << format_number(r.report.minority_recall) << ',' << hash << '\n';
}

void write_factor_csv(std::ostream& out, const std::vector<FactorRow>& rows, const std::string& hash) {
    out << "F,best_fitness,MAP,MRR,config_hash\n";
    for (const auto& r : rows)
        out << format_number(r.factor) << ',' << format_number(r.best_fitness) << ',' << format_number(r.report.map)
            << ',' << format_number(r.report.mrr) << ',' << hash << '\n';
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows, const std::string& hash) {
    out << "function,seed,mode,final_error,evaluations,config_hash\n";
    for (const auto& r : rows)
        out << r.function << ',' << r.seed << ',' << r.mode << ',' << format_number(r.final_error) << ','
            << r.evaluations << ',' << hash << '\n';
}

} // namespace rlas::pipeline
