#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rlas/abc/colony.hpp"
#include "rlas/abc/fitness.hpp"
#include "rlas/eval/ranking.hpp"
#include "rlas/pipeline/config.hpp"
#include "rlas/pipeline/dataset.hpp"
#include "rlas/pipeline/embeddings.hpp"

namespace rlas::pipeline {

/// A dataset together with its embedded samples (same order as records).
struct PreparedData {
    Dataset dataset;
    std::vector<rl::LabeledPair> samples;
};

PreparedData prepare(Dataset dataset, const EmbeddingStore& store, const neural::ModelDims& dims);

struct PretrainResult {
    abc::WeightVector weights;
    double best_fitness = 0.0;
    std::vector<abc::IterationStats> history;
    std::size_t evaluations = 0;
};

/// ABC search over the flat weights, scored by the fitness on a frozen
/// subsample of `train`.
PretrainResult pretrain(const PreparedData& train, const RunConfig& cfg);

struct EvaluationReport {
    double map = 0.0;
    double mrr = 0.0;
    std::size_t questions = 0; // questions with at least one relevant answer
    std::size_t pairs = 0;
    double minority_recall = 0.0; // positives scored above 0.5
};

EvaluationReport evaluate(const PreparedData& data, const neural::ModelParamsd& params);

/// Fraction of label-1 samples with score > 0.5 (argmax picks action 1).
double minority_recall(std::span<const rl::LabeledPair> samples, const neural::ModelParamsd& params);

struct LambdaRow {
    double lambda = 0.0;
    EvaluationReport report;
};

/// Retrains from `init` once per lambda in {0.1, ..., 1.0}.
std::vector<LambdaRow> sweep_lambda(const PreparedData& train, const PreparedData& eval,
                                    const abc::WeightVector& init, const RunConfig& cfg);

struct FactorRow {
    double factor = 0.0;
    double best_fitness = 0.0;
    EvaluationReport report;
};

/// Pretrains once per F in {0.5, 1.0, ..., 5.0} and evaluates the pretrained weights.
std::vector<FactorRow> sweep_factor(const PreparedData& train, const PreparedData& eval, const RunConfig& cfg);

std::vector<double> lambda_grid();
std::vector<double> factor_grid();

struct BenchRow {
    std::string function;
    std::uint64_t seed = 0;
    std::string mode;
    double final_error = 0.0;
    std::size_t evaluations = 0;
};

struct BenchConfig {
    std::vector<std::string> functions{"sphere", "rosenbrock"};
    std::size_t seeds = 10;
    std::uint64_t first_seed = 0;
    neural::Index dimension = 10;
    double lower_bound = -5.0;
    double upper_bound = 5.0;
    std::size_t population = 100;
    std::size_t max_evaluations = 3000;
    double mutual_factor = 1.5;
};

/// Standard vs mutual-learning ABC on analytic objectives, paired by seed.
std::vector<BenchRow> bench_abc(const BenchConfig& cfg);

// CSV output: ',' delimiter, '\n' endings, header row, trailing config_hash column.
std::string format_number(double v);
void write_iteration_csv(std::ostream& out, const std::vector<abc::IterationStats>& history, const std::string& hash);
void write_episode_csv(std::ostream& out, const std::vector<rl::EpisodeLog>& log, const std::string& hash);
void write_report_csv(std::ostream& out, const std::string& dataset, const std::string& split,
                      const EvaluationReport& report, const std::string& hash);
void write_lambda_csv(std::ostream& out, const std::vector<LambdaRow>& rows, const std::string& hash);
void write_factor_csv(std::ostream& out, const std::vector<FactorRow>& rows, const std::string& hash);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows, const std::string& hash);

} // namespace rlas::pipeline
