#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rlas::eval {

struct Candidate {
    std::string answer_id;
    bool relevant = false;
    std::size_t index = 0; // caller-defined handle, e.g. a dataset row
};

struct RankedCandidate {
    std::string answer_id;
    double score = 0.0;
    bool relevant = false;
};

/// Candidates of one question in descending score order.
struct RankedResult {
    std::string question_id;
    std::vector<RankedCandidate> candidates;
};

using ScoreFn = std::function<double(const Candidate&)>;

/// Stable sort by descending score; ties keep input order.
RankedResult rank_candidates(const std::string& question_id, std::span<const Candidate> candidates,
                             const ScoreFn& score);

/// Mean precision at the ranks of the relevant candidates; nullopt when the
/// question has no relevant candidate and must be left out of the metrics.
std::optional<double> average_precision(const RankedResult& ranked);

/// 1 / rank of the first relevant candidate; nullopt when there is none.
std::optional<double> reciprocal_rank(const RankedResult& ranked);

/// Number of questions that contribute to MAP/MRR.
std::size_t includable_questions(std::span<const RankedResult> results);

double map_score(std::span<const RankedResult> results);
double mrr_score(std::span<const RankedResult> results);

} // namespace rlas::eval
