#include "rlas/eval/ranking.hpp"

#include <algorithm>

#include "rlas/errors.hpp"

namespace rlas::eval {

RankedResult rank_candidates(const std::string& question_id, std::span<const Candidate> candidates,
                             const ScoreFn& score) {
    if (candidates.empty()) throw InputError("question " + question_id + " has no candidates");
    RankedResult out{question_id, {}};
    out.candidates.reserve(candidates.size());
    for (const auto& c : candidates) out.candidates.push_back({c.answer_id, score(c), c.relevant});
    std::stable_sort(out.candidates.begin(), out.candidates.end(),
                     [](const RankedCandidate& a, const RankedCandidate& b) { return a.score > b.score; });
    return out;
}

std::optional<double> average_precision(const RankedResult& ranked) {
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < ranked.candidates.size(); ++r) {
        if (!ranked.candidates[r].relevant) continue;
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
    if (hits == 0) return std::nullopt;
    return sum / static_cast<double>(hits);
}

std::optional<double> reciprocal_rank(const RankedResult& ranked) {
    for (std::size_t r = 0; r < ranked.candidates.size(); ++r)
        if (ranked.candidates[r].relevant) return 1.0 / static_cast<double>(r + 1);
    return std::nullopt;
}

std::size_t includable_questions(std::span<const RankedResult> results) {
    return static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const RankedResult& r) {
        return std::any_of(r.candidates.begin(), r.candidates.end(),
                           [](const RankedCandidate& c) { return c.relevant; });
    }));
}

namespace {

template <typename PerQuestion>
double mean_over_questions(std::span<const RankedResult> results, PerQuestion per_question) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : results) {
        if (auto v = per_question(r)) {
            sum += *v;
            ++n;
        }
    }
    if (n == 0) throw InputError("no question has a relevant candidate");
    return sum / static_cast<double>(n);
}

} // namespace

double map_score(std::span<const RankedResult> results) {
    return mean_over_questions(results, average_precision);
}

double mrr_score(std::span<const RankedResult> results) {
    return mean_over_questions(results, reciprocal_rank);
}

} // namespace rlas::eval
