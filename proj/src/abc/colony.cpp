#include "rlas/abc/colony.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rlas::abc {

void ColonyConfig::validate() const {
    if (population < 2) throw ConfigError("colony needs at least two food sources");
    if (dimension < 1) throw ConfigError("problem dimensionality must be positive");
    if (mutual_factor < 0.0 || !std::isfinite(mutual_factor)) throw ConfigError("mutual learning factor must be >= 0");
    if (max_evaluations != 0 && max_evaluations < population)
        throw ConfigError("evaluation budget is smaller than the initial population");
    const WeightVector lo = lower_bounds(), hi = upper_bounds();
    if (lo.size() != dimension || hi.size() != dimension) throw ConfigError("bounds length differs from dimensionality");
    if ((lo.array() > hi.array()).any()) throw ConfigError("lower bound exceeds upper bound");
}

std::size_t ColonyConfig::effective_limit() const {
    return limit != 0 ? limit : population * static_cast<std::size_t>(dimension);
}

WeightVector ColonyConfig::lower_bounds() const {
    return lower.size() ? lower : WeightVector::Constant(dimension, lower_bound);
}

WeightVector ColonyConfig::upper_bounds() const {
    return upper.size() ? upper : WeightVector::Constant(dimension, upper_bound);
}

WeightVector sample_position(const WeightVector& lower, const WeightVector& upper, Rng& rng) {
    WeightVector x(lower.size());
    for (Index j = 0; j < x.size(); ++j) x(j) = lower(j) + rng.uniform() * (upper(j) - lower(j));
    return x;
}

Colony init_population(const ColonyConfig& cfg, const FitnessFn& fitness, Rng& rng) {
    cfg.validate();
    Colony colony{{}, cfg.lower_bounds(), cfg.upper_bounds()};
    colony.sources.reserve(cfg.population);
    for (std::size_t i = 0; i < cfg.population; ++i) {
        FoodSource s;
        s.position = sample_position(colony.lower, colony.upper, rng);
        s.fitness = fitness(s.position);
        colony.sources.push_back(std::move(s));
    }
    return colony;
}

WeightVector perturb_standard(const WeightVector& x_i, const WeightVector& x_k, Index j, double phi) {
    WeightVector v = x_i;
    v(j) = x_i(j) + phi * (x_i(j) - x_k(j));
    return v;
}

WeightVector perturb_mutual(const WeightVector& x_i, double fit_i, const WeightVector& x_k, double fit_k, Index j,
                            double phi) {
    if (fit_i < fit_k) {
        WeightVector v = x_i;
        v(j) = x_i(j) + phi * (x_k(j) - x_i(j));
        return v;
    }
    WeightVector v = x_i;
    v(j) = x_k(j) + phi * (x_i(j) - x_k(j));
    return v;
}

namespace {

std::size_t pick_partner(std::size_t n, std::size_t i, Rng& rng) {
    auto k = static_cast<std::size_t>(rng.below(n - 1));
    return k >= i ? k + 1 : k;
}

void clamp(WeightVector& v, const Colony& colony) {
    v = v.cwiseMax(colony.lower).cwiseMin(colony.upper);
}

} // namespace

NeighborMove neighbor_standard(const Colony& colony, std::size_t i, Rng& rng) {
    const auto& src = colony.sources;
    if (src.size() < 2 || i >= src.size()) throw InputError("neighbor search needs a valid index into >= 2 sources");
    NeighborMove m;
    m.partner = pick_partner(src.size(), i, rng);
    m.coordinate = static_cast<Index>(rng.below(static_cast<std::uint64_t>(src[i].position.size())));
    m.phi = rng.uniform(-1.0, 1.0);
    m.candidate = perturb_standard(src[i].position, src[m.partner].position, m.coordinate, m.phi);
    clamp(m.candidate, colony);
    return m;
}

NeighborMove neighbor_mutual(const Colony& colony, std::size_t i, Rng& rng, double factor) {
    if (factor < 0.0) throw ConfigError("mutual learning factor must be >= 0");
    const auto& src = colony.sources;
    if (src.size() < 2 || i >= src.size()) throw InputError("neighbor search needs a valid index into >= 2 sources");
    NeighborMove m;
    m.partner = pick_partner(src.size(), i, rng);
    m.coordinate = static_cast<Index>(rng.below(static_cast<std::uint64_t>(src[i].position.size())));
    m.phi = rng.uniform(0.0, factor);
    const auto& k = src[m.partner];
    m.candidate = perturb_mutual(src[i].position, src[i].fitness, k.position, k.fitness, m.coordinate, m.phi);
    clamp(m.candidate, colony);
    return m;
}

std::vector<double> selection_probabilities(std::span<const double> fitnesses) {
    if (fitnesses.empty()) throw InputError("no fitness values");
    const double total = std::accumulate(fitnesses.begin(), fitnesses.end(), 0.0);
    std::vector<double> p(fitnesses.size());
    if (!(total > 0.0)) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
        return p;
    }
    std::transform(fitnesses.begin(), fitnesses.end(), p.begin(), [total](double f) { return f / total; });
    return p;
}

namespace {

class Search {
public:
    Search(const FitnessFn& fitness, const ColonyConfig& cfg) : fitness_(fitness), cfg_(cfg), rng_(cfg.seed) {}

    AbcResult run(const IterationObserver& observer) {
        colony_ = init_population(cfg_, counted(), rng_);
        for (const auto& s : colony_.sources) track_best(s);
        record(0, 0, observer);

        for (std::size_t iter = 1; iter <= cfg_.max_iterations && !exhausted(); ++iter) {
            employed_phase();
            onlooker_phase();
            const std::size_t abandoned = scout_phase();
            record(iter, abandoned, observer);
        }
        result_.evaluations = evaluations_;
        return std::move(result_);
    }

private:
    FitnessFn counted() {
        return [this](const WeightVector& x) {
            ++evaluations_;
            return fitness_(x);
        };
    }

    bool exhausted() const { return cfg_.max_evaluations != 0 && evaluations_ >= cfg_.max_evaluations; }

    void track_best(const FoodSource& s) {
        if (result_.best_position.size() == 0 || s.fitness > result_.best_fitness) {
            result_.best_fitness = s.fitness;
            result_.best_position = s.position;
        }
    }

    NeighborMove neighbor(std::size_t i) {
        return cfg_.mode == Mode::Mutual ? neighbor_mutual(colony_, i, rng_, cfg_.mutual_factor)
                                         : neighbor_standard(colony_, i, rng_);
    }

    // Greedy replacement against x_i. Returns false when the budget is spent.
    bool try_improve(std::size_t i) {
        if (exhausted()) return false;
        NeighborMove m = neighbor(i);
        ++evaluations_;
        const double f = fitness_(m.candidate);
        auto& s = colony_.sources[i];
        if (f > s.fitness) {
            s.position = std::move(m.candidate);
            s.fitness = f;
            s.trials = 0;
            track_best(s);
        } else {
            ++s.trials;
        }
        return true;
    }

    void employed_phase() {
        for (std::size_t i = 0; i < colony_.sources.size(); ++i)
            if (!try_improve(i)) return;
    }

    // Each source is revisited by an onlooker with probability p_i.
    void onlooker_phase() {
        std::vector<double> fits;
        fits.reserve(colony_.sources.size());
        for (const auto& s : colony_.sources) fits.push_back(s.fitness);
        const auto p = selection_probabilities(fits);
        const std::size_t n = colony_.sources.size();
        for (std::size_t i = 0; i < n; ++i)
            if (rng_.uniform() < p[i] && !try_improve(i)) return;
    }

    // At most one scout per iteration: the most stalled source past the limit.
    std::size_t scout_phase() {
        auto& src = colony_.sources;
        auto it = std::max_element(src.begin(), src.end(),
                                   [](const FoodSource& a, const FoodSource& b) { return a.trials < b.trials; });
        if (it->trials <= cfg_.effective_limit() || exhausted()) return 0;
        it->position = sample_position(colony_.lower, colony_.upper, rng_);
        ++evaluations_;
        it->fitness = fitness_(it->position);
        it->trials = 0;
        track_best(*it);
        return 1;
    }

    void record(std::size_t iter, std::size_t abandoned, const IterationObserver& observer) {
        IterationStats st;
        st.iteration = iter;
        st.best_fitness = result_.best_fitness;
        double sum = 0.0;
        for (const auto& s : colony_.sources) sum += s.fitness;
        st.mean_fitness = sum / static_cast<double>(colony_.sources.size());
        st.abandonments = abandoned;
        result_.history.push_back(st);
        if (observer) observer(colony_, st);
    }

    const FitnessFn& fitness_;
    const ColonyConfig& cfg_;
    Rng rng_;
    Colony colony_;
    AbcResult result_;
    std::size_t evaluations_ = 0;
};

} // namespace

AbcResult run_abc(const FitnessFn& fitness, const ColonyConfig& cfg, const IterationObserver& observer) {
    cfg.validate();
    if (!fitness) throw ConfigError("no fitness function");
    return Search(fitness, cfg).run(observer);
}

} // namespace rlas::abc
