#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rlas/abc/benchmarks.hpp"
#include "rlas/abc/colony.hpp"
#include "rlas/abc/fitness.hpp"
#include "support.hpp"

using namespace rlas;
using namespace rlas::abc;

namespace {

Colony two_sources(WeightVector a, double fa, WeightVector b, double fb) {
    Colony c;
    c.lower = WeightVector::Constant(a.size(), -10.0);
    c.upper = WeightVector::Constant(a.size(), 10.0);
    c.sources.push_back({std::move(a), fa, 0});
    c.sources.push_back({std::move(b), fb, 0});
    return c;
}

ColonyConfig small_config(Index dim, std::size_t pop, double lo, double hi) {
    ColonyConfig cfg;
    cfg.population = pop;
    cfg.dimension = dim;
    cfg.lower_bound = lo;
    cfg.upper_bound = hi;
    return cfg;
}

// Parameter count written out matrix by matrix, independent of the layout code.
Index counted_parameters(Index emb, Index hidden, Index attn, Index depth, std::vector<Index> dense) {
    Index total = 0;
    for (int encoder = 0; encoder < 2; ++encoder) {
        Index in = emb;
        for (Index layer = 0; layer < depth; ++layer) {
            const Index per_direction = 4 * (hidden * in) + 4 * (hidden * hidden) + 4 * hidden;
            total += 2 * per_direction;
            in = 2 * hidden;
        }
    }
    total += 2 * (attn * 2 * hidden + attn + attn);
    Index in = 6 * hidden;
    dense.push_back(2);
    for (Index width : dense) {
        total += width * in + width;
        in = width;
    }
    return total;
}

} // namespace

TEST_CASE("init_population") {
    Rng rng(1);
    const FitnessFn zero = [](const WeightVector&) { return 0.0; };

    SUBCASE("zero-width interval pins every position") {
        auto cfg = small_config(4, 5, 0.3, 0.3);
        for (const auto& s : init_population(cfg, zero, rng).sources) {
            CHECK(s.position == WeightVector::Constant(4, 0.3));
            CHECK(s.trials == 0);
        }
    }

    SUBCASE("per-coordinate bounds") {
        auto cfg = small_config(3, 50, 0.0, 0.0);
        cfg.lower = WeightVector::LinSpaced(3, 0.0, 2.0);
        cfg.upper = cfg.lower.array() + 0.5;
        for (const auto& s : init_population(cfg, zero, rng).sources) {
            CHECK((s.position.array() >= cfg.lower.array()).all());
            CHECK((s.position.array() <= cfg.upper.array()).all());
        }
    }

    SUBCASE("uniform draws are centred") {
        auto cfg = small_config(3, 10000, -1.0, 1.0);
        WeightVector mean = WeightVector::Zero(3);
        for (const auto& s : init_population(cfg, zero, rng).sources) mean += s.position;
        mean /= 10000.0;
        CHECK(mean.cwiseAbs().maxCoeff() < 0.05);
    }

    SUBCASE("fitness evaluated per source") {
        auto cfg = small_config(2, 6, -1.0, 1.0);
        const FitnessFn f = [](const WeightVector& x) { return error_to_fitness(sphere(x)); };
        for (const auto& s : init_population(cfg, f, rng).sources) CHECK(s.fitness == f(s.position));
    }

    SUBCASE("invalid configs") {
        CHECK_THROWS_AS(init_population(small_config(2, 1, -1, 1), zero, rng), ConfigError);
        CHECK_THROWS_AS(init_population(small_config(0, 5, -1, 1), zero, rng), ConfigError);
        CHECK_THROWS_AS(init_population(small_config(2, 5, 1, -1), zero, rng), ConfigError);
    }
}

TEST_CASE("perturbation rules") {
    WeightVector xi(3), xk(3);
    xi << 0.0, 1.0, 2.0;
    xk << 5.0, 3.0, -1.0;

    CHECK(perturb_standard(xi, xk, 1, 0.0) == xi);
    CHECK(perturb_standard(xi, xi, 2, 0.9) == xi);
    CHECK(perturb_standard(xi, xk, 1, 0.5)(1) == 0.0);

    CHECK(perturb_mutual(xi, 0.1, xk, 0.2, 1, 0.0)(1) == 1.0);
    CHECK(perturb_mutual(xi, 0.2, xk, 0.2, 1, 0.0)(1) == 3.0);
    CHECK(perturb_mutual(xi, 0.1, xk, 0.2, 1, 0.5)(1) == 2.0);

    // only the chosen coordinate moves, in both branches
    for (double fi : {0.1, 0.3}) {
        const auto v = perturb_mutual(xi, fi, xk, 0.2, 1, 0.7);
        CHECK(v(0) == xi(0));
        CHECK(v(2) == xi(2));
    }
}

TEST_CASE("neighbor moves") {
    WeightVector a(4), b(4);
    a << 1, 2, 3, 4;
    b << -1, 0, 1, 2;
    Rng rng(3);

    SUBCASE("standard draws phi in (-1, 1) and changes one coordinate") {
        const auto colony = two_sources(a, 0.5, b, 0.5);
        for (int n = 0; n < 200; ++n) {
            const auto m = neighbor_standard(colony, 0, rng);
            CHECK(m.partner == 1);
            CHECK(m.phi >= -1.0);
            CHECK(m.phi < 1.0);
            CHECK(m.candidate(m.coordinate) == doctest::Approx(a(m.coordinate) + m.phi * (a(m.coordinate) - b(m.coordinate))));
            CHECK((m.candidate - a).cwiseAbs().maxCoeff() == doctest::Approx(std::abs(m.candidate(m.coordinate) - a(m.coordinate))));
        }
    }

    SUBCASE("mutual draws phi in [0, F)") {
        const auto colony = two_sources(a, 0.1, b, 0.9);
        for (int n = 0; n < 200; ++n) {
            const auto m = neighbor_mutual(colony, 0, rng, 2.5);
            CHECK(m.phi >= 0.0);
            CHECK(m.phi < 2.5);
        }
        CHECK(neighbor_mutual(colony, 0, rng, 0.0).candidate == a);
        CHECK_THROWS_AS(neighbor_mutual(colony, 0, rng, -0.1), ConfigError);
    }

    SUBCASE("candidates are clamped") {
        auto colony = two_sources(a, 0.5, b * 100.0, 0.5);
        for (int n = 0; n < 100; ++n) {
            const auto m = neighbor_standard(colony, 0, rng);
            CHECK((m.candidate.array().abs() <= 10.0).all());
        }
    }

    SUBCASE("bad index") {
        const auto colony = two_sources(a, 0.5, b, 0.5);
        CHECK_THROWS_AS(neighbor_standard(colony, 2, rng), InputError);
    }
}

TEST_CASE("selection_probabilities") {
    const std::vector<double> f{1.0, 1.0, 2.0};
    const auto p = selection_probabilities(f);
    CHECK(p == std::vector<double>{0.25, 0.25, 0.5});

    const std::vector<double> same(7, 0.3);
    for (double x : selection_probabilities(same)) CHECK(x == doctest::Approx(1.0 / 7.0).epsilon(1e-12));

    CHECK(selection_probabilities(std::vector<double>{0.4}) == std::vector<double>{1.0});
    CHECK(selection_probabilities(std::vector<double>{0.0, 0.0}) == std::vector<double>{0.5, 0.5});

    Rng rng(4);
    std::vector<double> r(50);
    for (auto& x : r) x = rng.uniform();
    const auto q = selection_probabilities(r);
    double s = 0.0;
    for (double x : q) s += x;
    CHECK(std::abs(s - 1.0) <= 1e-12);
}

TEST_CASE("fitness from predictions") {
    const std::vector<double> y{1, 0, 1, 0};
    CHECK(fitness_from_predictions(y, y) == 1.0);
    CHECK(fitness_from_predictions(y, std::vector<double>{0, 1, 0, 1}) == doctest::Approx(0.2));
    const double a = fitness_from_predictions(y, std::vector<double>{0.9, 0.1, 0.9, 0.1});
    const double b = fitness_from_predictions(y, std::vector<double>{0.9, 0.1, 0.8, 0.1});
    CHECK(b < a);
    CHECK_THROWS_AS(fitness_from_predictions(y, std::vector<double>{0.0}), ShapeError);
}

TEST_CASE("training_fitness decodes and scores") {
    const auto dims = test::small_dims(3, 2);
    const ParameterLayout layout(dims);
    Rng rng(8);
    std::vector<rl::LabeledPair> samples;
    for (int i = 0; i < 4; ++i)
        samples.push_back({{test::random_sequence(3, 2, rng), test::random_sequence(3, 2, rng)}, i % 2});

    // zero weights score every pair 0.5, so each squared error is 0.25
    CHECK(training_fitness(WeightVector::Zero(layout.size()), samples, layout) == doctest::Approx(0.5));
    CHECK_THROWS_AS(training_fitness(WeightVector::Zero(layout.size() - 1), samples, layout), ShapeError);

    const auto x = random_weights(layout, -1, 1, rng);
    const double f = training_fitness(x, samples, layout);
    CHECK(f > 0.0);
    CHECK(f <= 1.0);
}

TEST_CASE("frozen_subsample") {
    const auto a = frozen_subsample(100, 10, 5);
    CHECK(a == frozen_subsample(100, 10, 5));
    CHECK(a.size() == 10);
    CHECK(std::is_sorted(a.begin(), a.end()));
    CHECK(std::adjacent_find(a.begin(), a.end()) == a.end());
    CHECK(frozen_subsample(5, 10, 5).size() == 5);
}

TEST_CASE("ParameterLayout") {
    SUBCASE("dimension matches an independent count") {
        neural::ModelDims d = test::small_dims(3, 2, 2, 1);
        d.dense_hidden = {8};
        const ParameterLayout layout(d);
        CHECK(layout.size() == counted_parameters(3, 2, 2, 1, {8}));
        CHECK(layout.size() == 338);

        neural::ModelDims big;
        const ParameterLayout full(big);
        CHECK(full.size() == counted_parameters(60, 16, 16, 2, {8}));
    }

    SUBCASE("segments tile the vector") {
        const ParameterLayout layout(test::small_dims(3, 2, 2, 2));
        Index next = 0;
        for (const auto& s : layout.segments()) {
            CHECK(s.offset == next);
            next += s.length();
        }
        CHECK(next == layout.size());
        CHECK(layout.segments().front().name.find("question") != std::string::npos);
        CHECK(layout.segments().back().name.find("feedforward") != std::string::npos);
    }

    SUBCASE("round trips") {
        const auto dims = test::small_dims(3, 2, 2, 2);
        const ParameterLayout layout(dims);
        const auto p = test::random_params(dims, 17);
        const auto v = layout.encode(p);
        CHECK(layout.encode(layout.decode(v)) == v);
        CHECK(layout.decode(v).feedforward.layers.back().W == p.feedforward.layers.back().W);
        CHECK_THROWS_AS(layout.decode(WeightVector(v.size() + 1)), ShapeError);
    }

    SUBCASE("matrices are stored row by row") {
        const auto dims = test::small_dims(3, 2, 2, 1);
        const ParameterLayout layout(dims);
        WeightVector v = WeightVector::LinSpaced(layout.size(), 0.0, static_cast<double>(layout.size() - 1));
        const auto p = layout.decode(v);
        const auto& w = p.question_encoder[0].forward.W_i;
        CHECK(w(0, 1) == 1.0);
        CHECK(w(1, 0) == static_cast<double>(w.cols()));
    }
}

TEST_CASE("run_abc") {
    SUBCASE("no iterations keeps the initial best") {
        auto cfg = small_config(2, 10, -1, 1);
        cfg.max_iterations = 0;
        const FitnessFn f = [](const WeightVector& x) { return error_to_fitness(sphere(x)); };
        double best = 0.0;
        const auto res = run_abc(f, cfg, [&](const Colony& c, const IterationStats&) {
            for (const auto& s : c.sources) best = std::max(best, s.fitness);
        });
        CHECK(res.best_fitness == best);
        CHECK(res.history.size() == 1);
        CHECK(res.evaluations == 10);
    }

    SUBCASE("constant fitness leaves a flat history") {
        auto cfg = small_config(3, 5, -1, 1);
        cfg.max_iterations = 20;
        cfg.limit = 3;
        const auto res = run_abc([](const WeightVector&) { return 0.25; }, cfg);
        for (const auto& h : res.history) CHECK(h.best_fitness == 0.25);
        std::size_t scouts = 0;
        for (const auto& h : res.history) {
            CHECK(h.abandonments <= 1);
            scouts += h.abandonments;
        }
        CHECK(scouts > 0);
    }

    SUBCASE("finds the peak of a one-dimensional bump") {
        // dense-grid optimum of 1 / (1 + (x - 0.5)^2) on [0, 1]
        double grid_best = 0.0, grid_x = 0.0;
        for (int k = 0; k <= 10000; ++k) {
            const double x = k * 1e-4, f = 1.0 / (1.0 + (x - 0.5) * (x - 0.5));
            if (f > grid_best) grid_best = f, grid_x = x;
        }
        for (Mode mode : {Mode::Standard, Mode::Mutual}) {
            auto cfg = small_config(1, 20, 0.0, 1.0);
            cfg.max_iterations = 100;
            cfg.mode = mode;
            const auto res = run_abc([](const WeightVector& x) { return 1.0 / (1.0 + (x(0) - 0.5) * (x(0) - 0.5)); }, cfg);
            CHECK(std::abs(res.best_position(0) - grid_x) < 0.02);
        }
    }

    SUBCASE("history is monotone and positions stay in bounds") {
        auto cfg = small_config(5, 30, -2, 3);
        cfg.max_iterations = 60;
        cfg.limit = 10;
        const FitnessFn f = [](const WeightVector& x) { return error_to_fitness(rosenbrock(x)); };
        bool in_bounds = true;
        const auto res = run_abc(f, cfg, [&](const Colony& c, const IterationStats&) {
            for (const auto& s : c.sources)
                in_bounds = in_bounds && (s.position.array() >= -2).all() && (s.position.array() <= 3).all();
        });
        CHECK(in_bounds);
        for (std::size_t i = 1; i < res.history.size(); ++i)
            CHECK(res.history[i].best_fitness >= res.history[i - 1].best_fitness);
        CHECK(res.best_fitness == f(res.best_position));
    }

    SUBCASE("evaluation budget is exact and runs reproduce") {
        auto cfg = small_config(4, 10, -5, 5);
        cfg.max_iterations = 1000;
        cfg.max_evaluations = 333;
        cfg.seed = 42;
        const FitnessFn f = [](const WeightVector& x) { return error_to_fitness(sphere(x)); };
        const auto a = run_abc(f, cfg);
        const auto b = run_abc(f, cfg);
        CHECK(a.evaluations == 333);
        CHECK(a.best_position == b.best_position);
        CHECK(a.history.size() == b.history.size());
        cfg.max_evaluations = 5;
        CHECK_THROWS_AS(run_abc(f, cfg), ConfigError);
    }
}

TEST_CASE("benchmark objectives") {
    CHECK(sphere(WeightVector::Zero(10)) == 0.0);
    CHECK(rosenbrock(WeightVector::Ones(10)) == 0.0);
    WeightVector x(2);
    x << 0.0, 0.0;
    CHECK(rosenbrock(x) == 1.0);
    CHECK(fitness_to_error(error_to_fitness(3.0)) == doctest::Approx(3.0));
    CHECK_THROWS_AS(objective_by_name("rastrigin"), ConfigError);
}
