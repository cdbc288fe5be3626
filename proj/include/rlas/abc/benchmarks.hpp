#pragma once

#include <string_view>

#include "rlas/abc/colony.hpp"

namespace rlas::abc {

// Analytic test objectives (to minimize; optimum value 0).

inline double sphere(const WeightVector& x) { return x.squaredNorm(); }

inline double rosenbrock(const WeightVector& x) {
    double s = 0.0;
    for (Index j = 0; j + 1 < x.size(); ++j) {
        const double a = x(j + 1) - x(j) * x(j);
        const double b = 1.0 - x(j);
        s += 100.0 * a * a + b * b;
    }
    return s;
}

/// Turns a nonnegative objective into a fitness in (0, 1].
inline double error_to_fitness(double error) { return 1.0 / (1.0 + error); }
inline double fitness_to_error(double fitness) { return 1.0 / fitness - 1.0; }

using Objective = double (*)(const WeightVector&);

inline Objective objective_by_name(std::string_view name) {
    if (name == "sphere") return &sphere;
    if (name == "rosenbrock") return &rosenbrock;
    throw ConfigError("unknown benchmark function: " + std::string(name));
}

} // namespace rlas::abc
