#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "rlas/abc/layout.hpp"
#include "rlas/neural/types.hpp"
#include "rlas/random.hpp"

namespace rlas::test {

inline neural::ModelDims small_dims(neural::Index emb = 3, neural::Index hidden = 3, neural::Index attn = 2,
                                    neural::Index depth = 1) {
    neural::ModelDims d;
    d.embedding_dim = emb;
    d.hidden = hidden;
    d.attention = attn;
    d.depth = depth;
    d.dense_hidden = {4};
    d.max_length = 80;
    return d;
}

inline neural::ModelParamsd random_params(const neural::ModelDims& dims, std::uint64_t seed, double scale = 0.5) {
    const abc::ParameterLayout layout(dims);
    Rng rng(seed);
    abc::WeightVector w(layout.size());
    for (auto& x : w) x = rng.uniform(-scale, scale);
    return layout.decode(w);
}

inline Eigen::MatrixXd random_sequence(neural::Index dim, neural::Index len, Rng& rng) {
    Eigen::MatrixXd s(dim, len);
    for (auto& x : s.reshaped()) x = rng.uniform(-1.0, 1.0);
    return s;
}

/// Central-difference gradient of `loss` over the flat weight vector. Uses
/// only forward evaluations.
inline abc::WeightVector finite_difference(const std::function<double(const neural::ModelParamsd&)>& loss,
                                           const abc::ParameterLayout& layout, const abc::WeightVector& at,
                                           double h = 1e-4) {
    abc::WeightVector g(at.size());
    abc::WeightVector x = at;
    for (Eigen::Index k = 0; k < at.size(); ++k) {
        x(k) = at(k) + h;
        const double up = loss(layout.decode(x));
        x(k) = at(k) - h;
        const double down = loss(layout.decode(x));
        x(k) = at(k);
        g(k) = (up - down) / (2.0 * h);
    }
    return g;
}

/// Index of the first coordinate violating |a - n| <= max(rel * |a|, abs), or -1.
inline Eigen::Index first_gradient_mismatch(const abc::WeightVector& analytic, const abc::WeightVector& numeric,
                                            double rel = 1e-3, double abs = 1e-6) {
    for (Eigen::Index k = 0; k < analytic.size(); ++k) {
        const double tol = std::max(rel * std::abs(analytic(k)), abs);
        if (std::abs(analytic(k) - numeric(k)) > tol) return k;
    }
    return -1;
}

} // namespace rlas::test
