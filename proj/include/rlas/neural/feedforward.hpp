#pragma once

#include <utility>
#include <vector>

#include "rlas/neural/types.hpp"

namespace rlas::neural {

template <typename Scalar>
struct FeedForwardTrace {
    Vector<Scalar> q, a;
    std::vector<Vector<Scalar>> inputs; // input to each dense layer; inputs[0] = [q ; a ; |q - a|]
    std::vector<Vector<Scalar>> pre;    // pre-activation of each dense layer
    Vector<Scalar> q_values;
};

template <typename Scalar>
FeedForwardTrace<Scalar> similarity_forward_traced(const Vector<Scalar>& q, const Vector<Scalar>& a,
                                                   const FeedForwardParams<Scalar>& p) {
    if (q.size() != a.size()) throw ShapeError("question and answer encodings differ in width");
    if (p.layers.empty() || p.layers.front().W.cols() != 3 * q.size())
        throw ShapeError("feedforward input width must be three times the encoding width");
    const Index n = q.size();
    FeedForwardTrace<Scalar> tr;
    tr.q = q;
    tr.a = a;
    Vector<Scalar> z(3 * n);
    z << q, a, (q - a).cwiseAbs();
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
        tr.inputs.push_back(z);
        Vector<Scalar> pre = p.layers[l].W * z + p.layers[l].b;
        const bool last = l + 1 == p.layers.size();
        z = last ? pre : Vector<Scalar>(pre.cwiseMax(Scalar(0)));
        tr.pre.push_back(std::move(pre));
    }
    tr.q_values = std::move(z);
    return tr;
}

/// Dense head over [q ; a ; |q - a|]: ReLU hidden layers, two linear outputs.
template <typename Scalar>
Vector<Scalar> similarity_forward(const Vector<Scalar>& q, const Vector<Scalar>& a,
                                  const FeedForwardParams<Scalar>& p) {
    return similarity_forward_traced(q, a, p).q_values;
}

/// Returns (d/dq, d/da) and accumulates dense gradients into `g`.
template <typename Scalar>
std::pair<Vector<Scalar>, Vector<Scalar>> similarity_backward(const FeedForwardTrace<Scalar>& tr,
                                                              const Vector<Scalar>& d_q_values,
                                                              const FeedForwardParams<Scalar>& p,
                                                              FeedForwardParams<Scalar>& g) {
    Vector<Scalar> d = d_q_values;
    for (std::size_t l = p.layers.size(); l-- > 0;) {
        if (l + 1 != p.layers.size())
            d = (tr.pre[l].array() > Scalar(0)).select(d, Scalar(0));
        g.layers[l].W.noalias() += d * tr.inputs[l].transpose();
        g.layers[l].b += d;
        d = p.layers[l].W.transpose() * d;
    }
    const Index n = tr.q.size();
    const Vector<Scalar> sign = (tr.q - tr.a).array().sign().matrix();
    const Vector<Scalar> d_abs = d.segment(2 * n, n).cwiseProduct(sign);
    return {d.head(n) + d_abs, d.segment(n, n) - d_abs};
}

} // namespace rlas::neural
