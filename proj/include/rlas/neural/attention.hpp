#pragma once

#include "rlas/neural/types.hpp"

namespace rlas::neural {

template <typename Scalar>
struct AttentionTrace {
    Matrix<Scalar> hidden;  // encoded x T
    Matrix<Scalar> u;       // attention x T, tanh(W h + b)
    Vector<Scalar> weights; // T, softmax of the projected scores
    Vector<Scalar> pooled;  // encoded
};

template <typename Scalar>
struct AttentionOutput {
    Vector<Scalar> pooled;
    Vector<Scalar> weights;
};

template <typename Scalar>
Vector<Scalar> softmax(const Vector<Scalar>& scores) {
    const Scalar m = scores.maxCoeff();
    Vector<Scalar> e = (scores.array() - m).exp().matrix();
    return e / e.sum();
}

template <typename Scalar>
AttentionTrace<Scalar> attention_pool_traced(const Matrix<Scalar>& hidden, const AttentionParams<Scalar>& p) {
    if (hidden.cols() < 1) throw ShapeError("attention over an empty sequence");
    if (hidden.rows() != p.W.cols() || p.b.size() != p.W.rows() || p.projection.size() != p.W.rows())
        throw ShapeError("attention parameters do not match hidden width");
    AttentionTrace<Scalar> tr;
    tr.hidden = hidden;
    tr.u = ((p.W * hidden).colwise() + p.b).array().tanh().matrix();
    const Vector<Scalar> scores = tr.u.transpose() * p.projection;
    tr.weights = softmax<Scalar>(scores);
    tr.pooled = hidden * tr.weights;
    return tr;
}

/// Softmax-weighted sum of the hidden columns.
template <typename Scalar>
AttentionOutput<Scalar> attention_pool(const Matrix<Scalar>& hidden, const AttentionParams<Scalar>& p) {
    auto tr = attention_pool_traced(hidden, p);
    return {std::move(tr.pooled), std::move(tr.weights)};
}

/// Returns d(loss)/d(hidden) and accumulates parameter gradients into `g`.
template <typename Scalar>
Matrix<Scalar> attention_backward(const AttentionTrace<Scalar>& tr, const Vector<Scalar>& d_pooled,
                                  const AttentionParams<Scalar>& p, AttentionParams<Scalar>& g) {
    const Vector<Scalar>& a = tr.weights;
    // pooled = hidden * a
    Matrix<Scalar> d_hidden = d_pooled * a.transpose();
    const Vector<Scalar> d_a = tr.hidden.transpose() * d_pooled;
    const Vector<Scalar> d_scores = a.cwiseProduct((d_a.array() - a.dot(d_a)).matrix());
    // scores = u^T projection
    g.projection.noalias() += tr.u * d_scores;
    const Matrix<Scalar> d_pre =
        ((p.projection * d_scores.transpose()).array() * (1 - tr.u.array().square())).matrix();
    g.W.noalias() += d_pre * tr.hidden.transpose();
    g.b += d_pre.rowwise().sum();
    d_hidden.noalias() += p.W.transpose() * d_pre;
    return d_hidden;
}

} // namespace rlas::neural
