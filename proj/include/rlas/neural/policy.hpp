#pragma once

#include <vector>

#include "rlas/neural/attention.hpp"
#include "rlas/neural/feedforward.hpp"
#include "rlas/neural/lstm.hpp"
#include "rlas/neural/types.hpp"

namespace rlas::neural {

/// Intermediate values of one policy forward pass.
template <typename Scalar>
struct ForwardTrace {
    bool valid = false;
    std::vector<BlstmTrace<Scalar>> question_layers;
    std::vector<BlstmTrace<Scalar>> answer_layers;
    AttentionTrace<Scalar> question_attention;
    AttentionTrace<Scalar> answer_attention;
    FeedForwardTrace<Scalar> head;

    const Vector<Scalar>& q_values() const { return head.q_values; }
};

template <typename Scalar>
ForwardTrace<Scalar> policy_trace(const EmbeddedPair<Scalar>& pair, const ModelParams<Scalar>& params) {
    ForwardTrace<Scalar> tr;
    tr.question_layers = encode_traced(pair.question, params.question_encoder);
    tr.answer_layers = encode_traced(pair.answer, params.answer_encoder);
    tr.question_attention = attention_pool_traced(tr.question_layers.back().output, params.question_attention);
    tr.answer_attention = attention_pool_traced(tr.answer_layers.back().output, params.answer_attention);
    tr.head = similarity_forward_traced(tr.question_attention.pooled, tr.answer_attention.pooled, params.feedforward);
    tr.valid = true;
    return tr;
}

/// Q-values (action 0, action 1) for one question/answer pair.
template <typename Scalar>
Vector<Scalar> policy_forward(const EmbeddedPair<Scalar>& pair, const ModelParams<Scalar>& params) {
    return policy_trace(pair, params).head.q_values;
}

/// Adds d(loss)/d(params) to `grads` given d(loss)/d(Q-values).
template <typename Scalar>
void accumulate_policy_gradient(const ForwardTrace<Scalar>& tr, const Vector<Scalar>& d_q_values,
                                const ModelParams<Scalar>& params, Gradients<Scalar>& grads) {
    if (!tr.valid) throw StateError("backward pass requested without a forward trace");
    if (d_q_values.size() != 2) throw ShapeError("expected two Q-value derivatives");
    auto [d_q, d_a] = similarity_backward(tr.head, d_q_values, params.feedforward, grads.feedforward);
    const Matrix<Scalar> dh_q =
        attention_backward(tr.question_attention, d_q, params.question_attention, grads.question_attention);
    const Matrix<Scalar> dh_a =
        attention_backward(tr.answer_attention, d_a, params.answer_attention, grads.answer_attention);
    encode_backward(tr.question_layers, dh_q, params.question_encoder, grads.question_encoder);
    encode_backward(tr.answer_layers, dh_a, params.answer_encoder, grads.answer_encoder);
}

/// Gradients of a loss whose derivative w.r.t. Q(s, action) is `d_loss`.
template <typename Scalar>
Gradients<Scalar> policy_backward(const ForwardTrace<Scalar>& tr, int action, Scalar d_loss,
                                  const ModelParams<Scalar>& params) {
    if (action != 0 && action != 1) throw ShapeError("action must be 0 or 1");
    Gradients<Scalar> grads = zeros_like(params);
    Vector<Scalar> d = Vector<Scalar>::Zero(2);
    d(action) = d_loss;
    accumulate_policy_gradient(tr, d, params, grads);
    return grads;
}

/// Probability of action 1 under softmax(Q): the match score of a pair.
template <typename Scalar>
Scalar match_probability(const Vector<Scalar>& q_values) {
    return Scalar(1) / (Scalar(1) + std::exp(q_values(0) - q_values(1)));
}

} // namespace rlas::neural
