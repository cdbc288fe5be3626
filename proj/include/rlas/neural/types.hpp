#pragma once

#include <Eigen/Dense>

#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "rlas/errors.hpp"

namespace rlas::neural {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A token sequence: one column per token, one row per embedding coordinate.
template <typename Scalar>
using Sequence = Matrix<Scalar>;

/// Sizes that determine every parameter shape of the similarity model.
struct ModelDims {
    Index embedding_dim = 60;
    Index hidden = 16;
    Index attention = 16;
    Index depth = 2;
    std::vector<Index> dense_hidden{8};
    Index max_length = 80;

    /// Width of one BLSTM output column (forward and backward halves).
    Index encoded() const { return 2 * hidden; }
    /// Width of the [q ; a ; |q - a|] vector fed to the dense head.
    Index feedforward_input() const { return 3 * encoded(); }

    void validate() const {
        if (embedding_dim < 1 || hidden < 1 || attention < 1 || depth < 1 || max_length < 1)
            throw ConfigError("model dimensions must all be positive");
        for (Index w : dense_hidden)
            if (w < 1) throw ConfigError("dense hidden widths must be positive");
    }

    bool operator==(const ModelDims&) const = default;
};

template <typename Scalar>
struct LstmParams {
    Matrix<Scalar> W_i, W_f, W_j, W_o;
    Matrix<Scalar> U_i, U_f, U_j, U_o;
    Vector<Scalar> b_i, b_f, b_j, b_o;

    static LstmParams zeros(Index input, Index hidden) {
        LstmParams p;
        for (auto* m : {&p.W_i, &p.W_f, &p.W_j, &p.W_o}) m->setZero(hidden, input);
        for (auto* m : {&p.U_i, &p.U_f, &p.U_j, &p.U_o}) m->setZero(hidden, hidden);
        for (auto* v : {&p.b_i, &p.b_f, &p.b_j, &p.b_o}) v->setZero(hidden);
        return p;
    }

    Index input_dim() const { return W_i.cols(); }
    Index hidden_dim() const { return W_i.rows(); }

    void validate() const {
        const Index in = input_dim(), h = hidden_dim();
        for (const auto* m : {&W_i, &W_f, &W_j, &W_o})
            if (m->rows() != h || m->cols() != in) throw ShapeError("LSTM input matrices disagree in shape");
        for (const auto* m : {&U_i, &U_f, &U_j, &U_o})
            if (m->rows() != h || m->cols() != h) throw ShapeError("LSTM recurrent matrices must be hidden x hidden");
        for (const auto* v : {&b_i, &b_f, &b_j, &b_o})
            if (v->size() != h) throw ShapeError("LSTM bias length must equal hidden dim");
    }
};

/// One bidirectional layer: independent forward and backward cells.
template <typename Scalar>
struct BlstmLayerParams {
    LstmParams<Scalar> forward;
    LstmParams<Scalar> backward;
};

template <typename Scalar>
struct AttentionParams {
    Matrix<Scalar> W;         // attention x encoded
    Vector<Scalar> b;         // attention
    Vector<Scalar> projection; // attention, reduces tanh(W h + b) to a score

    static AttentionParams zeros(Index attention, Index encoded) {
        return {Matrix<Scalar>::Zero(attention, encoded), Vector<Scalar>::Zero(attention),
                Vector<Scalar>::Zero(attention)};
    }
};

template <typename Scalar>
struct DenseLayer {
    Matrix<Scalar> W;
    Vector<Scalar> b;
};

template <typename Scalar>
struct FeedForwardParams {
    std::vector<DenseLayer<Scalar>> layers;

    static FeedForwardParams zeros(Index input, const std::vector<Index>& hidden) {
        FeedForwardParams p;
        Index in = input;
        for (Index w : hidden) {
            p.layers.push_back({Matrix<Scalar>::Zero(w, in), Vector<Scalar>::Zero(w)});
            in = w;
        }
        p.layers.push_back({Matrix<Scalar>::Zero(2, in), Vector<Scalar>::Zero(2)});
        return p;
    }

    void validate() const {
        if (layers.empty()) throw ShapeError("feedforward head has no layers");
        for (std::size_t l = 0; l < layers.size(); ++l) {
            if (layers[l].b.size() != layers[l].W.rows()) throw ShapeError("dense bias/weight mismatch");
            if (l > 0 && layers[l].W.cols() != layers[l - 1].W.rows())
                throw ShapeError("dense layer widths do not chain");
        }
        if (layers.back().W.rows() != 2) throw ShapeError("final dense layer must have width 2");
    }
};

/// Every trainable weight of the similarity model. Also used for gradients,
/// which have exactly the same shapes.
template <typename Scalar>
struct ModelParams {
    std::vector<BlstmLayerParams<Scalar>> question_encoder;
    std::vector<BlstmLayerParams<Scalar>> answer_encoder;
    AttentionParams<Scalar> question_attention;
    AttentionParams<Scalar> answer_attention;
    FeedForwardParams<Scalar> feedforward;

    static ModelParams zeros(const ModelDims& dims) {
        dims.validate();
        ModelParams p;
        for (auto* enc : {&p.question_encoder, &p.answer_encoder}) {
            Index in = dims.embedding_dim;
            for (Index l = 0; l < dims.depth; ++l) {
                enc->push_back({LstmParams<Scalar>::zeros(in, dims.hidden),
                                LstmParams<Scalar>::zeros(in, dims.hidden)});
                in = dims.encoded();
            }
        }
        p.question_attention = AttentionParams<Scalar>::zeros(dims.attention, dims.encoded());
        p.answer_attention = AttentionParams<Scalar>::zeros(dims.attention, dims.encoded());
        p.feedforward = FeedForwardParams<Scalar>::zeros(dims.feedforward_input(), dims.dense_hidden);
        return p;
    }
};

template <typename Scalar>
using Gradients = ModelParams<Scalar>;

/// Embedded question/answer pair ready for the encoders.
template <typename Scalar>
struct EmbeddedPair {
    Sequence<Scalar> question;
    Sequence<Scalar> answer;
};

// Tensor visitors. `f(name, tensors...)` is called once per matrix/bias in
// the canonical storage order, with the same member taken from each of the
// parameter objects passed in. The order here defines the flat layout.

namespace detail {

template <typename F, typename... P>
void visit_lstm(const std::string& prefix, F& f, P&... p) {
    f(prefix + "W_i", p.W_i...);
    f(prefix + "W_f", p.W_f...);
    f(prefix + "W_j", p.W_j...);
    f(prefix + "W_o", p.W_o...);
    f(prefix + "U_i", p.U_i...);
    f(prefix + "U_f", p.U_f...);
    f(prefix + "U_j", p.U_j...);
    f(prefix + "U_o", p.U_o...);
    f(prefix + "b_i", p.b_i...);
    f(prefix + "b_f", p.b_f...);
    f(prefix + "b_j", p.b_j...);
    f(prefix + "b_o", p.b_o...);
}

template <typename F, typename... P>
void visit_encoder(const std::string& prefix, F& f, P&... enc) {
    const auto depth = std::get<0>(std::forward_as_tuple(enc...)).size();
    if (((enc.size() != depth) || ...)) throw ShapeError("encoder depth mismatch");
    for (std::size_t l = 0; l < depth; ++l) {
        const std::string layer = prefix + "layer" + std::to_string(l) + ".";
        visit_lstm(layer + "forward.", f, enc[l].forward...);
        visit_lstm(layer + "backward.", f, enc[l].backward...);
    }
}

template <typename F, typename... P>
void visit_attention(const std::string& prefix, F& f, P&... p) {
    f(prefix + "W", p.W...);
    f(prefix + "b", p.b...);
    f(prefix + "projection", p.projection...);
}

template <typename F, typename... P>
void visit_feedforward(F& f, P&... p) {
    const auto n = std::get<0>(std::forward_as_tuple(p...)).layers.size();
    if (((p.layers.size() != n) || ...)) throw ShapeError("feedforward depth mismatch");
    for (std::size_t l = 0; l < n; ++l) {
        const std::string layer = "feedforward.layer" + std::to_string(l) + ".";
        f(layer + "W", p.layers[l].W...);
        f(layer + "b", p.layers[l].b...);
    }
}

} // namespace detail

/// Visits every tensor of one or more congruent ModelParams objects in
/// layout order: question BLSTM, answer BLSTM, question attention, answer
/// attention, feedforward layers.
template <typename F, typename... P>
void for_each_tensor(F&& f, P&... p) {
    detail::visit_encoder("question.", f, p.question_encoder...);
    detail::visit_encoder("answer.", f, p.answer_encoder...);
    detail::visit_attention("question_attention.", f, p.question_attention...);
    detail::visit_attention("answer_attention.", f, p.answer_attention...);
    detail::visit_feedforward(f, p.feedforward...);
}

/// Zero-valued object with the shapes of `like`.
template <typename Scalar>
ModelParams<Scalar> zeros_like(const ModelParams<Scalar>& like) {
    ModelParams<Scalar> out = like;
    for_each_tensor([](const std::string&, auto& t) { t.setZero(); }, out);
    return out;
}

/// y += alpha * x, tensor by tensor.
template <typename Scalar>
void axpy(Scalar alpha, const ModelParams<Scalar>& x, ModelParams<Scalar>& y) {
    for_each_tensor(
        [alpha](const std::string&, const auto& xs, auto& ys) {
            if (xs.rows() != ys.rows() || xs.cols() != ys.cols()) throw ShapeError("parameter shapes differ");
            ys += alpha * xs;
        },
        x, y);
}

template <typename Scalar>
bool all_finite(const ModelParams<Scalar>& p) {
    bool ok = true;
    for_each_tensor([&ok](const std::string&, const auto& t) { ok = ok && t.allFinite(); }, p);
    return ok;
}

template <typename Scalar>
Scalar squared_norm(const ModelParams<Scalar>& p) {
    Scalar s = 0;
    for_each_tensor([&s](const std::string&, const auto& t) { s += t.squaredNorm(); }, p);
    return s;
}

template <typename Scalar>
void scale(Scalar alpha, ModelParams<Scalar>& p) {
    for_each_tensor([alpha](const std::string&, auto& t) { t *= alpha; }, p);
}

using LstmParamsd = LstmParams<double>;
using AttentionParamsd = AttentionParams<double>;
using FeedForwardParamsd = FeedForwardParams<double>;
using ModelParamsd = ModelParams<double>;
using Gradientsd = Gradients<double>;
using EmbeddedPaird = EmbeddedPair<double>;

} // namespace rlas::neural
