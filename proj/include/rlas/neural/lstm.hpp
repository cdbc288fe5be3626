#pragma once

#include <vector>

#include "rlas/neural/types.hpp"

namespace rlas::neural {

template <typename Scalar>
Vector<Scalar> sigmoid(const Vector<Scalar>& z) {
    return (Scalar(1) + (-z.array()).exp()).inverse().matrix();
}

template <typename Scalar>
struct LstmState {
    Vector<Scalar> h;
    Vector<Scalar> c;
};

template <typename Scalar>
void check_step_shapes(const Vector<Scalar>& x, const Vector<Scalar>& h_prev, const Vector<Scalar>& c_prev,
                       const LstmParams<Scalar>& p) {
    if (x.size() != p.input_dim()) throw ShapeError("LSTM input has wrong dimension");
    if (h_prev.size() != p.hidden_dim() || c_prev.size() != p.hidden_dim())
        throw ShapeError("LSTM state has wrong dimension");
    if (!x.allFinite() || !h_prev.allFinite() || !c_prev.allFinite())
        throw NumericError("non-finite LSTM input");
}

/// One LSTM time step with sigmoid gates and tanh candidate/output.
template <typename Scalar>
LstmState<Scalar> lstm_step(const Vector<Scalar>& x, const Vector<Scalar>& h_prev, const Vector<Scalar>& c_prev,
                            const LstmParams<Scalar>& p) {
    check_step_shapes(x, h_prev, c_prev, p);
    const Vector<Scalar> i = sigmoid<Scalar>(p.W_i * x + p.U_i * h_prev + p.b_i);
    const Vector<Scalar> f = sigmoid<Scalar>(p.W_f * x + p.U_f * h_prev + p.b_f);
    const Vector<Scalar> j = (p.W_j * x + p.U_j * h_prev + p.b_j).array().tanh().matrix();
    const Vector<Scalar> o = sigmoid<Scalar>(p.W_o * x + p.U_o * h_prev + p.b_o);
    LstmState<Scalar> out;
    out.c = f.cwiseProduct(c_prev) + i.cwiseProduct(j);
    out.h = o.cwiseProduct(out.c.array().tanh().matrix());
    return out;
}

/// Gate activations and cell states of one direction, one column per timestep.
template <typename Scalar>
struct LstmRunTrace {
    Matrix<Scalar> i, f, j, o; // j is the tanh candidate
    Matrix<Scalar> c, tanh_c;
};

/// Forward pass of one bidirectional layer, kept for backpropagation.
template <typename Scalar>
struct BlstmTrace {
    Sequence<Scalar> input;
    LstmRunTrace<Scalar> forward;
    LstmRunTrace<Scalar> backward;
    Matrix<Scalar> output; // 2H x T: forward states on top, backward states below
};

namespace detail {

template <typename Scalar>
void gate_inputs(const Sequence<Scalar>& seq, const Matrix<Scalar>& W, const Vector<Scalar>& b, Matrix<Scalar>& out) {
    out.noalias() = W * seq;
    out.colwise() += b;
}

// Runs one direction over the sequence, writing h into rows [row, row + H) of `output`.
template <typename Scalar>
void run_direction(const Sequence<Scalar>& seq, const LstmParams<Scalar>& p, bool reversed, Index row,
                   LstmRunTrace<Scalar>& tr, Matrix<Scalar>& output) {
    const Index T = seq.cols(), H = p.hidden_dim();
    gate_inputs(seq, p.W_i, p.b_i, tr.i);
    gate_inputs(seq, p.W_f, p.b_f, tr.f);
    gate_inputs(seq, p.W_j, p.b_j, tr.j);
    gate_inputs(seq, p.W_o, p.b_o, tr.o);
    tr.c.resize(H, T);
    tr.tanh_c.resize(H, T);
    for (Index k = 0; k < T; ++k) {
        const Index t = reversed ? T - 1 - k : k;
        if (k > 0) {
            const Index prev = reversed ? t + 1 : t - 1;
            const auto h_prev = output.col(prev).segment(row, H);
            tr.i.col(t).noalias() += p.U_i * h_prev;
            tr.f.col(t).noalias() += p.U_f * h_prev;
            tr.j.col(t).noalias() += p.U_j * h_prev;
            tr.o.col(t).noalias() += p.U_o * h_prev;
        }
        tr.i.col(t).array() = (Scalar(1) + (-tr.i.col(t).array()).exp()).inverse();
        tr.f.col(t).array() = (Scalar(1) + (-tr.f.col(t).array()).exp()).inverse();
        tr.j.col(t).array() = tr.j.col(t).array().tanh();
        tr.o.col(t).array() = (Scalar(1) + (-tr.o.col(t).array()).exp()).inverse();
        if (k > 0) {
            const Index prev = reversed ? t + 1 : t - 1;
            tr.c.col(t).array() = tr.f.col(t).array() * tr.c.col(prev).array() + tr.i.col(t).array() * tr.j.col(t).array();
        } else {
            tr.c.col(t).array() = tr.i.col(t).array() * tr.j.col(t).array();
        }
        tr.tanh_c.col(t).array() = tr.c.col(t).array().tanh();
        output.col(t).segment(row, H).array() = tr.o.col(t).array() * tr.tanh_c.col(t).array();
    }
}

// Backpropagates d(loss)/d(h) of one direction; accumulates into `g` and `d_input`.
template <typename Scalar>
void backprop_direction(const BlstmTrace<Scalar>& trace, const LstmRunTrace<Scalar>& tr, const Matrix<Scalar>& d_output,
                        const LstmParams<Scalar>& p, bool reversed, Index row, LstmParams<Scalar>& g,
                        Matrix<Scalar>& d_input) {
    const Index T = trace.input.cols(), H = p.hidden_dim();
    Matrix<Scalar> a_i(H, T), a_f(H, T), a_j(H, T), a_o(H, T);
    Matrix<Scalar> h_prev = Matrix<Scalar>::Zero(H, T);
    Vector<Scalar> dh = Vector<Scalar>::Zero(H), dc = Vector<Scalar>::Zero(H);
    for (Index k = T; k-- > 0;) {
        const Index t = reversed ? T - 1 - k : k;
        const bool first = k == 0;
        const Index prev = reversed ? t + 1 : t - 1;
        const auto i = tr.i.col(t).array(), f = tr.f.col(t).array(), j = tr.j.col(t).array(), o = tr.o.col(t).array();
        const auto tc = tr.tanh_c.col(t).array();
        dh += d_output.col(t).segment(row, H);
        dc.array() += dh.array() * o * (Scalar(1) - tc.square());
        a_o.col(t).array() = dh.array() * tc * o * (Scalar(1) - o);
        a_i.col(t).array() = dc.array() * j * i * (Scalar(1) - i);
        a_j.col(t).array() = dc.array() * i * (Scalar(1) - j.square());
        if (first) {
            a_f.col(t).setZero();
        } else {
            a_f.col(t).array() = dc.array() * tr.c.col(prev).array() * f * (Scalar(1) - f);
            h_prev.col(t) = trace.output.col(prev).segment(row, H);
        }
        dh.noalias() = p.U_i.transpose() * a_i.col(t);
        dh.noalias() += p.U_f.transpose() * a_f.col(t);
        dh.noalias() += p.U_j.transpose() * a_j.col(t);
        dh.noalias() += p.U_o.transpose() * a_o.col(t);
        dc.array() *= f;
    }
    const auto accumulate = [&](const Matrix<Scalar>& a, const Matrix<Scalar>& W, Matrix<Scalar>& gW,
                                Matrix<Scalar>& gU, Vector<Scalar>& gb) {
        gW.noalias() += a * trace.input.transpose();
        gU.noalias() += a * h_prev.transpose();
        gb += a.rowwise().sum();
        d_input.noalias() += W.transpose() * a;
    };
    accumulate(a_i, p.W_i, g.W_i, g.U_i, g.b_i);
    accumulate(a_f, p.W_f, g.W_f, g.U_f, g.b_f);
    accumulate(a_j, p.W_j, g.W_j, g.U_j, g.b_j);
    accumulate(a_o, p.W_o, g.W_o, g.U_o, g.b_o);
}

} // namespace detail

template <typename Scalar>
BlstmTrace<Scalar> blstm_forward_traced(const Sequence<Scalar>& seq, const LstmParams<Scalar>& fwd,
                                        const LstmParams<Scalar>& bwd) {
    if (seq.cols() < 1) throw ShapeError("empty sequence");
    if (fwd.hidden_dim() != bwd.hidden_dim()) throw ShapeError("forward and backward cells differ in hidden dim");
    if (seq.rows() != fwd.input_dim() || seq.rows() != bwd.input_dim())
        throw ShapeError("LSTM input has wrong dimension");
    if (!seq.allFinite()) throw NumericError("non-finite LSTM input");
    const Index H = fwd.hidden_dim();

    BlstmTrace<Scalar> tr;
    tr.input = seq;
    tr.output.resize(2 * H, seq.cols());
    detail::run_direction(seq, fwd, false, 0, tr.forward, tr.output);
    detail::run_direction(seq, bwd, true, H, tr.backward, tr.output);
    return tr;
}

/// Per-timestep [forward ; backward] hidden states, one column per token.
template <typename Scalar>
Matrix<Scalar> blstm_forward(const Sequence<Scalar>& seq, const LstmParams<Scalar>& fwd,
                             const LstmParams<Scalar>& bwd) {
    return blstm_forward_traced(seq, fwd, bwd).output;
}

/// Returns d(loss)/d(input sequence) given d(loss)/d(output).
template <typename Scalar>
Matrix<Scalar> blstm_backward(const BlstmTrace<Scalar>& tr, const Matrix<Scalar>& d_output,
                              const LstmParams<Scalar>& fwd, const LstmParams<Scalar>& bwd, LstmParams<Scalar>& g_fwd,
                              LstmParams<Scalar>& g_bwd) {
    Matrix<Scalar> d_input = Matrix<Scalar>::Zero(fwd.input_dim(), tr.input.cols());
    detail::backprop_direction(tr, tr.forward, d_output, fwd, false, 0, g_fwd, d_input);
    detail::backprop_direction(tr, tr.backward, d_output, bwd, true, fwd.hidden_dim(), g_bwd, d_input);
    return d_input;
}

/// Stacked bidirectional encoder; layer l consumes layer l-1's output.
template <typename Scalar>
std::vector<BlstmTrace<Scalar>> encode_traced(const Sequence<Scalar>& seq,
                                              const std::vector<BlstmLayerParams<Scalar>>& layers) {
    if (layers.empty()) throw ShapeError("encoder has no layers");
    std::vector<BlstmTrace<Scalar>> traces;
    traces.reserve(layers.size());
    const Sequence<Scalar>* input = &seq;
    for (const auto& layer : layers) {
        traces.push_back(blstm_forward_traced(*input, layer.forward, layer.backward));
        input = &traces.back().output;
    }
    return traces;
}

template <typename Scalar>
void encode_backward(const std::vector<BlstmTrace<Scalar>>& traces, Matrix<Scalar> d_output,
                     const std::vector<BlstmLayerParams<Scalar>>& layers,
                     std::vector<BlstmLayerParams<Scalar>>& grads) {
    for (std::size_t l = layers.size(); l-- > 0;) {
        d_output = blstm_backward(traces[l], d_output, layers[l].forward, layers[l].backward, grads[l].forward,
                                  grads[l].backward);
    }
}

} // namespace rlas::neural
