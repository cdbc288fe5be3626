#pragma once

#include <string>
#include <vector>

#include "rlas/neural/types.hpp"

namespace rlas::abc {

using neural::Index;
using WeightVector = Eigen::VectorXd;

/// One named matrix or bias inside the flat weight vector.
struct Segment {
    std::string name;
    Index rows = 0;
    Index cols = 0;
    Index offset = 0;
    Index length() const { return rows * cols; }
};

/// Placement of every model weight in one flat vector. Matrices are stored
/// row by row; segments follow the model's canonical tensor order.
class ParameterLayout {
public:
    explicit ParameterLayout(const neural::ModelDims& dims) : dims_(dims) {
        const auto shape = neural::ModelParams<double>::zeros(dims);
        Index offset = 0;
        neural::for_each_tensor(
            [&](const std::string& name, const auto& t) {
                segments_.push_back({name, t.rows(), t.cols(), offset});
                offset += t.size();
            },
            shape);
        size_ = offset;
    }

    const neural::ModelDims& dims() const { return dims_; }
    const std::vector<Segment>& segments() const { return segments_; }
    /// Total number of weights D.
    Index size() const { return size_; }

    /// Compact text form of the dims, written into checkpoint headers.
    std::string descriptor() const {
        std::string s = "emb=" + std::to_string(dims_.embedding_dim) + ";hidden=" + std::to_string(dims_.hidden) +
                        ";attn=" + std::to_string(dims_.attention) + ";depth=" + std::to_string(dims_.depth) +
                        ";dense=";
        for (std::size_t i = 0; i < dims_.dense_hidden.size(); ++i)
            s += (i ? "x" : "") + std::to_string(dims_.dense_hidden[i]);
        s += ";D=" + std::to_string(size_);
        return s;
    }

    template <typename Scalar>
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> encode(const neural::ModelParams<Scalar>& params) const {
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(size_);
        std::size_t k = 0;
        neural::for_each_tensor(
            [&](const std::string&, const auto& t) {
                if (k >= segments_.size() || t.rows() != segments_[k].rows || t.cols() != segments_[k].cols)
                    throw ShapeError("parameters do not match layout");
                row_major(out, segments_[k]) = t;
                ++k;
            },
            params);
        if (k != segments_.size()) throw ShapeError("parameters do not match layout");
        return out;
    }

    template <typename Scalar>
    neural::ModelParams<Scalar> decode(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& vec) const {
        if (vec.size() != size_)
            throw ShapeError("weight vector length " + std::to_string(vec.size()) + " != layout size " +
                             std::to_string(size_));
        auto params = neural::ModelParams<Scalar>::zeros(dims_);
        std::size_t k = 0;
        neural::for_each_tensor(
            [&](const std::string&, auto& t) {
                t = row_major(vec, segments_[k]);
                ++k;
            },
            params);
        return params;
    }

private:
    template <typename Scalar>
    static auto row_major(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& vec, const Segment& s) {
        using RowMajor = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        return Eigen::Map<RowMajor>(vec.data() + s.offset, s.rows, s.cols);
    }

    template <typename Scalar>
    static auto row_major(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& vec, const Segment& s) {
        using RowMajor = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        return Eigen::Map<const RowMajor>(vec.data() + s.offset, s.rows, s.cols);
    }

    neural::ModelDims dims_;
    std::vector<Segment> segments_;
    Index size_ = 0;
};

} // namespace rlas::abc
