// Copyright 2026 The focus-sparse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <vector>

#include "focus/error.hpp"

namespace focus {

using Index = Eigen::Index;

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Dense channels x height x width tensor stored as one row-major plane per
/// channel. Used for image frames and voxel grids.
template <typename Scalar>
struct PlanarTensor {
  std::vector<RowMatrix<Scalar>> planes;

  static PlanarTensor zeros(Index channels, Index height, Index width) {
    PlanarTensor t;
    t.planes.assign(static_cast<std::size_t>(channels), RowMatrix<Scalar>::Zero(height, width));
    return t;
  }

  Index channels() const { return static_cast<Index>(planes.size()); }
  Index height() const { return planes.empty() ? 0 : planes.front().rows(); }
  Index width() const { return planes.empty() ? 0 : planes.front().cols(); }

  Scalar& operator()(Index c, Index y, Index x) { return planes[static_cast<std::size_t>(c)](y, x); }
  Scalar operator()(Index c, Index y, Index x) const { return planes[static_cast<std::size_t>(c)](y, x); }

  bool all_finite() const {
    for (const auto& p : planes)
      if (!p.allFinite()) return false;
    return true;
  }
};

/// Grid of hs x ws tokens, each a C-dimensional feature row. Token (i, j)
/// lives at row i * ws + j of `features`.
template <typename Scalar>
struct TokenGrid {
  Index hs = 0;
  Index ws = 0;
  int stride = 1;
  RowMatrix<Scalar> features;

  TokenGrid() = default;
  TokenGrid(Index rows, Index cols, Index channels, int stage_stride)
      : hs(rows), ws(cols), stride(stage_stride), features(RowMatrix<Scalar>::Zero(rows * cols, channels)) {}

  Index tokens() const { return hs * ws; }
  Index channels() const { return features.cols(); }
  Index flat(Index row, Index col) const { return row * ws + col; }

  auto token(Index i) { return features.row(i); }
  auto token(Index i) const { return features.row(i); }

  bool all_finite() const { return features.allFinite(); }

  bool same_shape(const TokenGrid& other) const {
    return hs == other.hs && ws == other.ws && channels() == other.channels();
  }
};

/// y = x W^T + b applied to every row of x. An empty bias means bias-free.
template <typename Scalar>
struct LinearMap {
  RowMatrix<Scalar> weight;  // out x in
  Vector<Scalar> bias;       // out, or empty

  Index in_dim() const { return weight.cols(); }
  Index out_dim() const { return weight.rows(); }
  bool has_bias() const { return bias.size() != 0; }

  template <typename Derived>
  RowMatrix<Scalar> apply(const Eigen::MatrixBase<Derived>& x) const {
    require_shape(x.cols() == in_dim(), "linear map input width does not match weight");
    // One matrix-vector product per row keeps every output row a function of
    // its own input row only, bit for bit, whatever the batch size.
    RowMatrix<Scalar> y(x.rows(), out_dim());
    for (Index i = 0; i < x.rows(); ++i) {
      y.row(i).noalias() = x.row(i) * weight.transpose();
      if (has_bias()) y.row(i) += bias.transpose();
    }
    return y;
  }
};

template <typename Scalar>
Scalar silu(Scalar v) {
  return v / (Scalar(1) + std::exp(-v));
}

template <typename Scalar>
Scalar softplus(Scalar v) {
  // log1p(exp(v)) without overflow for large v
  return v > Scalar(20) ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
}

template <typename Scalar>
Scalar gelu(Scalar v) {
  return Scalar(0.5) * v * (Scalar(1) + std::erf(v / std::sqrt(Scalar(2))));
}

/// Per-row layer normalization with affine gain and bias.
template <typename Scalar>
RowMatrix<Scalar> layer_norm(const RowMatrix<Scalar>& x, const Vector<Scalar>& gain, const Vector<Scalar>& bias,
                             Scalar eps = Scalar(1e-5)) {
  require_shape(gain.size() == x.cols() && bias.size() == x.cols(), "layer norm parameter width");
  RowMatrix<Scalar> out(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const Scalar mean = x.row(i).mean();
    const Scalar var = (x.row(i).array() - mean).square().mean();
    const Scalar inv = Scalar(1) / std::sqrt(var + eps);
    out.row(i) = ((x.row(i).array() - mean) * inv * gain.transpose().array() + bias.transpose().array()).matrix();
  }
  return out;
}

}  // namespace focus
