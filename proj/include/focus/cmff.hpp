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

#include <utility>

#include "focus/egms.hpp"
#include "focus/gather.hpp"
#include "focus/random.hpp"
#include "focus/ssm.hpp"
#include "focus/tensor.hpp"

namespace focus {

/// Tokens `keeper` retained that `other` dropped, computed as
/// keeper xor (keeper and other).
SparsificationMap complement_mask(const SparsificationMap& keeper, const SparsificationMap& other);

SparsificationMap union_mask(const SparsificationMap& a, const SparsificationMap& b);

/// Per-token multiplier: beta where the complement bit is set, 1 elsewhere.
struct EnhancementMap {
  Vector<double> values;

  Index size() const { return values.size(); }
};

EnhancementMap cae_map(const SparsificationMap& diff, double beta);

/// Scales token i of the grid by map value i across all channels.
template <typename Scalar>
TokenGrid<Scalar> cae_apply(const EnhancementMap& map, const TokenGrid<Scalar>& grid) {
  require_shape(map.size() == grid.tokens(), "enhancement map length does not match token count");
  TokenGrid<Scalar> out = grid;
  for (Index i = 0; i < grid.tokens(); ++i)
    if (map.values(i) != 1.0) out.token(i) *= static_cast<Scalar>(map.values(i));
  return out;
}

/// Alternating merge: row 2k is image token k, row 2k+1 is event token k.
/// Both sequences must have been gathered with the same mask.
template <typename Scalar>
RowMatrix<Scalar> interleave(const GatheredSequence<Scalar>& image, const GatheredSequence<Scalar>& event) {
  if (image.indices != event.indices)
    throw Error(ErrorKind::IndexMismatch, "interleaved sequences were gathered with different masks");
  require_shape(image.tokens.cols() == event.tokens.cols(), "interleaved sequences differ in width");
  const Index k = image.size();
  RowMatrix<Scalar> out(2 * k, image.tokens.cols());
  for (Index i = 0; i < k; ++i) {
    out.row(2 * i) = image.tokens.row(i);
    out.row(2 * i + 1) = event.tokens.row(i);
  }
  return out;
}

/// Even rows to the first output, odd rows to the second.
template <typename Scalar>
std::pair<RowMatrix<Scalar>, RowMatrix<Scalar>> deinterleave(const RowMatrix<Scalar>& seq) {
  if (seq.rows() % 2 != 0)
    throw Error(ErrorKind::OddLength, "cannot deinterleave a sequence of odd length",
                static_cast<std::size_t>(seq.rows()));
  const Index k = seq.rows() / 2;
  RowMatrix<Scalar> even(k, seq.cols());
  RowMatrix<Scalar> odd(k, seq.cols());
  for (Index i = 0; i < k; ++i) {
    even.row(i) = seq.row(2 * i);
    odd.row(i) = seq.row(2 * i + 1);
  }
  return {std::move(even), std::move(odd)};
}

/// 3x3 depthwise convolution with zero padding. Kernel row k holds channel
/// k's taps in row-major order.
template <typename Scalar>
TokenGrid<Scalar> depthwise_conv3x3(const TokenGrid<Scalar>& grid, const RowMatrix<Scalar>& kernel,
                                    const Vector<Scalar>& bias) {
  const Index ch = grid.channels();
  require_shape(kernel.rows() == ch && kernel.cols() == 9 && bias.size() == ch, "depthwise kernel shape");
  TokenGrid<Scalar> out(grid.hs, grid.ws, ch, grid.stride);
  for (Index i = 0; i < grid.hs; ++i)
    for (Index j = 0; j < grid.ws; ++j) {
      auto dst = out.token(grid.flat(i, j));
      dst = bias.transpose();
      for (Index di = -1; di <= 1; ++di)
        for (Index dj = -1; dj <= 1; ++dj) {
          const Index qi = i + di;
          const Index qj = j + dj;
          if (qi < 0 || qi >= grid.hs || qj < 0 || qj >= grid.ws) continue;
          const Index tap = (di + 1) * 3 + (dj + 1);
          dst += grid.token(grid.flat(qi, qj)).cwiseProduct(kernel.col(tap).transpose());
        }
    }
  return out;
}

template <typename Scalar>
struct FiMambaWeights {
  LinearMap<Scalar> image_linear;
  LinearMap<Scalar> event_linear;
  RowMatrix<Scalar> image_dw;  // C x 9
  RowMatrix<Scalar> event_dw;  // C x 9
  Vector<Scalar> image_dw_bias;
  Vector<Scalar> event_dw_bias;
  SsmParams<Scalar> forward;
  SsmParams<Scalar> backward;
};

template <typename Scalar>
struct CmffWeights {
  FiMambaWeights<Scalar> fi;
  MlpWeights<Scalar> mlp;
};

/// `with_bias = false` gives a fully bias-free preprocessing path.
template <typename Scalar>
FiMambaWeights<Scalar> random_fi_mamba_weights(Rng& rng, Index channels, Index state_dim, bool with_bias = true) {
  FiMambaWeights<Scalar> w;
  w.image_linear = random_linear<Scalar>(rng, channels, channels, with_bias);
  w.event_linear = random_linear<Scalar>(rng, channels, channels, with_bias);
  w.image_dw = rng.matrix<Scalar>(channels, 9, -1.0 / 3.0, 1.0 / 3.0);
  w.event_dw = rng.matrix<Scalar>(channels, 9, -1.0 / 3.0, 1.0 / 3.0);
  w.image_dw_bias = with_bias ? rng.vector<Scalar>(channels, -1.0 / 3.0, 1.0 / 3.0) : Vector<Scalar>::Zero(channels);
  w.event_dw_bias = with_bias ? rng.vector<Scalar>(channels, -1.0 / 3.0, 1.0 / 3.0) : Vector<Scalar>::Zero(channels);
  w.forward = random_ssm_params<Scalar>(rng, channels, state_dim);
  w.backward = random_ssm_params<Scalar>(rng, channels, state_dim);
  return w;
}

template <typename Scalar>
CmffWeights<Scalar> random_cmff_weights(Rng& rng, Index channels, const LayerShape& shape) {
  CmffWeights<Scalar> w;
  w.fi = random_fi_mamba_weights<Scalar>(rng, channels, shape.state_dim);
  w.mlp = random_mlp_weights<Scalar>(rng, channels, shape.mlp_ratio * channels);
  return w;
}

/// silu(dwconv3x3(linear(x))) over the full grid.
template <typename Scalar>
TokenGrid<Scalar> fi_preprocess(const TokenGrid<Scalar>& grid, const LinearMap<Scalar>& linear,
                                const RowMatrix<Scalar>& dw, const Vector<Scalar>& dw_bias) {
  TokenGrid<Scalar> projected = grid;
  projected.features = linear.apply(grid.features);
  TokenGrid<Scalar> mixed = depthwise_conv3x3(projected, dw, dw_bias);
  mixed.features = mixed.features.unaryExpr([](Scalar v) { return silu(v); });
  return mixed;
}

/// Focused interlaced scan. Both grids are preprocessed in full, the tokens
/// under M_I or M_E are gathered from each, interleaved, run through a
/// bidirectional scan, split and written back onto the preprocessed grids.
template <typename Scalar>
std::pair<TokenGrid<Scalar>, TokenGrid<Scalar>> fi_mamba(const TokenGrid<Scalar>& image,
                                                         const TokenGrid<Scalar>& event,
                                                         const SparsificationMap& image_mask,
                                                         const SparsificationMap& event_mask,
                                                         const FiMambaWeights<Scalar>& w) {
  require_shape(image.same_shape(event), "image and event grids disagree");
  require_shape(image_mask.size() == image.tokens() && event_mask.size() == image.tokens(),
                "mask length does not match token count");
  const TokenGrid<Scalar> pre_i = fi_preprocess(image, w.image_linear, w.image_dw, w.image_dw_bias);
  const TokenGrid<Scalar> pre_e = fi_preprocess(event, w.event_linear, w.event_dw, w.event_dw_bias);

  const SparsificationMap both = union_mask(image_mask, event_mask);
  GatheredSequence<Scalar> seq_i = gather(pre_i, both);
  GatheredSequence<Scalar> seq_e = gather(pre_e, both);
  auto [enh_i, enh_e] = deinterleave<Scalar>(bidi_scan(interleave(seq_i, seq_e), w.forward, w.backward));
  seq_i.tokens = std::move(enh_i);
  seq_e.tokens = std::move(enh_e);
  return {scatter(seq_i, pre_i), scatter(seq_e, pre_e)};
}

/// fi_mamba with every token kept, computed on the full flattening without
/// gather or scatter.
template <typename Scalar>
std::pair<TokenGrid<Scalar>, TokenGrid<Scalar>> dense_fi_mamba(const TokenGrid<Scalar>& image,
                                                               const TokenGrid<Scalar>& event,
                                                               const FiMambaWeights<Scalar>& w) {
  require_shape(image.same_shape(event), "image and event grids disagree");
  TokenGrid<Scalar> pre_i = fi_preprocess(image, w.image_linear, w.image_dw, w.image_dw_bias);
  TokenGrid<Scalar> pre_e = fi_preprocess(event, w.event_linear, w.event_dw, w.event_dw_bias);
  const Index n = image.tokens();
  RowMatrix<Scalar> seq(2 * n, image.channels());
  for (Index i = 0; i < n; ++i) {
    seq.row(2 * i) = pre_i.token(i);
    seq.row(2 * i + 1) = pre_e.token(i);
  }
  auto [enh_i, enh_e] = deinterleave<Scalar>(bidi_scan(seq, w.forward, w.backward));
  pre_i.features = std::move(enh_i);
  pre_e.features = std::move(enh_e);
  return {std::move(pre_i), std::move(pre_e)};
}

/// Cross-modality fusion: complementarity-aware enhancement in both
/// directions, focused interlaced scan, sum, then the MLP on tokens under
/// M_I or M_E.
template <typename Scalar>
TokenGrid<Scalar> cmff(const TokenGrid<Scalar>& image, const TokenGrid<Scalar>& event,
                       const SparsificationMap& image_mask, const SparsificationMap& event_mask,
                       const CmffWeights<Scalar>& w, double beta) {
  require_shape(image.same_shape(event), "image and event grids disagree");
  const TokenGrid<Scalar> cae_i = cae_apply(cae_map(complement_mask(event_mask, image_mask), beta), image);
  const TokenGrid<Scalar> cae_e = cae_apply(cae_map(complement_mask(image_mask, event_mask), beta), event);
  auto [enh_i, enh_e] = fi_mamba(cae_i, cae_e, image_mask, event_mask, w.fi);
  TokenGrid<Scalar> fused = enh_i;
  fused.features += enh_e.features;
  return sparse_mlp(fused, union_mask(image_mask, event_mask), w.mlp);
}

/// cmff with every token kept, on the dense code path.
template <typename Scalar>
TokenGrid<Scalar> dense_cmff(const TokenGrid<Scalar>& image, const TokenGrid<Scalar>& event,
                             const CmffWeights<Scalar>& w) {
  auto [enh_i, enh_e] = dense_fi_mamba(image, event, w.fi);
  TokenGrid<Scalar> fused = enh_i;
  fused.features += enh_e.features;
  return dense_mlp(fused, w.mlp);
}

}  // namespace focus
