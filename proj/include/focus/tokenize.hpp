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

#include <array>
#include <string>

#include "focus/tensor.hpp"

namespace focus {

struct StageConfig {
  int stage_index = 1;  // 1..4
  int stride = 4;
  Index channels = 16;
  int block_count = 1;
};

/// Four stages with strides patch, 2*patch, 4*patch, 8*patch.
using StageLayout = std::array<StageConfig, 4>;

inline StageLayout default_stage_layout() {
  return {StageConfig{1, 4, 16, 1}, StageConfig{2, 8, 32, 1}, StageConfig{3, 16, 64, 2},
          StageConfig{4, 32, 128, 1}};
}

/// Throws ConfigError unless stage indices run 1..4 and strides double.
void check_stage_layout(const StageLayout& layout);

/// Non-overlapping P x P patch embedding. The patch at token (i, j) is
/// flattened channel-major, then row, then column:
/// index = c * P * P + dy * P + dx.
template <typename Scalar>
TokenGrid<Scalar> patch_embed(const PlanarTensor<Scalar>& input, int patch, const LinearMap<Scalar>& proj) {
  require_shape(patch > 0, "patch size must be positive");
  const Index cin = input.channels();
  const Index h = input.height();
  const Index w = input.width();
  require_shape(h % patch == 0 && w % patch == 0,
                "input " + std::to_string(h) + "x" + std::to_string(w) + " not divisible by patch " +
                    std::to_string(patch));
  const Index flat_len = cin * patch * patch;
  require_shape(proj.in_dim() == flat_len, "patch projection expects " + std::to_string(flat_len) + " inputs");

  const Index hs = h / patch;
  const Index ws = w / patch;
  RowMatrix<Scalar> patches(hs * ws, flat_len);
  for (Index i = 0; i < hs; ++i)
    for (Index j = 0; j < ws; ++j) {
      Index k = 0;
      for (Index c = 0; c < cin; ++c)
        for (Index dy = 0; dy < patch; ++dy)
          for (Index dx = 0; dx < patch; ++dx) patches(i * ws + j, k++) = input(c, i * patch + dy, j * patch + dx);
    }

  TokenGrid<Scalar> grid;
  grid.hs = hs;
  grid.ws = ws;
  grid.stride = patch;
  grid.features = proj.apply(patches);
  return grid;
}

/// 2x downsampling. Each output token projects the concatenation of its 2x2
/// neighborhood in row-major order: (0,0), (0,1), (1,0), (1,1).
template <typename Scalar>
TokenGrid<Scalar> patch_merge(const TokenGrid<Scalar>& grid, const LinearMap<Scalar>& proj) {
  require_shape(grid.hs % 2 == 0 && grid.ws % 2 == 0, "patch merge needs even grid dimensions");
  const Index c = grid.channels();
  require_shape(proj.in_dim() == 4 * c, "merge projection expects 4C inputs");

  const Index hs = grid.hs / 2;
  const Index ws = grid.ws / 2;
  RowMatrix<Scalar> concat(hs * ws, 4 * c);
  for (Index i = 0; i < hs; ++i)
    for (Index j = 0; j < ws; ++j) {
      const Index out = i * ws + j;
      concat.block(out, 0 * c, 1, c) = grid.token(grid.flat(2 * i, 2 * j));
      concat.block(out, 1 * c, 1, c) = grid.token(grid.flat(2 * i, 2 * j + 1));
      concat.block(out, 2 * c, 1, c) = grid.token(grid.flat(2 * i + 1, 2 * j));
      concat.block(out, 3 * c, 1, c) = grid.token(grid.flat(2 * i + 1, 2 * j + 1));
    }

  TokenGrid<Scalar> merged;
  merged.hs = hs;
  merged.ws = ws;
  merged.stride = grid.stride * 2;
  merged.features = proj.apply(concat);
  return merged;
}

}  // namespace focus
