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
#include <cstdint>
#include <string>
#include <vector>

#include "focus/cmff.hpp"
#include "focus/egms.hpp"
#include "focus/events.hpp"
#include "focus/random.hpp"
#include "focus/ssm.hpp"
#include "focus/tokenize.hpp"

namespace focus {

enum class MaskMode {
  Adaptive,  // event-guided masks at every stage
  KeepAll,   // sparse code path, every mask forced to ones
  Dense,     // dense code path, no gather/scatter
  FixedRate, // top-k masks at a fixed kept ratio per stage, same scores
};

const char* to_string(MaskMode mode) noexcept;
MaskMode parse_mask_mode(const std::string& text);

struct ModelConfig {
  Index height = 64;
  Index width = 64;
  StageLayout stages = default_stage_layout();
  LayerShape layer;
  EgcmParams egcm;
  double beta = 1.5;
  std::uint64_t seed = 7;
  bool stage1_override = true;
  int voxel_bins = 5;
  MaskMode mask_mode = MaskMode::Adaptive;
  /// Kept ratio per stage under MaskMode::FixedRate.
  std::array<double, 4> fixed_keep{1.0, 1.0, 1.0, 1.0};
};

/// Throws ConfigError on any violated invariant (input not divisible by the
/// last stride, bad EGCM parameters, non-doubling strides, ...).
void check_config(const ModelConfig& config);

inline constexpr int kImageChannels = 3;

/// Every learned tensor of the two backbones and the three fusion blocks.
struct ModelWeights {
  LinearMap<double> embed_image;
  LinearMap<double> embed_event;
  std::array<LinearMap<double>, 3> merge_image;  // into stages 2..4
  std::array<LinearMap<double>, 3> merge_event;
  std::array<std::vector<LayerWeights<double>>, 4> blocks_image;
  std::array<std::vector<LayerWeights<double>>, 4> blocks_event;
  std::array<CmffWeights<double>, 3> fusion;  // after stages 2..4
};

/// Deterministic seeded construction; same (config, seed) gives bit-identical
/// weights.
ModelWeights init_weights(const ModelConfig& config, std::uint64_t seed);

/// Named tensor view over a weight set, in a fixed order. Vectors are exposed
/// as n x 1 matrices.
struct NamedTensor {
  std::string name;
  RowMatrix<double> value;
};

std::vector<NamedTensor> flatten_weights(const ModelWeights& weights);

/// Inverse of flatten_weights for a weight set of the given configuration.
/// Throws ConfigError when names or shapes do not line up.
ModelWeights unflatten_weights(const ModelConfig& config, const std::vector<NamedTensor>& tensors);

}  // namespace focus
