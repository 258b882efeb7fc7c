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
#include <optional>

#include "focus/egms.hpp"
#include "focus/events.hpp"
#include "focus/flops.hpp"
#include "focus/model.hpp"

namespace focus {

struct StageOutput {
  int stage = 1;
  TokenGrid<double> image;  // after the stage's VSS layers
  TokenGrid<double> event;
  std::optional<TokenGrid<double>> fused;  // stages 2-4
  SparsificationMap image_mask;
  SparsificationMap event_mask;
  /// Softmax-normalized scores behind the masks; empty when the masks were
  /// forced rather than computed.
  ScoreMap image_probabilities;
  ScoreMap event_probabilities;

  double image_kept_ratio() const { return image_mask.kept_ratio(); }
  double event_kept_ratio() const { return event_mask.kept_ratio(); }
};

struct BackboneResult {
  std::array<StageOutput, 4> stages;
  FlopReport flops;
  double ratio = 0.0;  // event spatial ratio of the sample

  /// Mean of the image and event kept ratios over all four stages.
  double mean_kept_ratio() const;
};

/// Four-stage dual backbone. Both modalities are tokenized, masked by EGMS
/// at every stage entry, run through their stage's VSS layers and fused
/// after stages 2-4. `image` is 3 x H x W; the stream's sensor must be
/// H x W.
BackboneResult run_backbone(const PlanarTensor<double>& image, const EventStream& stream, const ModelConfig& config,
                            const ModelWeights& weights);

}  // namespace focus
