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

#include "focus/pipeline.hpp"

#include <cmath>

#include "focus/cmff.hpp"
#include "focus/ssm.hpp"
#include "focus/tokenize.hpp"

namespace focus {

double BackboneResult::mean_kept_ratio() const {
  double total = 0.0;
  for (const auto& s : stages) total += s.image_kept_ratio() + s.event_kept_ratio();
  return total / (2.0 * static_cast<double>(stages.size()));
}

namespace {

TokenGrid<double> run_blocks(TokenGrid<double> grid, const SparsificationMap& mask,
                             const std::vector<LayerWeights<double>>& blocks, MaskMode mode) {
  for (const auto& w : blocks) grid = mode == MaskMode::Dense ? dense_vss_layer(grid, w) : sparse_vss_layer(grid, mask, w);
  return grid;
}

}  // namespace

BackboneResult run_backbone(const PlanarTensor<double>& image, const EventStream& stream, const ModelConfig& config,
                            const ModelWeights& weights) {
  check_config(config);
  require_shape(image.channels() == kImageChannels && image.height() == config.height &&
                    image.width() == config.width,
                "image must be 3 x " + std::to_string(config.height) + " x " + std::to_string(config.width));
  require_shape(stream.geometry().height == config.height && stream.geometry().width == config.width,
                "event sensor size does not match the configured input");

  const VoxelGrid voxels = voxelize(stream, config.voxel_bins);
  BackboneResult result;
  result.ratio = event_spatial_ratio(stream, config.egcm.epsilon_r);

  TokenGrid<double> image_grid;
  TokenGrid<double> event_grid;
  std::array<StageMasks, 4> masks;
  for (std::size_t s = 0; s < 4; ++s) {
    const StageConfig& stage = config.stages[s];
    if (s == 0) {
      image_grid = patch_embed(image, stage.stride, weights.embed_image);
      event_grid = patch_embed(voxels, stage.stride, weights.embed_event);
    } else {
      image_grid = patch_merge(image_grid, weights.merge_image[s - 1]);
      event_grid = patch_merge(event_grid, weights.merge_event[s - 1]);
    }

    StageOutput& out = result.stages[s];
    out.stage = stage.stage_index;
    if (config.mask_mode == MaskMode::Adaptive || config.mask_mode == MaskMode::FixedRate) {
      EgmsResult e = egms_stage_with_ratio(image_grid, event_grid, stream, stage, config.egcm, result.ratio,
                                           EgmsOptions{config.stage1_override});
      if (config.mask_mode == MaskMode::FixedRate) {
        const auto k = static_cast<Index>(std::lround(config.fixed_keep[s] * static_cast<double>(image_grid.tokens())));
        e.event = top_k_mask(e.event_probabilities, k);
        e.image = top_k_mask(e.image_probabilities, k);
      }
      out.image_mask = std::move(e.image);
      out.event_mask = std::move(e.event);
      out.image_probabilities = std::move(e.image_probabilities);
      out.event_probabilities = std::move(e.event_probabilities);
    } else {
      out.image_mask = SparsificationMap::filled(image_grid.hs, image_grid.ws, true);
      out.event_mask = out.image_mask;
    }

    image_grid = run_blocks(std::move(image_grid), out.image_mask, weights.blocks_image[s], config.mask_mode);
    event_grid = run_blocks(std::move(event_grid), out.event_mask, weights.blocks_event[s], config.mask_mode);

    if (s > 0) {
      const CmffWeights<double>& fw = weights.fusion[s - 1];
      out.fused = config.mask_mode == MaskMode::Dense
                      ? dense_cmff(image_grid, event_grid, fw)
                      : cmff(image_grid, event_grid, out.image_mask, out.event_mask, fw, config.beta);
    }
    out.image = image_grid;
    out.event = event_grid;
    masks[s] = {out.image_mask, out.event_mask};
  }
  result.flops = count_flops(config, masks);
  return result;
}

}  // namespace focus
