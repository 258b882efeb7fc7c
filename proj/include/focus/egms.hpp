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

#include <cstdint>
#include <vector>

#include "focus/events.hpp"
#include "focus/tensor.hpp"
#include "focus/tokenize.hpp"

namespace focus {

/// One score per token, laid out on the hs x ws token grid in row-major
/// order. Scores are always double precision.
struct ScoreMap {
  Index hs = 0;
  Index ws = 0;
  Vector<double> values;

  Index size() const { return values.size(); }
  double operator()(Index row, Index col) const { return values(row * ws + col); }
};

/// Binary keep/drop decision per token.
class SparsificationMap {
 public:
  SparsificationMap() = default;
  SparsificationMap(Index hs, Index ws, std::vector<std::uint8_t> bits);

  static SparsificationMap filled(Index hs, Index ws, bool keep);

  Index hs() const { return hs_; }
  Index ws() const { return ws_; }
  Index size() const { return static_cast<Index>(bits_.size()); }
  Index kept_count() const { return kept_; }
  double kept_ratio() const { return bits_.empty() ? 0.0 : static_cast<double>(kept_) / static_cast<double>(size()); }

  bool operator[](Index i) const { return bits_[static_cast<std::size_t>(i)] != 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  /// Ascending token positions of the set bits.
  std::vector<Index> kept_indices() const;

  friend bool operator==(const SparsificationMap&, const SparsificationMap&) = default;

 private:
  Index hs_ = 0;
  Index ws_ = 0;
  std::vector<std::uint8_t> bits_;
  Index kept_ = 0;
};

struct EgcmParams {
  double rho = 2.0;
  double epsilon_r = kDefaultRatioFloor;
  double sigma = 1.0;
  int neighborhood = 1;  // radius of the square window around each token
};

void check_egcm_params(const EgcmParams& params);

/// L2 norm of each token's feature vector.
template <typename Scalar>
ScoreMap score_image_l2(const TokenGrid<Scalar>& grid) {
  ScoreMap s{grid.hs, grid.ws, Vector<double>(grid.tokens())};
  for (Index i = 0; i < grid.tokens(); ++i) {
    double acc = 0.0;
    for (Index c = 0; c < grid.channels(); ++c) {
      const auto v = static_cast<double>(grid.features(i, c));
      acc += v * v;
    }
    s.values(i) = std::sqrt(acc);
  }
  return s;
}

/// Per-pixel sums of window-relative timestamps, max-pooled with kernel and
/// stride equal to the stage stride. The token grid must tile the sensor.
ScoreMap score_event_temporal(const EventStream& stream, int stride, Index hs, Index ws);

/// Gaussian-weighted mean over the (2R+1)^2 token window around each token,
/// truncated at the grid border with the weights renormalized.
ScoreMap score_event_spatiotemporal(const ScoreMap& temporal, const EgcmParams& params);

struct EgcmFactors {
  double scale = 1.0;    // r^(1/rho)
  double control = 0.0;  // (1-r)^(1/rho)
};

EgcmFactors egcm_factors(double r, double rho);

/// Rescales scores to unit Euclidean norm so the softmax temperature acts on
/// a scene-independent range; an all-zero map is returned unchanged.
ScoreMap unit_normalize(const ScoreMap& scores);

/// softmax(scores / scale) with max subtraction.
ScoreMap scaled_softmax(const ScoreMap& scores, double scale);

/// Keeps token i iff score_i >= control / N.
SparsificationMap make_mask(const ScoreMap& probabilities, double control);

/// Keeps exactly the k highest-scoring tokens (lower index wins ties). This
/// is the fixed-kept-rate selector used as a non-adaptive baseline.
SparsificationMap top_k_mask(const ScoreMap& scores, Index k);

struct EgmsResult {
  SparsificationMap image;
  SparsificationMap event;
  ScoreMap image_probabilities;
  ScoreMap event_probabilities;
  double ratio = 0.0;
  EgcmFactors factors;
};

struct EgmsOptions {
  bool stage1_override = true;  // stage-1 image map copies the event map
};

/// Scores both modalities and thresholds them with the event-guided control
/// factors. The event spatial ratio is measured on `stream` at full sensor
/// resolution.
template <typename Scalar>
EgmsResult egms_stage(const TokenGrid<Scalar>& image_grid, const TokenGrid<Scalar>& event_grid,
                      const EventStream& stream, const StageConfig& stage, const EgcmParams& params,
                      const EgmsOptions& options = {});

/// Same as egms_stage but with a precomputed event spatial ratio, so one
/// ratio can be shared across all stages of a sample.
template <typename Scalar>
EgmsResult egms_stage_with_ratio(const TokenGrid<Scalar>& image_grid, const TokenGrid<Scalar>& event_grid,
                                 const EventStream& stream, const StageConfig& stage, const EgcmParams& params,
                                 double ratio, const EgmsOptions& options = {}) {
  require_shape(image_grid.hs == event_grid.hs && image_grid.ws == event_grid.ws,
                "image and event token grids disagree");
  check_egcm_params(params);
  const EgcmFactors factors = egcm_factors(ratio, params.rho);

  const ScoreMap temporal = score_event_temporal(stream, stage.stride, event_grid.hs, event_grid.ws);
  const ScoreMap event_scores = score_event_spatiotemporal(temporal, params);

  EgmsResult out;
  out.ratio = ratio;
  out.factors = factors;
  out.event_probabilities = scaled_softmax(unit_normalize(event_scores), factors.scale);
  out.event = make_mask(out.event_probabilities, factors.control);

  if (stage.stage_index == 1 && options.stage1_override) {
    out.image_probabilities = out.event_probabilities;
    out.image = out.event;
  } else {
    out.image_probabilities = scaled_softmax(unit_normalize(score_image_l2(image_grid)), factors.scale);
    out.image = make_mask(out.image_probabilities, factors.control);
  }
  return out;
}

template <typename Scalar>
EgmsResult egms_stage(const TokenGrid<Scalar>& image_grid, const TokenGrid<Scalar>& event_grid,
                      const EventStream& stream, const StageConfig& stage, const EgcmParams& params,
                      const EgmsOptions& options) {
  return egms_stage_with_ratio(image_grid, event_grid, stream, stage, params,
                               event_spatial_ratio(stream, params.epsilon_r), options);
}

}  // namespace focus
