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

#include "focus/egms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace focus {

SparsificationMap::SparsificationMap(Index hs, Index ws, std::vector<std::uint8_t> bits)
    : hs_(hs), ws_(ws), bits_(std::move(bits)) {
  require_shape(hs_ * ws_ == static_cast<Index>(bits_.size()), "mask length does not match its grid");
  for (auto& b : bits_) {
    b = b != 0 ? 1 : 0;
    kept_ += b;
  }
}

SparsificationMap SparsificationMap::filled(Index hs, Index ws, bool keep) {
  return {hs, ws, std::vector<std::uint8_t>(static_cast<std::size_t>(hs * ws), keep ? 1 : 0)};
}

std::vector<Index> SparsificationMap::kept_indices() const {
  std::vector<Index> idx;
  idx.reserve(static_cast<std::size_t>(kept_));
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) idx.push_back(static_cast<Index>(i));
  return idx;
}

void check_egcm_params(const EgcmParams& params) {
  if (!(params.rho > 0.0)) throw Error(ErrorKind::ConfigError, "rho must be positive");
  if (!(params.sigma > 0.0)) throw Error(ErrorKind::ConfigError, "sigma must be positive");
  if (params.neighborhood < 1) throw Error(ErrorKind::ConfigError, "neighborhood radius must be >= 1");
  if (!(params.epsilon_r > 0.0 && params.epsilon_r <= 1.0))
    throw Error(ErrorKind::ConfigError, "ratio floor must lie in (0, 1]");
}

ScoreMap score_event_temporal(const EventStream& stream, int stride, Index hs, Index ws) {
  const SensorGeometry& g = stream.geometry();
  require_shape(stride > 0 && hs * stride == g.height && ws * stride == g.width,
                "token grid does not tile the sensor at this stride");

  RowMatrix<double> sums = RowMatrix<double>::Zero(g.height, g.width);
  for (const Event& e : stream.events()) sums(e.y, e.x) += static_cast<double>(e.t - g.window_start);

  ScoreMap s{hs, ws, Vector<double>(hs * ws)};
  for (Index i = 0; i < hs; ++i)
    for (Index j = 0; j < ws; ++j) s.values(i * ws + j) = sums.block(i * stride, j * stride, stride, stride).maxCoeff();
  return s;
}

ScoreMap score_event_spatiotemporal(const ScoreMap& temporal, const EgcmParams& params) {
  check_egcm_params(params);
  const int radius = params.neighborhood;
  const double denom = 2.0 * params.sigma * params.sigma;

  ScoreMap out{temporal.hs, temporal.ws, Vector<double>(temporal.size())};
  for (Index ci = 0; ci < temporal.hs; ++ci)
    for (Index cj = 0; cj < temporal.ws; ++cj) {
      double num = 0.0;
      double wsum = 0.0;
      for (Index qi = std::max<Index>(0, ci - radius); qi <= std::min<Index>(temporal.hs - 1, ci + radius); ++qi)
        for (Index qj = std::max<Index>(0, cj - radius); qj <= std::min<Index>(temporal.ws - 1, cj + radius); ++qj) {
          const auto di = static_cast<double>(qi - ci);
          const auto dj = static_cast<double>(qj - cj);
          const double w = std::exp(-(di * di + dj * dj) / denom);
          num += w * temporal(qi, qj);
          wsum += w;
        }
      out.values(ci * temporal.ws + cj) = num / wsum;
    }
  return out;
}

EgcmFactors egcm_factors(double r, double rho) {
  if (!(rho > 0.0)) throw Error(ErrorKind::ConfigError, "rho must be positive");
  if (!(r > 0.0 && r <= 1.0)) throw Error(ErrorKind::ConfigError, "event spatial ratio must lie in (0, 1]");
  return {std::pow(r, 1.0 / rho), std::pow(1.0 - r, 1.0 / rho)};
}

ScoreMap unit_normalize(const ScoreMap& scores) {
  ScoreMap out = scores;
  if (scores.size() == 0) return out;
  const double norm = scores.values.norm();
  if (norm > 0.0) out.values /= norm;
  return out;
}

ScoreMap scaled_softmax(const ScoreMap& scores, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorKind::ConfigError, "softmax scale must be positive");
  ScoreMap out{scores.hs, scores.ws, Vector<double>(scores.size())};
  if (scores.size() == 0) return out;
  const double peak = scores.values.maxCoeff();
  double total = 0.0;
  for (Index i = 0; i < scores.size(); ++i) {
    out.values(i) = std::exp((scores.values(i) - peak) / scale);
    total += out.values(i);
  }
  for (Index i = 0; i < scores.size(); ++i) out.values(i) /= total;
  return out;
}

SparsificationMap make_mask(const ScoreMap& probabilities, double control) {
  const Index n = probabilities.size();
  const double alpha = n == 0 ? 0.0 : control / static_cast<double>(n);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) bits[static_cast<std::size_t>(i)] = probabilities.values(i) >= alpha ? 1 : 0;
  return {probabilities.hs, probabilities.ws, std::move(bits)};
}

SparsificationMap top_k_mask(const ScoreMap& scores, Index k) {
  const Index n = scores.size();
  k = std::clamp<Index>(k, 0, n);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return scores.values(a) > scores.values(b); });
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n), 0);
  for (Index i = 0; i < k; ++i) bits[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
  return {scores.hs, scores.ws, std::move(bits)};
}

}  // namespace focus
