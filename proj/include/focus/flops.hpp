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

#include "focus/egms.hpp"
#include "focus/model.hpp"

namespace focus {

/// Analytic operation counts. Every multiply-accumulate counts as two
/// operations; nonlinearities, normalizations and elementwise products are
/// not counted.
///
///   embed        patch embedding (stage 1) and patch merging (stages 2-4);
///                always dense
///   projections  VSS input/output projections and the per-token step, B and
///                C projections of both scan directions
///   scan         the recurrence itself: 3 MACs per token, channel and state
///                element, per direction
///   mlp          the VSS MLP
///   fusion_mix   linear + 3x3 depthwise preprocessing of both modalities;
///                always dense
///   fusion_scan  projections and recurrence of the interlaced scan over the
///                2K tokens under the union mask
///   fusion_mlp   the fusion MLP over the K union tokens
struct FlopEntry {
  int stage = 1;
  std::string component;
  std::uint64_t dense = 0;
  std::uint64_t sparse = 0;

  double reduction_pct() const;
};

struct FlopReport {
  std::vector<FlopEntry> entries;

  std::uint64_t dense_total() const;
  std::uint64_t sparse_total() const;
  double reduction() const;  // 1 - sparse/dense

  /// Same totals restricted to components whose cost follows the masks.
  std::uint64_t token_dependent_dense() const;
  std::uint64_t token_dependent_sparse() const;
  double token_dependent_reduction() const;

  /// Summed over stages for one component.
  FlopEntry component_total(const std::string& component) const;
};

bool is_token_dependent(const std::string& component);

struct StageMasks {
  SparsificationMap image;
  SparsificationMap event;
};

/// Dense counts use every token; sparse counts use each mask's kept count
/// (the union's for the fusion components).
FlopReport count_flops(const ModelConfig& config, const std::array<StageMasks, 4>& masks);

/// Stable JSON rendering with the fields stage, component, dense_macs,
/// sparse_macs and reduction_pct per entry.
std::string to_json(const FlopReport& report);

}  // namespace focus
