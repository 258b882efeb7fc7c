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

#include "focus/flops.hpp"

#include <json.hpp>

#include "focus/cmff.hpp"

namespace focus {

namespace {

using u64 = std::uint64_t;

u64 linear_ops(u64 tokens, u64 in, u64 out) { return 2 * tokens * in * out; }

struct VssCosts {
  u64 projections;
  u64 scan;
  u64 mlp;
};

// Per-token cost of one VSS layer on C channels.
VssCosts vss_per_token(u64 c, const LayerShape& shape) {
  const u64 e = static_cast<u64>(shape.expand) * c;
  const u64 ds = static_cast<u64>(shape.state_dim);
  const u64 hidden = static_cast<u64>(shape.mlp_ratio) * c;
  const u64 per_direction = linear_ops(1, e, e) + 2 * linear_ops(1, e, ds);
  return {
      linear_ops(1, c, 2 * e) + linear_ops(1, e, c) + 2 * per_direction,
      2 * (2 * 3 * e * ds),
      linear_ops(1, c, hidden) + linear_ops(1, hidden, c),
  };
}

// Per-sequence-element cost of the interlaced bidirectional scan on C channels.
u64 fusion_scan_per_element(u64 c, u64 ds) {
  const u64 per_direction = linear_ops(1, c, c) + 2 * linear_ops(1, c, ds) + 2 * 3 * c * ds;
  return 2 * per_direction;
}

}  // namespace

double FlopEntry::reduction_pct() const {
  if (dense == 0) return 0.0;
  return 100.0 * (1.0 - static_cast<double>(sparse) / static_cast<double>(dense));
}

std::uint64_t FlopReport::dense_total() const {
  u64 total = 0;
  for (const auto& e : entries) total += e.dense;
  return total;
}

std::uint64_t FlopReport::sparse_total() const {
  u64 total = 0;
  for (const auto& e : entries) total += e.sparse;
  return total;
}

double FlopReport::reduction() const {
  const u64 d = dense_total();
  return d == 0 ? 0.0 : 1.0 - static_cast<double>(sparse_total()) / static_cast<double>(d);
}

bool is_token_dependent(const std::string& component) {
  return component == "projections" || component == "scan" || component == "mlp" || component == "fusion_scan" ||
         component == "fusion_mlp";
}

std::uint64_t FlopReport::token_dependent_dense() const {
  u64 total = 0;
  for (const auto& e : entries)
    if (is_token_dependent(e.component)) total += e.dense;
  return total;
}

std::uint64_t FlopReport::token_dependent_sparse() const {
  u64 total = 0;
  for (const auto& e : entries)
    if (is_token_dependent(e.component)) total += e.sparse;
  return total;
}

double FlopReport::token_dependent_reduction() const {
  const u64 d = token_dependent_dense();
  return d == 0 ? 0.0 : 1.0 - static_cast<double>(token_dependent_sparse()) / static_cast<double>(d);
}

FlopEntry FlopReport::component_total(const std::string& component) const {
  FlopEntry total{0, component, 0, 0};
  for (const auto& e : entries)
    if (e.component == component) {
      total.dense += e.dense;
      total.sparse += e.sparse;
    }
  return total;
}

FlopReport count_flops(const ModelConfig& config, const std::array<StageMasks, 4>& masks) {
  check_config(config);
  FlopReport report;
  const auto& st = config.stages;
  const u64 ds = static_cast<u64>(config.layer.state_dim);

  for (std::size_t s = 0; s < 4; ++s) {
    const int stage = static_cast<int>(s) + 1;
    const u64 stride = static_cast<u64>(st[s].stride);
    const u64 n = static_cast<u64>(config.height) / stride * (static_cast<u64>(config.width) / stride);
    const u64 c = static_cast<u64>(st[s].channels);
    const StageMasks& m = masks[s];
    require_shape(static_cast<u64>(m.image.size()) == n && static_cast<u64>(m.event.size()) == n,
                  "stage " + std::to_string(stage) + " masks do not match the token count");
    const u64 kept_i = static_cast<u64>(m.image.kept_count());
    const u64 kept_e = static_cast<u64>(m.event.kept_count());

    u64 embed = 0;
    if (s == 0) {
      const u64 patch_area = stride * stride;
      embed = linear_ops(n, kImageChannels * patch_area, c) +
              linear_ops(n, static_cast<u64>(config.voxel_bins) * patch_area, c);
    } else {
      embed = 2 * linear_ops(n, 4 * static_cast<u64>(st[s - 1].channels), c);
    }
    report.entries.push_back({stage, "embed", embed, embed});

    const VssCosts per = vss_per_token(c, config.layer);
    const auto blocks = static_cast<u64>(st[s].block_count);
    report.entries.push_back({stage, "projections", blocks * 2 * n * per.projections,
                              blocks * (kept_i + kept_e) * per.projections});
    report.entries.push_back({stage, "scan", blocks * 2 * n * per.scan, blocks * (kept_i + kept_e) * per.scan});
    report.entries.push_back({stage, "mlp", blocks * 2 * n * per.mlp, blocks * (kept_i + kept_e) * per.mlp});

    if (s > 0) {
      const u64 kept_u = static_cast<u64>(union_mask(m.image, m.event).kept_count());
      const u64 mix = 2 * (linear_ops(n, c, c) + 2 * n * c * 9);
      report.entries.push_back({stage, "fusion_mix", mix, mix});
      const u64 scan = fusion_scan_per_element(c, ds);
      report.entries.push_back({stage, "fusion_scan", 2 * n * scan, 2 * kept_u * scan});
      const u64 hidden = static_cast<u64>(config.layer.mlp_ratio) * c;
      const u64 mlp = linear_ops(1, c, hidden) + linear_ops(1, hidden, c);
      report.entries.push_back({stage, "fusion_mlp", n * mlp, kept_u * mlp});
    }
  }
  return report;
}

std::string to_json(const FlopReport& report) {
  nlohmann::ordered_json j;
  j["unit"] = "operations, 2 per multiply-accumulate";
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : report.entries) {
    nlohmann::ordered_json row;
    row["stage"] = e.stage;
    row["component"] = e.component;
    row["dense_macs"] = e.dense;
    row["sparse_macs"] = e.sparse;
    row["reduction_pct"] = e.reduction_pct();
    j["entries"].push_back(std::move(row));
  }
  nlohmann::ordered_json totals;
  totals["dense_macs"] = report.dense_total();
  totals["sparse_macs"] = report.sparse_total();
  totals["reduction_pct"] = 100.0 * report.reduction();
  totals["token_dependent_dense_macs"] = report.token_dependent_dense();
  totals["token_dependent_sparse_macs"] = report.token_dependent_sparse();
  totals["token_dependent_reduction_pct"] = 100.0 * report.token_dependent_reduction();
  j["totals"] = std::move(totals);
  return j.dump(2) + "\n";
}

}  // namespace focus
