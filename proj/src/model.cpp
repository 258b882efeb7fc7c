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

#include "focus/model.hpp"

#include <map>

namespace focus {

const char* to_string(MaskMode mode) noexcept {
  switch (mode) {
    case MaskMode::Adaptive: return "adaptive";
    case MaskMode::KeepAll: return "keep_all";
    case MaskMode::Dense: return "dense";
    case MaskMode::FixedRate: return "fixed_rate";
  }
  return "adaptive";
}

MaskMode parse_mask_mode(const std::string& text) {
  if (text == "adaptive") return MaskMode::Adaptive;
  if (text == "keep_all") return MaskMode::KeepAll;
  if (text == "dense") return MaskMode::Dense;
  if (text == "fixed_rate") return MaskMode::FixedRate;
  throw Error(ErrorKind::ConfigError, "unknown mask mode '" + text + "'");
}

void check_config(const ModelConfig& config) {
  check_stage_layout(config.stages);
  check_egcm_params(config.egcm);
  const int last = config.stages.back().stride;
  if (config.height <= 0 || config.width <= 0 || config.height % last != 0 || config.width % last != 0)
    throw Error(ErrorKind::ConfigError, "input size must be a positive multiple of " + std::to_string(last));
  if (config.layer.state_dim < 1 || config.layer.expand < 1 || config.layer.mlp_ratio < 1)
    throw Error(ErrorKind::ConfigError, "state_dim, expand and mlp_ratio must be >= 1");
  if (!(config.beta > 0.0)) throw Error(ErrorKind::ConfigError, "beta must be positive");
  if (config.voxel_bins < 1) throw Error(ErrorKind::ConfigError, "voxel bin count must be >= 1");
  for (double k : config.fixed_keep)
    if (!(k >= 0.0 && k <= 1.0)) throw Error(ErrorKind::ConfigError, "fixed kept ratios must lie in [0, 1]");
}

ModelWeights init_weights(const ModelConfig& config, std::uint64_t seed) {
  check_config(config);
  Rng rng(seed);
  ModelWeights w;
  const auto& st = config.stages;
  const Index patch = st[0].stride;
  w.embed_image = random_linear<double>(rng, kImageChannels * patch * patch, st[0].channels, true);
  w.embed_event = random_linear<double>(rng, config.voxel_bins * patch * patch, st[0].channels, true);
  for (std::size_t s = 1; s < 4; ++s) {
    w.merge_image[s - 1] = random_linear<double>(rng, 4 * st[s - 1].channels, st[s].channels, false);
    w.merge_event[s - 1] = random_linear<double>(rng, 4 * st[s - 1].channels, st[s].channels, false);
  }
  for (std::size_t s = 0; s < 4; ++s)
    for (int b = 0; b < st[s].block_count; ++b) {
      w.blocks_image[s].push_back(random_layer_weights<double>(rng, st[s].channels, config.layer));
      w.blocks_event[s].push_back(random_layer_weights<double>(rng, st[s].channels, config.layer));
    }
  for (std::size_t s = 1; s < 4; ++s) w.fusion[s - 1] = random_cmff_weights<double>(rng, st[s].channels, config.layer);
  return w;
}

namespace {

template <typename W, typename F>
void visit_linear(const std::string& name, W& map, F&& fn) {
  fn(name + ".weight", map.weight);
  fn(name + ".bias", map.bias);
}

template <typename W, typename F>
void visit_ssm(const std::string& name, W& p, F&& fn) {
  fn(name + ".a", p.a);
  visit_linear(name + ".delta", p.delta, fn);
  visit_linear(name + ".input", p.input, fn);
  visit_linear(name + ".output", p.output, fn);
  fn(name + ".skip", p.skip);
}

template <typename W, typename F>
void visit_mlp(const std::string& name, W& m, F&& fn) {
  fn(name + ".norm_gain", m.norm_gain);
  fn(name + ".norm_bias", m.norm_bias);
  visit_linear(name + ".fc1", m.fc1, fn);
  visit_linear(name + ".fc2", m.fc2, fn);
}

template <typename W, typename F>
void visit_layer(const std::string& name, W& l, F&& fn) {
  fn(name + ".norm_gain", l.norm_gain);
  fn(name + ".norm_bias", l.norm_bias);
  visit_linear(name + ".in_proj", l.in_proj, fn);
  visit_ssm(name + ".forward", l.forward, fn);
  visit_ssm(name + ".backward", l.backward, fn);
  visit_linear(name + ".out_proj", l.out_proj, fn);
  visit_mlp(name + ".mlp", l.mlp, fn);
}

// Walks every tensor of a (const or mutable) weight set in a fixed order.
template <typename W, typename F>
void visit_weights(W& w, F&& fn) {
  visit_linear("embed_image", w.embed_image, fn);
  visit_linear("embed_event", w.embed_event, fn);
  for (std::size_t s = 0; s < 3; ++s) {
    visit_linear("merge_image." + std::to_string(s + 2), w.merge_image[s], fn);
    visit_linear("merge_event." + std::to_string(s + 2), w.merge_event[s], fn);
  }
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t b = 0; b < w.blocks_image[s].size(); ++b) {
      const std::string tag = std::to_string(s + 1) + "." + std::to_string(b);
      visit_layer("stage" + tag + ".image", w.blocks_image[s][b], fn);
      visit_layer("stage" + tag + ".event", w.blocks_event[s][b], fn);
    }
  for (std::size_t s = 0; s < 3; ++s) {
    const std::string name = "fusion." + std::to_string(s + 2);
    auto& fi = w.fusion[s].fi;
    visit_linear(name + ".image_linear", fi.image_linear, fn);
    visit_linear(name + ".event_linear", fi.event_linear, fn);
    fn(name + ".image_dw", fi.image_dw);
    fn(name + ".event_dw", fi.event_dw);
    fn(name + ".image_dw_bias", fi.image_dw_bias);
    fn(name + ".event_dw_bias", fi.event_dw_bias);
    visit_ssm(name + ".forward", fi.forward, fn);
    visit_ssm(name + ".backward", fi.backward, fn);
    visit_mlp(name + ".mlp", w.fusion[s].mlp, fn);
  }
}

}  // namespace

std::vector<NamedTensor> flatten_weights(const ModelWeights& weights) {
  std::vector<NamedTensor> out;
  visit_weights(weights, [&](const std::string& name, const auto& value) {
    out.push_back({name, RowMatrix<double>(value)});
  });
  return out;
}

ModelWeights unflatten_weights(const ModelConfig& config, const std::vector<NamedTensor>& tensors) {
  ModelWeights w = init_weights(config, 0);
  std::map<std::string, const RowMatrix<double>*> by_name;
  for (const auto& t : tensors) by_name[t.name] = &t.value;
  std::size_t used = 0;
  visit_weights(w, [&](const std::string& name, auto& value) {
    const auto it = by_name.find(name);
    if (it == by_name.end()) throw Error(ErrorKind::ConfigError, "weight tensor '" + name + "' missing");
    const RowMatrix<double>& src = *it->second;
    if (src.rows() != value.rows() || src.cols() != value.cols())
      throw Error(ErrorKind::ConfigError, "weight tensor '" + name + "' has the wrong shape");
    value = src;
    ++used;
  });
  if (used != tensors.size()) throw Error(ErrorKind::ConfigError, "weight file holds unexpected tensors");
  return w;
}

}  // namespace focus
