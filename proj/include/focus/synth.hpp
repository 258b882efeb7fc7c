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
#include <string>
#include <vector>

#include "focus/events.hpp"
#include "focus/tensor.hpp"

namespace focus {

enum class Complexity { Sparse, Medium, Dense };

const char* to_string(Complexity c) noexcept;
Complexity parse_complexity(const std::string& text);

struct SynthOptions {
  Index height = 64;
  Index width = 64;
  std::int64_t window_start = 0;
  std::int64_t window_end = 50000;
  int steps = 24;                 // rendering instants across the window
  double contrast = 0.15;         // log-intensity change per event
  double noise_fraction = 0.002;  // background-activity events per pixel
};

/// Static textured background with moving rectangles. Events come from a
/// per-pixel log-intensity contrast model over the window, plus uniform
/// background-activity noise. The frame is rendered at the window end and
/// `object_mask` marks pixels at least half covered by an object then.
struct SynthScene {
  PlanarTensor<double> image;  // 3 x H x W in [0, 1]
  EventStream stream;
  RowMatrix<std::uint8_t> object_mask;
  Complexity complexity = Complexity::Sparse;
  std::uint64_t seed = 0;
};

SynthScene synth_scene(std::uint64_t seed, Complexity complexity, const SynthOptions& options = {});

/// The 20-scene evaluation suite: seeds 1000..1019 cycling through sparse,
/// medium and dense.
std::vector<SynthScene> default_synth_suite(const SynthOptions& options = {});

}  // namespace focus
