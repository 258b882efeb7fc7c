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
#include <iosfwd>
#include <optional>
#include <string>

#include "focus/config.hpp"
#include "focus/events.hpp"
#include "focus/synth.hpp"

// Library side of the `focus` command-line tool. Each command writes its
// artifacts and a one-line summary to `log`; failures surface as
// focus::Error.
namespace focus::cli {

struct VoxelizeArgs {
  std::string events_path;
  std::string out_path;
  int bins = 5;
  std::int32_t width = 64;
  std::int32_t height = 64;
  std::optional<std::int64_t> window_start;
  std::optional<std::int64_t> window_end;
};

struct VoxelizeSummary {
  std::size_t events = 0;
  double ratio = 0.0;
};

VoxelizeSummary cmd_voxelize(const VoxelizeArgs& args, std::ostream& log);

struct PipelineArgs {
  std::string image_path;
  std::string events_path;
  std::optional<std::string> config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> weights_path;  // load instead of seeding
  std::optional<std::string> save_weights;  // write the weights used
  bool dense_baseline = false;
};

/// Per-stage mask PGMs (stage<s>_image.pgm, stage<s>_event.pgm) and
/// kept_ratios.json.
void cmd_sparsify(const PipelineArgs& args, std::ostream& log);

/// Feature dumps, mask and complement PGMs, flops.json, config.cfg and
/// manifest.json. With dense_baseline, also baseline.json comparing against
/// the dense pipeline.
void cmd_run(const PipelineArgs& args, std::ostream& log);

struct SynthArgs {
  std::uint64_t seed = 1;
  Complexity complexity = Complexity::Sparse;
  std::string out_dir;
};

/// image.ppm, events.csv, events.evt1, object_mask.pgm and scene.cfg (the
/// event window and sensor size).
void cmd_synth(const SynthArgs& args, std::ostream& log);

/// Seed precedence: flag, then FOCUS_SEED, then the config file, then the
/// built-in default (already in `config_seed`).
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const char* env_value, std::uint64_t config_seed);

/// Window from the config when given, otherwise the span of the events
/// ([min t, max t], widened by one microsecond when degenerate).
SensorGeometry resolve_geometry(const std::vector<Event>& events, std::int32_t width, std::int32_t height,
                                std::optional<std::int64_t> start, std::optional<std::int64_t> end);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);

}  // namespace focus::cli
