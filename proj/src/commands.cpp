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

#include "focus/commands.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "focus/cmff.hpp"
#include "focus/detail/bytes.hpp"
#include "focus/io.hpp"
#include "focus/pipeline.hpp"

namespace focus::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::IoError, "SHA-256 computation failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const char* env_value, std::uint64_t config_seed) {
  if (flag) return *flag;
  if (env_value != nullptr && *env_value != '\0') {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env_value, &end, 10);
    if (errno != 0 || end == env_value || *end != '\0' || env_value[0] == '-')
      throw Error(ErrorKind::ConfigError, "FOCUS_SEED must be a non-negative integer");
    return v;
  }
  return config_seed;
}

SensorGeometry resolve_geometry(const std::vector<Event>& events, std::int32_t width, std::int32_t height,
                                std::optional<std::int64_t> start, std::optional<std::int64_t> end) {
  SensorGeometry g{width, height, 0, 1};
  if (!events.empty()) {
    const auto [lo, hi] = std::minmax_element(events.begin(), events.end(),
                                              [](const Event& a, const Event& b) { return a.t < b.t; });
    g.window_start = lo->t;
    g.window_end = hi->t > lo->t ? hi->t : lo->t + 1;
  }
  if (start) g.window_start = *start;
  if (end) g.window_end = *end;
  if (start && !end && g.window_end <= g.window_start) g.window_end = g.window_start + 1;
  return g;
}

namespace {

class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::string dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create output directory '" + dir_ + "'");
  }

  void write(const std::string& name, std::string_view bytes) {
    detail::write_file((fs::path(dir_) / name).string(), bytes);
    listing_.push_back({name, bytes.size(), sha256_hex(bytes)});
  }

  ordered_json listing() const {
    auto sorted = listing_;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    ordered_json out = ordered_json::array();
    for (const auto& a : sorted) {
      ordered_json row;
      row["path"] = a.name;
      row["bytes"] = a.size;
      row["sha256"] = a.digest;
      out.push_back(std::move(row));
    }
    return out;
  }

  const std::string& dir() const { return dir_; }

 private:
  struct Entry {
    std::string name;
    std::size_t size;
    std::string digest;
  };
  std::string dir_;
  std::vector<Entry> listing_;
};

struct LoadedInputs {
  RunConfig config;
  PlanarTensor<double> image;
  EventStream stream;
  ModelWeights weights;
};

LoadedInputs load_inputs(const PipelineArgs& args) {
  LoadedInputs in;
  if (args.config_path) in.config = parse_config(detail::read_file(*args.config_path));
  ModelConfig& m = in.config.model;
  m.seed = resolve_seed(args.seed, std::getenv("FOCUS_SEED"), m.seed);

  in.image = parse_pnm(detail::read_file(args.image_path));
  m.height = in.image.height();
  m.width = in.image.width();
  check_config(m);

  std::vector<Event> events = read_events(args.events_path);
  const SensorGeometry g = resolve_geometry(events, static_cast<std::int32_t>(m.width),
                                            static_cast<std::int32_t>(m.height), in.config.window_start,
                                            in.config.window_end);
  in.stream = validate_stream(std::move(events), g);
  in.weights = args.weights_path ? unflatten_weights(m, parse_weights(detail::read_file(*args.weights_path)))
                                 : init_weights(m, m.seed);
  return in;
}

std::string stage_name(int stage, const char* what) { return "stage" + std::to_string(stage) + "_" + what; }

}  // namespace

VoxelizeSummary cmd_voxelize(const VoxelizeArgs& args, std::ostream& log) {
  std::vector<Event> events = read_events(args.events_path);
  const SensorGeometry g = resolve_geometry(events, args.width, args.height, args.window_start, args.window_end);
  const EventStream stream = validate_stream(std::move(events), g);
  const VoxelGrid grid = voxelize(stream, args.bins);
  detail::write_file(args.out_path, format_voxel_grid(grid));

  VoxelizeSummary s{stream.size(), event_spatial_ratio(stream)};
  log << "events=" << s.events << " bins=" << args.bins << " r=" << s.ratio << " out=" << args.out_path << "\n";
  return s;
}

void cmd_sparsify(const PipelineArgs& args, std::ostream& log) {
  const LoadedInputs in = load_inputs(args);
  const BackboneResult result = run_backbone(in.image, in.stream, in.config.model, in.weights);

  ArtifactWriter out(args.out_dir);
  ordered_json ratios = ordered_json::array();
  for (const StageOutput& s : result.stages) {
    out.write(stage_name(s.stage, "image.pgm"), format_mask_pgm(s.image_mask));
    out.write(stage_name(s.stage, "event.pgm"), format_mask_pgm(s.event_mask));
    for (const auto& [modality, mask] : {std::pair{"image", &s.image_mask}, std::pair{"event", &s.event_mask}}) {
      ordered_json row;
      row["stage"] = s.stage;
      row["modality"] = modality;
      row["kept_ratio"] = mask->kept_ratio();
      row["r"] = result.ratio;
      ratios.push_back(std::move(row));
    }
  }
  out.write("kept_ratios.json", ratios.dump(2) + "\n");
  log << "r=" << result.ratio << " mean_kept_ratio=" << result.mean_kept_ratio() << " out=" << args.out_dir << "\n";
}

void cmd_run(const PipelineArgs& args, std::ostream& log) {
  const LoadedInputs in = load_inputs(args);
  const ModelConfig& model = in.config.model;
  const BackboneResult result = run_backbone(in.image, in.stream, model, in.weights);

  ArtifactWriter out(args.out_dir);
  RunConfig resolved = in.config;
  resolved.window_start = in.stream.geometry().window_start;
  resolved.window_end = in.stream.geometry().window_end;
  out.write("config.cfg", format_config(resolved));
  for (const StageOutput& s : result.stages) {
    out.write(stage_name(s.stage, "image.tok"), format_token_grid(s.image));
    out.write(stage_name(s.stage, "event.tok"), format_token_grid(s.event));
    if (s.fused) out.write(stage_name(s.stage, "fused.tok"), format_token_grid(*s.fused));
    out.write(stage_name(s.stage, "image_mask.pgm"), format_mask_pgm(s.image_mask));
    out.write(stage_name(s.stage, "event_mask.pgm"), format_mask_pgm(s.event_mask));
    out.write(stage_name(s.stage, "event_only.pgm"), format_mask_pgm(complement_mask(s.event_mask, s.image_mask)));
    out.write(stage_name(s.stage, "image_only.pgm"), format_mask_pgm(complement_mask(s.image_mask, s.event_mask)));
  }
  out.write("flops.json", to_json(result.flops));

  if (args.dense_baseline) {
    ModelConfig dense = model;
    dense.mask_mode = MaskMode::Dense;
    const BackboneResult baseline = run_backbone(in.image, in.stream, dense, in.weights);
    ordered_json cmp;
    cmp["dense_total_macs"] = baseline.flops.sparse_total();
    cmp["sparse_total_macs"] = result.flops.sparse_total();
    cmp["reduction_pct"] =
        100.0 * (1.0 - static_cast<double>(result.flops.sparse_total()) / static_cast<double>(baseline.flops.sparse_total()));
    cmp["token_dependent_reduction_pct"] = 100.0 * result.flops.token_dependent_reduction();
    out.write("baseline.json", cmp.dump(2) + "\n");
    log << "dense_baseline reduction_pct=" << cmp["reduction_pct"].get<double>() << "\n";
  }
  if (args.save_weights) detail::write_file(*args.save_weights, format_weights(flatten_weights(in.weights)));

  ordered_json manifest;
  manifest["command"] = "run";
  manifest["inputs"]["image"] = args.image_path;
  manifest["inputs"]["events"] = args.events_path;
  manifest["inputs"]["config"] = args.config_path ? ordered_json(*args.config_path) : ordered_json(nullptr);
  manifest["inputs"]["weights"] = args.weights_path ? ordered_json(*args.weights_path) : ordered_json(nullptr);
  manifest["seed"] = model.seed;
  manifest["mask_mode"] = to_string(model.mask_mode);
  manifest["dense_baseline"] = args.dense_baseline;
  manifest["output_dir"] = ".";
  manifest["artifacts"] = out.listing();
  detail::write_file((fs::path(args.out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");

  log << "r=" << result.ratio << " mean_kept_ratio=" << result.mean_kept_ratio()
      << " reduction_pct=" << 100.0 * result.flops.reduction() << " out=" << args.out_dir << "\n";
}

void cmd_synth(const SynthArgs& args, std::ostream& log) {
  const SynthOptions options;
  const SynthScene scene = synth_scene(args.seed, args.complexity, options);
  ArtifactWriter out(args.out_dir);
  out.write("image.ppm", format_ppm(scene.image));
  out.write("events.csv", format_events_csv(scene.stream.events()));
  out.write("events.evt1", format_events_evt1(scene.stream.events()));
  RowMatrix<std::uint8_t> mask = scene.object_mask * std::uint8_t{255};
  out.write("object_mask.pgm", format_pgm(mask));

  RunConfig cfg;
  cfg.window_start = options.window_start;
  cfg.window_end = options.window_end;
  out.write("scene.cfg", "# synthetic scene, complexity " + std::string(to_string(args.complexity)) + "\n" +
                             format_config(cfg));
  log << "events=" << scene.stream.size() << " r=" << event_spatial_ratio(scene.stream)
      << " complexity=" << to_string(args.complexity) << " out=" << args.out_dir << "\n";
}

}  // namespace focus::cli
