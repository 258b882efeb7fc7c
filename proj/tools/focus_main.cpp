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

#include <CLI11.hpp>

#include <iostream>

#include "focus/commands.hpp"
#include "focus/error.hpp"

namespace {

void add_pipeline_options(CLI::App& cmd, focus::cli::PipelineArgs& args) {
  cmd.add_option("image", args.image_path, "PPM (P6) or PGM (P5) frame")->required();
  cmd.add_option("events", args.events_path, "events as CSV or EVT1")->required();
  cmd.add_option("--config", args.config_path, "key = value configuration file");
  cmd.add_option("--out", args.out_dir, "output directory")->required();
  cmd.add_option("--seed", args.seed, "weight seed (overrides FOCUS_SEED and the config)");
  cmd.add_option("--weights", args.weights_path, "FWT1 weight file to load instead of seeding");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-guided token sparsification and RGB-event fusion"};
  app.require_subcommand(1);

  focus::cli::VoxelizeArgs vox;
  auto* voxelize = app.add_subcommand("voxelize", "bin an event file into a voxel grid");
  voxelize->add_option("events", vox.events_path, "events as CSV or EVT1")->required();
  voxelize->add_option("--out", vox.out_path, "voxel dump to write")->required();
  voxelize->add_option("--bins", vox.bins, "temporal bins")->capture_default_str()->check(CLI::PositiveNumber);
  voxelize->add_option("--width", vox.width, "sensor width")->capture_default_str()->check(CLI::PositiveNumber);
  voxelize->add_option("--height", vox.height, "sensor height")->capture_default_str()->check(CLI::PositiveNumber);
  voxelize->add_option("--window-start", vox.window_start, "window start in microseconds");
  voxelize->add_option("--window-end", vox.window_end, "window end in microseconds");

  focus::cli::PipelineArgs sparsify_args;
  auto* sparsify = app.add_subcommand("sparsify", "write per-stage sparsification masks and kept ratios");
  add_pipeline_options(*sparsify, sparsify_args);

  focus::cli::PipelineArgs run_args;
  auto* run = app.add_subcommand("run", "run the full backbone and write features, FLOPs and a manifest");
  add_pipeline_options(*run, run_args);
  run->add_flag("--dense-baseline", run_args.dense_baseline, "also run the dense pipeline and compare");
  run->add_option("--save-weights", run_args.save_weights, "write the weights used as FWT1");

  focus::cli::SynthArgs synth_args;
  std::string complexity = "sparse";
  auto* synth = app.add_subcommand("synth", "generate a synthetic RGB + event scene");
  synth->add_option("--seed", synth_args.seed, "scene seed")->capture_default_str();
  synth->add_option("--complexity", complexity, "sparse, medium or dense")
      ->capture_default_str()
      ->check(CLI::IsMember({"sparse", "medium", "dense"}));
  synth->add_option("--out", synth_args.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*voxelize) focus::cli::cmd_voxelize(vox, std::cout);
    if (*sparsify) focus::cli::cmd_sparsify(sparsify_args, std::cout);
    if (*run) focus::cli::cmd_run(run_args, std::cout);
    if (*synth) {
      synth_args.complexity = focus::parse_complexity(complexity);
      focus::cli::cmd_synth(synth_args, std::cout);
    }
  } catch (const focus::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
