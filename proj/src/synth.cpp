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

#include "focus/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "focus/random.hpp"

namespace focus {

const char* to_string(Complexity c) noexcept {
  switch (c) {
    case Complexity::Sparse: return "sparse";
    case Complexity::Medium: return "medium";
    case Complexity::Dense: return "dense";
  }
  return "sparse";
}

Complexity parse_complexity(const std::string& text) {
  if (text == "sparse") return Complexity::Sparse;
  if (text == "medium") return Complexity::Medium;
  if (text == "dense") return Complexity::Dense;
  throw Error(ErrorKind::ConfigError, "unknown complexity '" + text + "'");
}

namespace {

struct Rect {
  double x = 0, y = 0;    // top-left at the window start
  double w = 1, h = 1;
  double dx = 0, dy = 0;  // displacement over the whole window
  std::array<double, 3> color{};
};

struct Ranges {
  int min_count, max_count;
  double min_size, max_size;
  double min_shift, max_shift;
};

Ranges ranges_for(Complexity c) {
  switch (c) {
    case Complexity::Sparse: return {1, 1, 4.0, 8.0, 2.0, 5.0};
    case Complexity::Medium: return {2, 4, 7.0, 14.0, 4.0, 9.0};
    case Complexity::Dense: return {4, 7, 10.0, 20.0, 6.0, 11.0};
  }
  return {1, 1, 4.0, 8.0, 2.0, 5.0};
}

double overlap(double lo, double hi, double cell) {
  return std::max(0.0, std::min(hi, cell + 1.0) - std::max(lo, cell));
}

// RGB frame with every object at fraction f of its path. `cover` receives
// the summed object coverage per pixel when non-null.
PlanarTensor<double> render(const PlanarTensor<double>& background, const std::vector<Rect>& objects, double f,
                            RowMatrix<double>* cover) {
  PlanarTensor<double> frame = background;
  if (cover) *cover = RowMatrix<double>::Zero(background.height(), background.width());
  for (const Rect& r : objects) {
    const double x = r.x + r.dx * f;
    const double y = r.y + r.dy * f;
    const auto y0 = std::max<Index>(0, static_cast<Index>(std::floor(y)));
    const auto y1 = std::min<Index>(background.height() - 1, static_cast<Index>(std::ceil(y + r.h)));
    const auto x0 = std::max<Index>(0, static_cast<Index>(std::floor(x)));
    const auto x1 = std::min<Index>(background.width() - 1, static_cast<Index>(std::ceil(x + r.w)));
    for (Index py = y0; py <= y1; ++py)
      for (Index px = x0; px <= x1; ++px) {
        const double a = overlap(x, x + r.w, static_cast<double>(px)) * overlap(y, y + r.h, static_cast<double>(py));
        if (a <= 0.0) continue;
        for (Index c = 0; c < 3; ++c) frame(c, py, px) = frame(c, py, px) * (1.0 - a) + a * r.color[c];
        if (cover) (*cover)(py, px) = std::min(1.0, (*cover)(py, px) + a);
      }
  }
  return frame;
}

RowMatrix<double> log_luminance(const PlanarTensor<double>& frame) {
  RowMatrix<double> out(frame.height(), frame.width());
  for (Index y = 0; y < frame.height(); ++y)
    for (Index x = 0; x < frame.width(); ++x)
      out(y, x) = std::log(0.299 * frame(0, y, x) + 0.587 * frame(1, y, x) + 0.114 * frame(2, y, x) + 1e-3);
  return out;
}

}  // namespace

SynthScene synth_scene(std::uint64_t seed, Complexity complexity, const SynthOptions& options) {
  if (options.height <= 0 || options.width <= 0 || options.steps < 1 || !(options.contrast > 0.0))
    throw Error(ErrorKind::ConfigError, "invalid synthetic scene options");
  Rng rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(complexity) + 1);
  const Index h = options.height;
  const Index w = options.width;

  PlanarTensor<double> background = PlanarTensor<double>::zeros(3, h, w);
  for (Index c = 0; c < 3; ++c) {
    const double fx = rng.uniform(1.0, 4.0), fy = rng.uniform(1.0, 4.0), phase = rng.uniform(0.0, 6.28);
    const double gx = rng.uniform(4.0, 9.0), gy = rng.uniform(4.0, 9.0), phase2 = rng.uniform(0.0, 6.28);
    for (Index y = 0; y < h; ++y)
      for (Index x = 0; x < w; ++x) {
        const double u = static_cast<double>(x) / static_cast<double>(w);
        const double v = static_cast<double>(y) / static_cast<double>(h);
        background(c, y, x) = 0.45 + 0.12 * std::sin(2.0 * std::numbers::pi * (fx * u + fy * v) + phase) +
                              0.05 * std::sin(2.0 * std::numbers::pi * (gx * u - gy * v) + phase2);
      }
  }

  const Ranges rg = ranges_for(complexity);
  const auto count = static_cast<int>(rng.integer(rg.min_count, rg.max_count));
  std::vector<Rect> objects;
  for (int i = 0; i < count; ++i) {
    Rect r;
    r.w = rng.uniform(rg.min_size, rg.max_size);
    r.h = rng.uniform(rg.min_size, rg.max_size);
    const double shift = rng.uniform(rg.min_shift, rg.max_shift);
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    r.dx = shift * std::cos(angle);
    r.dy = shift * std::sin(angle);
    const double span_x = static_cast<double>(w) - r.w - std::abs(r.dx);
    const double span_y = static_cast<double>(h) - r.h - std::abs(r.dy);
    r.x = rng.uniform(0.0, std::max(0.0, span_x)) + std::max(0.0, -r.dx);
    r.y = rng.uniform(0.0, std::max(0.0, span_y)) + std::max(0.0, -r.dy);
    const bool bright = rng.bernoulli(0.5);
    for (double& c : r.color) c = bright ? rng.uniform(0.8, 1.0) : rng.uniform(0.02, 0.15);
    objects.push_back(r);
  }

  const std::int64_t t0 = options.window_start;
  const double span = static_cast<double>(options.window_end - options.window_start);
  std::vector<Event> events;
  RowMatrix<double> reference = log_luminance(render(background, objects, 0.0, nullptr));
  for (int k = 1; k <= options.steps; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(options.steps);
    const RowMatrix<double> current = log_luminance(render(background, objects, f, nullptr));
    for (Index y = 0; y < h; ++y)
      for (Index x = 0; x < w; ++x) {
        double diff = current(y, x) - reference(y, x);
        while (std::abs(diff) >= options.contrast) {
          const int p = diff > 0 ? 1 : -1;
          const double when = (static_cast<double>(k - 1) + rng.unit()) / static_cast<double>(options.steps);
          events.push_back({static_cast<std::int32_t>(x), static_cast<std::int32_t>(y),
                            t0 + static_cast<std::int64_t>(std::floor(when * span)), static_cast<std::int8_t>(p)});
          reference(y, x) += p * options.contrast;
          diff -= p * options.contrast;
        }
      }
  }

  const auto noise = static_cast<std::int64_t>(std::llround(options.noise_fraction * static_cast<double>(h * w)));
  for (std::int64_t i = 0; i < noise; ++i) {
    events.push_back({static_cast<std::int32_t>(rng.integer(0, w - 1)), static_cast<std::int32_t>(rng.integer(0, h - 1)),
                      t0 + static_cast<std::int64_t>(std::floor(rng.unit() * span)),
                      static_cast<std::int8_t>(rng.bernoulli(0.5) ? 1 : -1)});
  }

  SynthScene scene;
  scene.seed = seed;
  scene.complexity = complexity;
  RowMatrix<double> cover;
  scene.image = render(background, objects, 1.0, &cover);
  for (auto& plane : scene.image.planes) plane = plane.cwiseMax(0.0).cwiseMin(1.0);
  scene.object_mask = (cover.array() >= 0.5).cast<std::uint8_t>().matrix();
  scene.stream = validate_stream(std::move(events), SensorGeometry{static_cast<std::int32_t>(w), static_cast<std::int32_t>(h),
                                                                   options.window_start, options.window_end});
  return scene;
}

std::vector<SynthScene> default_synth_suite(const SynthOptions& options) {
  static constexpr std::array<Complexity, 3> cycle{Complexity::Sparse, Complexity::Medium, Complexity::Dense};
  std::vector<SynthScene> suite;
  for (std::uint64_t i = 0; i < 20; ++i) suite.push_back(synth_scene(1000 + i, cycle[i % 3], options));
  return suite;
}

}  // namespace focus
