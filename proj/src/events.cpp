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

#include "focus/events.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace focus {

void check_geometry(const SensorGeometry& geometry) {
  if (geometry.width <= 0 || geometry.height <= 0)
    throw Error(ErrorKind::ConfigError, "sensor width and height must be positive");
  if (geometry.window_start >= geometry.window_end)
    throw Error(ErrorKind::ConfigError, "event window must satisfy start < end");
}

EventStream validate_stream(std::vector<Event> raw, const SensorGeometry& geometry) {
  check_geometry(geometry);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const Event& e = raw[i];
    if (e.x < 0 || e.x >= geometry.width || e.y < 0 || e.y >= geometry.height)
      throw Error(ErrorKind::OutOfBounds,
                  "event (" + std::to_string(e.x) + "," + std::to_string(e.y) + ") outside sensor", i);
    if (e.t < geometry.window_start || e.t > geometry.window_end)
      throw Error(ErrorKind::OutOfBounds, "event timestamp " + std::to_string(e.t) + " outside window", i);
    if (e.p != 1 && e.p != -1) throw Error(ErrorKind::BadPolarity, "polarity must be -1 or +1", i);
  }
  std::stable_sort(raw.begin(), raw.end(), [](const Event& a, const Event& b) { return a.t < b.t; });

  EventStream stream;
  stream.events_ = std::move(raw);
  stream.geometry_ = geometry;
  return stream;
}

VoxelGrid voxelize(const EventStream& stream, int bins) {
  if (bins < 1) throw Error(ErrorKind::ConfigError, "voxel bin count must be >= 1");
  const SensorGeometry& g = stream.geometry();
  VoxelGrid grid = VoxelGrid::zeros(bins, g.height, g.width);
  const double span = static_cast<double>(g.window_end - g.window_start);
  const double last = static_cast<double>(bins - 1);

  for (const Event& e : stream.events()) {
    const double tn = static_cast<double>(e.t - g.window_start) / span * last;
    const auto lower = static_cast<int>(std::floor(tn));
    for (int b = std::max(lower, 0); b <= std::min(lower + 1, bins - 1); ++b) {
      const double w = std::max(0.0, 1.0 - std::abs(static_cast<double>(b) - tn));
      if (w > 0.0) grid(b, e.y, e.x) += static_cast<double>(e.p) * w;
    }
  }
  return grid;
}

double event_spatial_ratio(const EventStream& stream, double floor) {
  const SensorGeometry& g = stream.geometry();
  const auto pixels = static_cast<std::size_t>(g.width) * static_cast<std::size_t>(g.height);
  std::vector<bool> fired(pixels, false);
  std::size_t distinct = 0;
  for (const Event& e : stream.events()) {
    const auto idx = static_cast<std::size_t>(e.y) * static_cast<std::size_t>(g.width) + static_cast<std::size_t>(e.x);
    if (!fired[idx]) {
      fired[idx] = true;
      ++distinct;
    }
  }
  const double r = static_cast<double>(distinct) / static_cast<double>(pixels);
  return std::clamp(r, floor, 1.0);
}

}  // namespace focus
