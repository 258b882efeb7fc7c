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
#include <span>
#include <vector>

#include "focus/tensor.hpp"

namespace focus {

struct Event {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int64_t t = 0;  // microseconds
  std::int8_t p = 1;   // -1 or +1

  friend bool operator==(const Event&, const Event&) = default;
};

struct SensorGeometry {
  std::int32_t width = 0;
  std::int32_t height = 0;
  std::int64_t window_start = 0;
  std::int64_t window_end = 1;

  friend bool operator==(const SensorGeometry&, const SensorGeometry&) = default;
};

/// Throws ConfigError unless width, height > 0 and window_start < window_end.
void check_geometry(const SensorGeometry& geometry);

/// Time-ordered, bounds-checked events. Only validate_stream builds one, so
/// every instance satisfies the ordering and bounds invariants.
class EventStream {
 public:
  EventStream() = default;

  std::span<const Event> events() const { return events_; }
  const SensorGeometry& geometry() const { return geometry_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

 private:
  friend EventStream validate_stream(std::vector<Event> raw, const SensorGeometry& geometry);

  std::vector<Event> events_;
  SensorGeometry geometry_;
};

/// Stable-sorts by timestamp after checking every event. Coordinates outside
/// the sensor and timestamps outside the window raise OutOfBounds; a
/// polarity other than +/-1 raises BadPolarity. Both report the input index.
EventStream validate_stream(std::vector<Event> raw, const SensorGeometry& geometry);

/// B x H x W temporal-bin tensor.
using VoxelGrid = PlanarTensor<double>;

/// Bilinear-in-time voxel grid. Timestamps are normalized against the
/// stream's window, t* = (t - start) / (end - start) * (B - 1), and each event
/// deposits p * max(0, 1 - |b - t*|) into bin b at its pixel.
VoxelGrid voxelize(const EventStream& stream, int bins);

inline constexpr double kDefaultRatioFloor = 1e-4;

/// Fraction of sensor pixels that fired at least once, clamped to
/// [floor, 1].
double event_spatial_ratio(const EventStream& stream, double floor = kDefaultRatioFloor);

}  // namespace focus
