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
#include <optional>
#include <string>
#include <string_view>

#include "focus/model.hpp"

namespace focus {

/// Model configuration plus the event window, which event files do not
/// carry.
struct RunConfig {
  ModelConfig model;
  std::optional<std::int64_t> window_start;
  std::optional<std::int64_t> window_end;
};

/// `key = value` lines; `#` starts a comment. Keys:
///   height, width, patch, channels (4 comma-separated), blocks (4
///   comma-separated), state_dim, expand, mlp_ratio, rho, epsilon_r, sigma,
///   neighborhood, beta, seed, stage1_override (true/false), bins,
///   mask_mode (adaptive/keep_all/dense/fixed_rate), fixed_keep, window_start, window_end
/// Unknown keys and malformed values raise ConfigError with the line number.
RunConfig parse_config(std::string_view text);

/// Renders every key, so parse_config(format_config(c)) reproduces c.
std::string format_config(const RunConfig& config);

}  // namespace focus
