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
#include <string_view>
#include <vector>

#include "focus/egms.hpp"
#include "focus/events.hpp"
#include "focus/model.hpp"
#include "focus/tensor.hpp"

// File formats. All binary formats are little-endian.
//
//   events CSV    one `x,y,t,p` per line, optional header line; p in {-1,1}
//                 or {0,1} with 0 read as -1
//   EVT1          "EVT1", u32 count, then per event u16 x, u16 y, u64 t, i8 p
//   voxel dump    u16 B, u16 H, u16 W, u16 0, then B*H*W f32 (bin, row, col)
//   token dump    u16 hs, u16 ws, u16 C, u16 stride, then hs*ws*C f32
//                 (token-major)
//   score dump    u32 N, then N f64
//   weights       "FWT1", u32 count, then per tensor u16 name length, name,
//                 u32 rows, u32 cols, rows*cols f64 (row-major)
namespace focus {

std::vector<Event> parse_events_csv(std::string_view text);
std::string format_events_csv(std::span<const Event> events);

std::vector<Event> parse_events_evt1(std::string_view bytes);
std::string format_events_evt1(std::span<const Event> events);

/// Reads either format, choosing EVT1 when the file starts with its magic.
std::vector<Event> read_events(const std::string& path);

std::string format_voxel_grid(const VoxelGrid& grid);
VoxelGrid parse_voxel_grid(std::string_view bytes);

std::string format_token_grid(const TokenGrid<double>& grid);
TokenGrid<double> parse_token_grid(std::string_view bytes);

std::string format_scores(const ScoreMap& scores);
Vector<double> parse_scores(std::string_view bytes);

std::string format_weights(const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> parse_weights(std::string_view bytes);

/// 8-bit PNM images. PPM (P6) loads as 3 planes, PGM (P5) is replicated
/// into 3 planes; samples are scaled to [0, 1]. Max values up to 65535 are
/// accepted.
PlanarTensor<double> parse_pnm(std::string_view bytes);
std::string format_ppm(const PlanarTensor<double>& image);
std::string format_pgm(const RowMatrix<std::uint8_t>& gray);

/// Mask as a token-resolution PGM: 255 kept, 0 dropped.
std::string format_mask_pgm(const SparsificationMap& mask);

}  // namespace focus
