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

#include "focus/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "focus/detail/bytes.hpp"

namespace focus {

using detail::ByteReader;
using detail::put_f32;
using detail::put_f64;
using detail::put_le;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

bool looks_like_header(std::string_view line) {
  return std::any_of(line.begin(), line.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); });
}

std::uint16_t checked_u16(Index v, const char* what) {
  if (v < 0 || v > std::numeric_limits<std::uint16_t>::max())
    throw Error(ErrorKind::ShapeMismatch, std::string(what) + " does not fit in 16 bits");
  return static_cast<std::uint16_t>(v);
}

}  // namespace

std::vector<Event> parse_events_csv(std::string_view text) {
  std::vector<Event> events;
  std::size_t line_no = 0;
  bool first_content = true;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (first_content && looks_like_header(line)) {
      first_content = false;
      continue;
    }
    first_content = false;
    const auto fields = split(line, ',');
    if (fields.size() != 4) throw Error(ErrorKind::ParseError, "expected 4 fields x,y,t,p", line_no);
    Event e;
    int p = 0;
    if (!parse_int(fields[0], e.x) || !parse_int(fields[1], e.y) || !parse_int(fields[2], e.t) ||
        !parse_int(fields[3], p))
      throw Error(ErrorKind::ParseError, "malformed event line '" + std::string(line) + "'", line_no);
    if (e.t < 0) throw Error(ErrorKind::ParseError, "negative timestamp", line_no);
    if (p == 0) p = -1;
    if (p != 1 && p != -1) throw Error(ErrorKind::ParseError, "polarity must be -1, 0 or 1", line_no);
    e.p = static_cast<std::int8_t>(p);
    events.push_back(e);
  }
  return events;
}

std::string format_events_csv(std::span<const Event> events) {
  std::string out = "x,y,t,p\n";
  for (const Event& e : events)
    out += std::to_string(e.x) + "," + std::to_string(e.y) + "," + std::to_string(e.t) + "," +
           std::to_string(static_cast<int>(e.p)) + "\n";
  return out;
}

std::vector<Event> parse_events_evt1(std::string_view bytes) {
  ByteReader in(bytes);
  if (in.bytes(4) != "EVT1") throw Error(ErrorKind::ParseError, "missing EVT1 magic", 0);
  const auto count = in.get_le<std::uint32_t>();
  std::vector<Event> events;
  events.reserve(std::min<std::size_t>(count, bytes.size() / 13));
  for (std::uint32_t i = 0; i < count; ++i) {
    Event e;
    e.x = in.get_le<std::uint16_t>();
    e.y = in.get_le<std::uint16_t>();
    const auto t = in.get_le<std::uint64_t>();
    if (t > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
      throw Error(ErrorKind::ParseError, "timestamp out of range", in.offset() - 8);
    e.t = static_cast<std::int64_t>(t);
    e.p = static_cast<std::int8_t>(in.get_le<std::uint8_t>());
    events.push_back(e);
  }
  if (!in.done()) throw Error(ErrorKind::ParseError, "trailing bytes after last event", in.offset());
  return events;
}

std::string format_events_evt1(std::span<const Event> events) {
  if (events.size() > std::numeric_limits<std::uint32_t>::max())
    throw Error(ErrorKind::ShapeMismatch, "too many events for EVT1");
  std::string out = "EVT1";
  put_le(out, static_cast<std::uint32_t>(events.size()));
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    if (e.x < 0 || e.x > 0xFFFF || e.y < 0 || e.y > 0xFFFF || e.t < 0)
      throw Error(ErrorKind::OutOfBounds, "event not representable in EVT1", i);
    put_le(out, static_cast<std::uint16_t>(e.x));
    put_le(out, static_cast<std::uint16_t>(e.y));
    put_le(out, static_cast<std::uint64_t>(e.t));
    put_le(out, static_cast<std::uint8_t>(e.p));
  }
  return out;
}

std::vector<Event> read_events(const std::string& path) {
  const std::string data = detail::read_file(path);
  if (data.starts_with("EVT1")) return parse_events_evt1(data);
  return parse_events_csv(data);
}

std::string format_voxel_grid(const VoxelGrid& grid) {
  std::string out;
  put_le(out, checked_u16(grid.channels(), "bin count"));
  put_le(out, checked_u16(grid.height(), "height"));
  put_le(out, checked_u16(grid.width(), "width"));
  put_le(out, std::uint16_t{0});
  for (const auto& plane : grid.planes)
    for (Index y = 0; y < plane.rows(); ++y)
      for (Index x = 0; x < plane.cols(); ++x) put_f32(out, static_cast<float>(plane(y, x)));
  return out;
}

VoxelGrid parse_voxel_grid(std::string_view bytes) {
  ByteReader in(bytes);
  const auto b = in.get_le<std::uint16_t>();
  const auto h = in.get_le<std::uint16_t>();
  const auto w = in.get_le<std::uint16_t>();
  in.get_le<std::uint16_t>();
  VoxelGrid grid = VoxelGrid::zeros(b, h, w);
  for (auto& plane : grid.planes)
    for (Index y = 0; y < h; ++y)
      for (Index x = 0; x < w; ++x) plane(y, x) = in.get_f32();
  if (!in.done()) throw Error(ErrorKind::ParseError, "trailing bytes after voxel data", in.offset());
  return grid;
}

std::string format_token_grid(const TokenGrid<double>& grid) {
  std::string out;
  put_le(out, checked_u16(grid.hs, "token rows"));
  put_le(out, checked_u16(grid.ws, "token cols"));
  put_le(out, checked_u16(grid.channels(), "channels"));
  put_le(out, checked_u16(grid.stride, "stride"));
  for (Index i = 0; i < grid.tokens(); ++i)
    for (Index c = 0; c < grid.channels(); ++c) put_f32(out, static_cast<float>(grid.features(i, c)));
  return out;
}

TokenGrid<double> parse_token_grid(std::string_view bytes) {
  ByteReader in(bytes);
  const auto hs = in.get_le<std::uint16_t>();
  const auto ws = in.get_le<std::uint16_t>();
  const auto c = in.get_le<std::uint16_t>();
  const auto stride = in.get_le<std::uint16_t>();
  TokenGrid<double> grid(hs, ws, c, stride);
  for (Index i = 0; i < grid.tokens(); ++i)
    for (Index k = 0; k < c; ++k) grid.features(i, k) = in.get_f32();
  if (!in.done()) throw Error(ErrorKind::ParseError, "trailing bytes after token data", in.offset());
  return grid;
}

std::string format_scores(const ScoreMap& scores) {
  std::string out;
  put_le(out, static_cast<std::uint32_t>(scores.size()));
  for (Index i = 0; i < scores.size(); ++i) put_f64(out, scores.values(i));
  return out;
}

Vector<double> parse_scores(std::string_view bytes) {
  ByteReader in(bytes);
  const auto n = in.get_le<std::uint32_t>();
  if (bytes.size() != 4 + 8 * static_cast<std::size_t>(n))
    throw Error(ErrorKind::ParseError, "score dump length does not match its header", 0);
  Vector<double> v(n);
  for (std::uint32_t i = 0; i < n; ++i) v(i) = in.get_f64();
  return v;
}

std::string format_weights(const std::vector<NamedTensor>& tensors) {
  std::string out = "FWT1";
  put_le(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& t : tensors) {
    put_le(out, checked_u16(static_cast<Index>(t.name.size()), "tensor name"));
    out += t.name;
    put_le(out, static_cast<std::uint32_t>(t.value.rows()));
    put_le(out, static_cast<std::uint32_t>(t.value.cols()));
    for (Index i = 0; i < t.value.rows(); ++i)
      for (Index j = 0; j < t.value.cols(); ++j) put_f64(out, t.value(i, j));
  }
  return out;
}

std::vector<NamedTensor> parse_weights(std::string_view bytes) {
  ByteReader in(bytes);
  if (in.bytes(4) != "FWT1") throw Error(ErrorKind::ParseError, "missing FWT1 magic", 0);
  const auto count = in.get_le<std::uint32_t>();
  std::vector<NamedTensor> tensors;
  for (std::uint32_t k = 0; k < count; ++k) {
    NamedTensor t;
    const auto len = in.get_le<std::uint16_t>();
    t.name = std::string(in.bytes(len));
    const auto rows = in.get_le<std::uint32_t>();
    const auto cols = in.get_le<std::uint32_t>();
    if (static_cast<std::uint64_t>(rows) * cols * 8 > bytes.size())
      throw Error(ErrorKind::ParseError, "tensor '" + t.name + "' larger than the file", in.offset());
    t.value.resize(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
      for (std::uint32_t j = 0; j < cols; ++j) t.value(i, j) = in.get_f64();
    tensors.push_back(std::move(t));
  }
  if (!in.done()) throw Error(ErrorKind::ParseError, "trailing bytes after last tensor", in.offset());
  return tensors;
}

namespace {

// Reads the next whitespace-delimited header token, skipping # comments.
std::string_view pnm_token(std::string_view data, std::size_t& pos) {
  for (;;) {
    while (pos < data.size() && std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    if (pos < data.size() && data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  const std::size_t start = pos;
  while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
  if (start == pos) throw Error(ErrorKind::ParseError, "truncated PNM header", start);
  return data.substr(start, pos - start);
}

int pnm_number(std::string_view data, std::size_t& pos) {
  const std::size_t at = pos;
  int v = 0;
  if (!parse_int(pnm_token(data, pos), v) || v <= 0) throw Error(ErrorKind::ParseError, "bad PNM header value", at);
  return v;
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

PlanarTensor<double> parse_pnm(std::string_view bytes) {
  std::size_t pos = 0;
  const std::string_view magic = pnm_token(bytes, pos);
  int channels = 0;
  if (magic == "P6")
    channels = 3;
  else if (magic == "P5")
    channels = 1;
  else
    throw Error(ErrorKind::ParseError, "only binary PPM (P6) and PGM (P5) are supported", 0);
  const int width = pnm_number(bytes, pos);
  const int height = pnm_number(bytes, pos);
  const int maxval = pnm_number(bytes, pos);
  if (maxval > 65535) throw Error(ErrorKind::ParseError, "PNM max value above 65535", pos);
  ++pos;  // single whitespace byte before the raster
  const std::size_t sample = maxval > 255 ? 2 : 1;
  const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                           static_cast<std::size_t>(channels) * sample;
  if (pos > bytes.size() || bytes.size() - pos < need) throw Error(ErrorKind::ParseError, "truncated PNM raster", pos);

  PlanarTensor<double> image = PlanarTensor<double>::zeros(kImageChannels, height, width);
  const auto* raster = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
  const auto scale = static_cast<double>(maxval);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      for (int c = 0; c < channels; ++c) {
        const std::size_t at = ((static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) *
                                    static_cast<std::size_t>(channels) +
                                static_cast<std::size_t>(c)) *
                               sample;
        const unsigned v = sample == 2 ? (raster[at] << 8U) | raster[at + 1] : raster[at];
        image(c, y, x) = static_cast<double>(v) / scale;
      }
  if (channels == 1) {
    image.planes[1] = image.planes[0];
    image.planes[2] = image.planes[0];
  }
  return image;
}

std::string format_ppm(const PlanarTensor<double>& image) {
  require_shape(image.channels() == 3, "PPM output needs 3 channels");
  std::string out = "P6\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  for (Index y = 0; y < image.height(); ++y)
    for (Index x = 0; x < image.width(); ++x)
      for (Index c = 0; c < 3; ++c) out.push_back(static_cast<char>(to_byte(image(c, y, x))));
  return out;
}

std::string format_pgm(const RowMatrix<std::uint8_t>& gray) {
  std::string out = "P5\n" + std::to_string(gray.cols()) + " " + std::to_string(gray.rows()) + "\n255\n";
  for (Index y = 0; y < gray.rows(); ++y)
    for (Index x = 0; x < gray.cols(); ++x) out.push_back(static_cast<char>(gray(y, x)));
  return out;
}

std::string format_mask_pgm(const SparsificationMap& mask) {
  RowMatrix<std::uint8_t> gray(mask.hs(), mask.ws());
  for (Index i = 0; i < mask.hs(); ++i)
    for (Index j = 0; j < mask.ws(); ++j) gray(i, j) = mask[i * mask.ws() + j] ? 255 : 0;
  return format_pgm(gray);
}

}  // namespace focus
