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

#include "focus/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <vector>

namespace focus {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct LineParser {
  std::size_t line;
  std::string_view key;

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::ConfigError, "'" + std::string(key) + "': " + why, line);
  }

  template <typename T>
  T number(std::string_view v) const {
    T out{};
    v = trim(v);
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) fail("expected a number");
    return out;
  }

  bool boolean(std::string_view v) const {
    v = trim(v);
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    fail("expected true or false");
  }

  template <typename T>
  std::vector<T> list(std::string_view v, std::size_t expected) const {
    std::vector<T> out;
    std::size_t start = 0;
    for (;;) {
      const auto pos = v.find(',', start);
      out.push_back(number<T>(v.substr(start, pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    if (out.size() != expected) fail("expected " + std::to_string(expected) + " comma-separated values");
    return out;
  }
};

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  ModelConfig& m = cfg.model;
  int patch = m.stages[0].stride;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::ConfigError, "expected key = value", line_no);
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const LineParser p{line_no, key};

    if (key == "height") m.height = p.number<Index>(value);
    else if (key == "width") m.width = p.number<Index>(value);
    else if (key == "patch") patch = p.number<int>(value);
    else if (key == "channels") {
      const auto v = p.list<Index>(value, 4);
      for (std::size_t s = 0; s < 4; ++s) m.stages[s].channels = v[s];
    } else if (key == "blocks") {
      const auto v = p.list<int>(value, 4);
      for (std::size_t s = 0; s < 4; ++s) m.stages[s].block_count = v[s];
    } else if (key == "state_dim") m.layer.state_dim = p.number<Index>(value);
    else if (key == "expand") m.layer.expand = p.number<Index>(value);
    else if (key == "mlp_ratio") m.layer.mlp_ratio = p.number<Index>(value);
    else if (key == "rho") m.egcm.rho = p.number<double>(value);
    else if (key == "epsilon_r") m.egcm.epsilon_r = p.number<double>(value);
    else if (key == "sigma") m.egcm.sigma = p.number<double>(value);
    else if (key == "neighborhood") m.egcm.neighborhood = p.number<int>(value);
    else if (key == "beta") m.beta = p.number<double>(value);
    else if (key == "seed") m.seed = p.number<std::uint64_t>(value);
    else if (key == "stage1_override") m.stage1_override = p.boolean(value);
    else if (key == "bins") m.voxel_bins = p.number<int>(value);
    else if (key == "mask_mode") {
      try {
        m.mask_mode = parse_mask_mode(std::string(value));
      } catch (const Error&) {
        p.fail("expected adaptive, keep_all, dense or fixed_rate");
      }
    } else if (key == "fixed_keep") {
      const auto v = p.list<double>(value, 4);
      std::copy(v.begin(), v.end(), m.fixed_keep.begin());
    } else if (key == "window_start") cfg.window_start = p.number<std::int64_t>(value);
    else if (key == "window_end") cfg.window_end = p.number<std::int64_t>(value);
    else p.fail("unknown key");
  }
  for (std::size_t s = 0; s < 4; ++s) m.stages[s].stride = patch << s;
  check_config(m);
  return cfg;
}

std::string format_config(const RunConfig& config) {
  const ModelConfig& m = config.model;
  std::ostringstream out;
  out.precision(17);
  out << "height = " << m.height << "\n";
  out << "width = " << m.width << "\n";
  out << "patch = " << m.stages[0].stride << "\n";
  out << "channels = " << m.stages[0].channels << "," << m.stages[1].channels << "," << m.stages[2].channels << ","
      << m.stages[3].channels << "\n";
  out << "blocks = " << m.stages[0].block_count << "," << m.stages[1].block_count << "," << m.stages[2].block_count
      << "," << m.stages[3].block_count << "\n";
  out << "state_dim = " << m.layer.state_dim << "\n";
  out << "expand = " << m.layer.expand << "\n";
  out << "mlp_ratio = " << m.layer.mlp_ratio << "\n";
  out << "rho = " << m.egcm.rho << "\n";
  out << "epsilon_r = " << m.egcm.epsilon_r << "\n";
  out << "sigma = " << m.egcm.sigma << "\n";
  out << "neighborhood = " << m.egcm.neighborhood << "\n";
  out << "beta = " << m.beta << "\n";
  out << "seed = " << m.seed << "\n";
  out << "stage1_override = " << (m.stage1_override ? "true" : "false") << "\n";
  out << "bins = " << m.voxel_bins << "\n";
  out << "mask_mode = " << to_string(m.mask_mode) << "\n";
  out << "fixed_keep = " << m.fixed_keep[0] << "," << m.fixed_keep[1] << "," << m.fixed_keep[2] << ","
      << m.fixed_keep[3] << "\n";
  if (config.window_start) out << "window_start = " << *config.window_start << "\n";
  if (config.window_end) out << "window_end = " << *config.window_end << "\n";
  return out.str();
}

}  // namespace focus
