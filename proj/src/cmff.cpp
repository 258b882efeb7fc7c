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

#include "focus/cmff.hpp"

namespace focus {

namespace {

void require_same_grid(const SparsificationMap& a, const SparsificationMap& b) {
  require_shape(a.size() == b.size(), "masks differ in length");
}

}  // namespace

SparsificationMap complement_mask(const SparsificationMap& keeper, const SparsificationMap& other) {
  require_same_grid(keeper, other);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(keeper.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const auto k = keeper.bits()[i];
    const auto o = other.bits()[i];
    bits[i] = static_cast<std::uint8_t>(k ^ (k & o));
  }
  return {keeper.hs(), keeper.ws(), std::move(bits)};
}

SparsificationMap union_mask(const SparsificationMap& a, const SparsificationMap& b) {
  require_same_grid(a, b);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(a.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = static_cast<std::uint8_t>(a.bits()[i] | b.bits()[i]);
  return {a.hs(), a.ws(), std::move(bits)};
}

EnhancementMap cae_map(const SparsificationMap& diff, double beta) {
  if (!(beta > 0.0)) throw Error(ErrorKind::ConfigError, "enhancement coefficient must be positive");
  EnhancementMap map{Vector<double>(diff.size())};
  for (Index i = 0; i < diff.size(); ++i) map.values(i) = diff[i] ? beta : 1.0;
  return map;
}

}  // namespace focus
