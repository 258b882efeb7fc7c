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
#include <random>

#include "focus/tensor.hpp"

namespace focus {

/// Seeded generator whose streams are identical on every platform: draws
/// are built from raw 64-bit engine output instead of <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  bool bernoulli(double p) { return unit() < p; }

  std::uint64_t next() { return engine_(); }

  template <typename Scalar>
  RowMatrix<Scalar> matrix(Index rows, Index cols, double lo, double hi) {
    RowMatrix<Scalar> m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = static_cast<Scalar>(uniform(lo, hi));
    return m;
  }

  template <typename Scalar>
  Vector<Scalar> vector(Index n, double lo, double hi) {
    Vector<Scalar> v(n);
    for (Index i = 0; i < n; ++i) v(i) = static_cast<Scalar>(uniform(lo, hi));
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

/// Linear map with weights (and bias, when requested) drawn from
/// U(-1/sqrt(in), 1/sqrt(in)).
template <typename Scalar>
LinearMap<Scalar> random_linear(Rng& rng, Index in, Index out, bool with_bias) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  LinearMap<Scalar> map;
  map.weight = rng.matrix<Scalar>(out, in, -bound, bound);
  if (with_bias) map.bias = rng.vector<Scalar>(out, -bound, bound);
  return map;
}

}  // namespace focus
