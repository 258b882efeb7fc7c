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

#include <string>
#include <vector>

#include "focus/egms.hpp"
#include "focus/tensor.hpp"

namespace focus {

/// Kept tokens of a grid, in ascending row-major order, with the positions
/// they came from.
template <typename Scalar>
struct GatheredSequence {
  RowMatrix<Scalar> tokens;  // K x C
  std::vector<Index> indices;

  Index size() const { return static_cast<Index>(indices.size()); }
};

template <typename Scalar>
GatheredSequence<Scalar> gather(const TokenGrid<Scalar>& grid, const SparsificationMap& mask) {
  require_shape(mask.size() == grid.tokens(), "mask length does not match token count");
  GatheredSequence<Scalar> seq;
  seq.indices = mask.kept_indices();
  seq.tokens.resize(seq.size(), grid.channels());
  for (Index k = 0; k < seq.size(); ++k) seq.tokens.row(k) = grid.token(seq.indices[static_cast<std::size_t>(k)]);
  return seq;
}

/// Copy of `base` with the sequence's tokens written back at their indices.
template <typename Scalar>
TokenGrid<Scalar> scatter(const GatheredSequence<Scalar>& seq, const TokenGrid<Scalar>& base) {
  require_shape(seq.tokens.rows() == seq.size(), "sequence rows do not match its index list");
  require_shape(seq.size() == 0 || seq.tokens.cols() == base.channels(), "sequence width does not match grid");
  TokenGrid<Scalar> out = base;
  for (Index k = 0; k < seq.size(); ++k) {
    const Index idx = seq.indices[static_cast<std::size_t>(k)];
    if (idx < 0 || idx >= base.tokens())
      throw Error(ErrorKind::IndexOutOfRange, "scatter index " + std::to_string(idx) + " outside grid",
                  static_cast<std::size_t>(k));
    out.token(idx) = seq.tokens.row(k);
  }
  return out;
}

}  // namespace focus
