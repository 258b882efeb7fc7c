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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace focus {

enum class ErrorKind {
  OutOfBounds,
  BadPolarity,
  ShapeMismatch,
  IndexMismatch,
  IndexOutOfRange,
  OddLength,
  NumericError,
  ParseError,
  IoError,
  ConfigError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Library-wide exception. `where` carries the offending element index, or
/// the line/byte offset for parse errors, when one applies.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> where = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> where() const noexcept { return where_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> where_;
};

inline void require_shape(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::ShapeMismatch, message);
}

}  // namespace focus
