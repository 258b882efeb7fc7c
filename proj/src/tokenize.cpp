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

#include "focus/tokenize.hpp"

namespace focus {

void check_stage_layout(const StageLayout& layout) {
  for (std::size_t s = 0; s < layout.size(); ++s) {
    const StageConfig& st = layout[s];
    if (st.stage_index != static_cast<int>(s) + 1)
      throw Error(ErrorKind::ConfigError, "stage indices must run 1..4");
    if (st.stride <= 0 || st.channels <= 0 || st.block_count < 0)
      throw Error(ErrorKind::ConfigError, "stage stride and channels must be positive");
    if (s > 0 && st.stride != 2 * layout[s - 1].stride)
      throw Error(ErrorKind::ConfigError, "stage strides must double from one stage to the next");
  }
}

}  // namespace focus
