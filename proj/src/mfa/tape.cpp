/* Copyright 2026 The delta-forge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "delta/mfa/tape.hpp"

namespace delta::mfa {

Tape Tape::parse(std::string_view text) {
  for (char c : text) {
    if (!color_from_char(c))
      throw std::invalid_argument("invalid tape color '" + std::string(1, c) + "' in \"" +
                                  std::string(text) + "\"");
  }
  return Tape(std::string(text));
}

std::vector<Tape> enumerate_tapes(std::string_view alphabet, std::size_t max_len) {
  std::vector<Tape> out;
  out.push_back(Tape());
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (char c : alphabet) {
        Tape t = out[i];
        t.push_back(*color_from_char(c));
        out.push_back(std::move(t));
      }
    }
    level_begin = level_end;
  }
  return out;
}

}  // namespace delta::mfa
