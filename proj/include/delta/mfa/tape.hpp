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

#ifndef DELTA_MFA_TAPE_HPP
#define DELTA_MFA_TAPE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace delta::mfa {

enum class Color : char { R = 'R', B = 'B', Y = 'Y', G = 'G' };

constexpr char to_char(Color c) { return static_cast<char>(c); }

constexpr std::optional<Color> color_from_char(char c) {
  switch (c) {
    case 'R': return Color::R;
    case 'B': return Color::B;
    case 'Y': return Color::Y;
    case 'G': return Color::G;
    default: return std::nullopt;
  }
}

// Ordered color sequence; index 0 is the front that pullers consume.
// Stored as its textual form so configurations hash and print cheaply.
class Tape {
 public:
  Tape() = default;

  // Throws std::invalid_argument on any character outside RBYG.
  static Tape parse(std::string_view text);

  bool empty() const { return cells_.empty(); }
  std::size_t size() const { return cells_.size(); }
  Color front() const { return *color_from_char(cells_.front()); }
  Color at(std::size_t i) const { return *color_from_char(cells_[i]); }

  void pop_front() { cells_.erase(cells_.begin()); }
  void push_back(Color c) { cells_.push_back(to_char(c)); }

  const std::string& str() const { return cells_; }

  friend bool operator==(const Tape&, const Tape&) = default;
  friend auto operator<=>(const Tape&, const Tape&) = default;

 private:
  explicit Tape(std::string cells) : cells_(std::move(cells)) {}
  std::string cells_;
};

// Every tape over `alphabet` with length <= max_len, shortest first, then in
// alphabet order. Used for exhaustive checks and witness search.
std::vector<Tape> enumerate_tapes(std::string_view alphabet, std::size_t max_len);

}  // namespace delta::mfa

#endif  // DELTA_MFA_TAPE_HPP
