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

#ifndef DELTA_BOUNCE_EVAL_HPP
#define DELTA_BOUNCE_EVAL_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "delta/bounce/families.hpp"
#include "delta/common/score.hpp"

namespace delta::bounce {

// Guest command template. Placeholders: {harness} (the bundled Python
// harness), {candidate} (file holding the submitted source) and {workdir}.
struct ExecPolicy {
  std::vector<std::string> guest_command = {"python3", "-I", "-B", "{harness}", "{candidate}"};
  double wall_timeout = 10.0;                // seconds per evaluation
  std::size_t memory_cap = 512ull << 20;     // address-space limit, bytes
  std::size_t output_cap = 1u << 20;         // stdout bytes before FormatError
};

enum class ExecFailure { Timeout, Crash, FormatError, ForbiddenBehavior };

std::string_view to_string(ExecFailure failure);

struct CandidateResult {
  // positions[i][b] for timestamp i and ball b
  std::vector<std::vector<Vec2>> positions;
  std::optional<ExecFailure> failure;
  std::string detail;

  bool ok() const { return !failure.has_value(); }
};

// Harness exit codes shared with the Python side.
inline constexpr int kExitForbidden = 3;
inline constexpr int kExitCandidateError = 4;
inline constexpr int kExitBadReturn = 5;

// Python source of the harness. Reads whitespace-separated timestamps on
// stdin, evaluates predict_position(t) in a fresh namespace per timestamp
// and prints one line per timestamp: "x,y x,y ..." with two decimals.
std::string_view harness_source();

// Parses the wire format above; nullopt on any deviation.
std::optional<std::vector<std::vector<Vec2>>> parse_positions(std::string_view text, std::size_t n_times,
                                                              std::size_t n_balls);

// Formats one wire line.
std::string format_positions(const std::vector<Vec2>& positions);

// Runs the guest in a fresh temporary directory as a separate process group
// with the policy limits; the group is killed on timeout.
CandidateResult execute_candidate(std::string_view source, const DatasetEntry& entry,
                                  const ExecPolicy& policy = {});

// A timestamp passes iff every ball is within entry.tolerance (Euclidean,
// unrounded) of the expected position. Execution failures score zero.
Score score_candidate(const CandidateResult& result, const DatasetEntry& entry);

// Last ```python fence, else the last fence, else the whole text.
std::string extract_python(std::string_view response);

// extract_python -> execute_candidate -> score_candidate.
Score score_submission(std::string_view response, const DatasetEntry& entry, const ExecPolicy& policy = {});

}  // namespace delta::bounce

#endif  // DELTA_BOUNCE_EVAL_HPP
