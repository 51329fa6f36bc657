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

#ifndef DELTA_COMMON_SCORE_HPP
#define DELTA_COMMON_SCORE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace delta {

// One failing test case, rendered for feedback and serialization.
struct Failure {
  std::string input;     // tape text, or the timestamp for simulation tests
  std::string expected;
  std::string observed;
  std::string reason;    // short machine-readable tag: "none_route", "loop", "timeout", ...

  friend bool operator==(const Failure&, const Failure&) = default;
};

// Outcome of judging one submission against a test suite.
//   per_test  = n_passed / n_tests
//   full_pass = (n_passed == n_tests)
struct Score {
  double per_test = 0.0;
  bool full_pass = false;
  std::size_t n_tests = 0;
  std::size_t n_passed = 0;
  std::vector<Failure> failures;

  static Score from_counts(std::size_t n_tests, std::size_t n_passed,
                           std::vector<Failure> failures);
  // Zero score with a single diagnostic entry (extraction/parse/exec failure).
  static Score zero(std::size_t n_tests, Failure diagnostic);

  friend bool operator==(const Score&, const Score&) = default;
};

void to_json(nlohmann::json& j, const Failure& f);
void from_json(const nlohmann::json& j, Failure& f);
void to_json(nlohmann::json& j, const Score& s);
void from_json(const nlohmann::json& j, Score& s);

}  // namespace delta

#endif  // DELTA_COMMON_SCORE_HPP
