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

#include "delta/common/score.hpp"

namespace delta {

Score Score::from_counts(std::size_t n_tests, std::size_t n_passed,
                         std::vector<Failure> failures) {
  Score s;
  s.n_tests = n_tests;
  s.n_passed = n_passed;
  s.per_test = n_tests == 0 ? 0.0 : static_cast<double>(n_passed) / static_cast<double>(n_tests);
  s.full_pass = n_tests > 0 && n_passed == n_tests;
  s.failures = std::move(failures);
  return s;
}

Score Score::zero(std::size_t n_tests, Failure diagnostic) {
  std::vector<Failure> f;
  f.push_back(std::move(diagnostic));
  return from_counts(n_tests, 0, std::move(f));
}

void to_json(nlohmann::json& j, const Failure& f) {
  j = nlohmann::json{{"input", f.input},
                     {"expected", f.expected},
                     {"observed", f.observed},
                     {"reason", f.reason}};
}

void from_json(const nlohmann::json& j, Failure& f) {
  f.input = j.value("input", "");
  f.expected = j.value("expected", "");
  f.observed = j.value("observed", "");
  f.reason = j.value("reason", "");
}

void to_json(nlohmann::json& j, const Score& s) {
  j = nlohmann::json{{"per_test", s.per_test},
                     {"full_pass", s.full_pass},
                     {"n_tests", s.n_tests},
                     {"n_passed", s.n_passed},
                     {"failures", s.failures}};
}

void from_json(const nlohmann::json& j, Score& s) {
  s.n_tests = j.value("n_tests", std::size_t{0});
  s.n_passed = j.value("n_passed", std::size_t{0});
  s.per_test = j.value("per_test", 0.0);
  s.full_pass = j.value("full_pass", false);
  s.failures = j.value("failures", std::vector<Failure>{});
}

}  // namespace delta
