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

#ifndef DELTA_MFA_EVAL_HPP
#define DELTA_MFA_EVAL_HPP

#include <string_view>
#include <vector>

#include "delta/common/score.hpp"
#include "delta/mfa/dsl.hpp"
#include "delta/mfa/families.hpp"

namespace delta::mfa {

struct Judgment {
  bool pass = false;
  RunResult run;
};

// Decision: expected Accept needs ReachedEnd, expected Reject accepts any
// rejection (NONE route, loop, budget). Transformation: ReachedEnd with the
// exact expected tape.
Judgment judge_test(const Program& program, const TestCase& test, const RunLimits& limits = {});

// Judges every case. The parallel variant splits the suite across OpenMP
// threads and returns the same vector as the serial one.
std::vector<Judgment> judge_all_serial(const Program& program, const std::vector<TestCase>& tests,
                                       const RunLimits& limits = {});
std::vector<Judgment> judge_all_parallel(const Program& program, const std::vector<TestCase>& tests,
                                         const RunLimits& limits = {});

// Score for a validated program. Failures list the failing cases in suite order.
Score score_program(const Program& program, const std::vector<TestCase>& tests,
                    const RunLimits& limits = {});

// extract -> parse -> validate -> judge. Never throws for a bad response;
// those score zero with one diagnostic failure entry. Throws
// std::invalid_argument only for an empty suite.
Score score_submission(std::string_view response, const ProblemInstance& instance,
                       const std::vector<TestCase>& tests, const RunLimits& limits = {});

}  // namespace delta::mfa

#endif  // DELTA_MFA_EVAL_HPP
