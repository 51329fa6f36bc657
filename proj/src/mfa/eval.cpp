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

#include "delta/mfa/eval.hpp"

#include <stdexcept>

namespace delta::mfa {
namespace {

Failure failure_of(const TestCase& test, const Judgment& j) {
  std::string observed;
  if (const auto* end = std::get_if<ReachedEnd>(&j.run.outcome))
    observed = std::holds_alternative<Verdict>(test.expected) ? "accept" : "tape \"" + end->final_tape.str() + "\"";
  else
    observed = "reject";
  return {test.input.str(), to_string(test.expected), observed, std::string(outcome_tag(j.run.outcome))};
}

}  // namespace

Judgment judge_test(const Program& program, const TestCase& test, const RunLimits& limits) {
  Judgment j{false, run_machine(program, test.input, limits)};
  const auto* end = std::get_if<ReachedEnd>(&j.run.outcome);
  if (const auto* v = std::get_if<Verdict>(&test.expected))
    j.pass = (*v == Verdict::Accept) == (end != nullptr);
  else
    j.pass = end != nullptr && end->final_tape == std::get<Tape>(test.expected);
  return j;
}

std::vector<Judgment> judge_all_serial(const Program& program, const std::vector<TestCase>& tests,
                                       const RunLimits& limits) {
  std::vector<Judgment> out;
  out.reserve(tests.size());
  for (const auto& t : tests) out.push_back(judge_test(program, t, limits));
  return out;
}

std::vector<Judgment> judge_all_parallel(const Program& program, const std::vector<TestCase>& tests,
                                         const RunLimits& limits) {
  std::vector<Judgment> out(tests.size());
  const auto n = static_cast<std::ptrdiff_t>(tests.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = judge_test(program, tests[static_cast<std::size_t>(i)], limits);
  return out;
}

Score score_program(const Program& program, const std::vector<TestCase>& tests, const RunLimits& limits) {
  const auto judged = judge_all_parallel(program, tests, limits);
  std::size_t passed = 0;
  std::vector<Failure> failures;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    if (judged[i].pass)
      ++passed;
    else
      failures.push_back(failure_of(tests[i], judged[i]));
  }
  return Score::from_counts(tests.size(), passed, std::move(failures));
}

Score score_submission(std::string_view response, const ProblemInstance& instance,
                       const std::vector<TestCase>& tests, const RunLimits& limits) {
  (void)instance;
  if (tests.empty()) throw std::invalid_argument("score_submission needs a nonempty test suite");
  Program program;
  try {
    program = parse_program(extract_code_block(response));
  } catch (const ExtractError& e) {
    return Score::zero(tests.size(), {"", "", "", std::string("extract: ") + e.what()});
  } catch (const ParseError& e) {
    return Score::zero(tests.size(), {"", "", "", "parse: " + std::string(to_string(e.kind())) + ": " + e.what()});
  }
  if (const auto diags = validate_program(program); !diags.empty()) {
    std::string msg = "validate:";
    for (const auto& d : diags) msg += " " + std::string(to_string(d.rule)) + "(" + d.node_id + ")";
    return Score::zero(tests.size(), {"", "", "", msg});
  }
  return score_program(program, tests, limits);
}

}  // namespace delta::mfa
