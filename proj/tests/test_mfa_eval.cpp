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

#include <gtest/gtest.h>

#include "delta/mfa/eval.hpp"
#include "test_util.hpp"

namespace delta::mfa {
namespace {

using delta::testing::kOneRed;
using delta::testing::load_program;

constexpr const char* kRejectAll = "START s:\n    NEXT p\nPULLER_RB p:\nEND e\n";
constexpr const char* kLoopForever = "START s:\n    NEXT p\nPULLER_RB p:\n    [EMPTY] p\n    [R] p\n    [B] p\nEND e\n";

TEST(Judge, Examples) {
  const auto final_machine = load_program("has_brrr_final.mfa");
  EXPECT_TRUE(judge_test(final_machine, {Tape::parse("BRRR"), Verdict::Accept}).pass);
  const auto one_red = parse_program(kOneRed);
  const auto j = judge_test(one_red, {Tape::parse("RR"), Tape()});
  EXPECT_FALSE(j.pass);
  EXPECT_EQ(j.run.outcome, Outcome(ReachedEnd{Tape::parse("R")}));
  EXPECT_TRUE(judge_test(parse_program(kLoopForever), {Tape::parse("RB"), Verdict::Reject}).pass);
}

TEST(Score, Examples) {
  const auto inst = make_instance(FamilyId::EXACT, [] {
    Params p;
    p.pattern = "RBB";
    return p;
  }());
  std::vector<TestCase> suite;
  for (const auto& t : enumerate_tapes("RB", 4)) {
    const auto e = spec_eval(inst, t);
    suite.push_back({t, e});
  }
  const auto ref = score_program(load_program("exact_rbb.mfa"), suite);
  EXPECT_TRUE(ref.full_pass);
  EXPECT_DOUBLE_EQ(ref.per_test, 1.0);

  std::vector<TestCase> balanced;
  for (int i = 0; i < 10; ++i) balanced.push_back({Tape::parse("RBB"), Verdict::Accept});
  for (int i = 0; i < 10; ++i) balanced.push_back({Tape::parse(std::string(i + 1, 'R')), Verdict::Reject});
  const auto half = score_program(parse_program(kRejectAll), balanced);
  EXPECT_DOUBLE_EQ(half.per_test, 0.5);
  EXPECT_FALSE(half.full_pass);
  EXPECT_EQ(half.failures.size(), 10u);
  EXPECT_EQ(half.failures[0].reason, "none_route");
}

TEST(Submission, Diagnostics) {
  const auto inst = table_instance(FamilyId::EXACT);
  const auto tests = generate_tests(inst, 10, Seed{1});
  const auto prose = score_submission("I cannot solve this.", inst, tests);
  EXPECT_DOUBLE_EQ(prose.per_test, 0.0);
  EXPECT_EQ(prose.n_tests, 10u);
  ASSERT_EQ(prose.failures.size(), 1u);
  EXPECT_EQ(prose.failures[0].reason.rfind("extract", 0), 0u);
  const auto bad = score_submission("```manufactoria\nSTART s:\n    NEXT x\nEND e\n```", inst, tests);
  EXPECT_EQ(bad.failures.at(0).reason.rfind("parse: UnknownTarget", 0), 0u);
  const auto invalid = score_submission("```manufactoria\nSTART s:\nEND e\n```", inst, tests);
  EXPECT_EQ(invalid.failures.at(0).reason.rfind("validate: MissingRoute", 0), 0u);
  const auto good =
      score_submission("```manufactoria\n" + delta::testing::read_data("exact_rbb.mfa") + "```", inst, tests);
  EXPECT_TRUE(good.full_pass);
  EXPECT_THROW(score_submission("x", inst, {}), std::invalid_argument);
}

// Serial and parallel kernels give identical judgments.
TEST(Parallel, MatchesSerial) {
  const auto inst = table_instance(FamilyId::APPEND);
  std::vector<TestCase> suite;
  for (const auto& t : enumerate_tapes("RB", 10)) suite.push_back({t, spec_eval(inst, t)});
  for (const char* name : {"append_rbr.mfa", "start_br.mfa"}) {
    const auto p = load_program(name);
    const auto s = judge_all_serial(p, suite);
    const auto q = judge_all_parallel(p, suite);
    ASSERT_EQ(s.size(), q.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_EQ(s[i].pass, q[i].pass);
      EXPECT_EQ(s[i].run, q[i].run);
    }
  }
}

// full_pass holds exactly when per_test is 1.
TEST(Property, FullPassIffPerTestOne) {
  Rng rng(Seed{5});
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = kAllFamilies[static_cast<std::size_t>(rng.uniform_int(0, kAllFamilies.size() - 1))];
    const auto inst = sample_instance(f, Seed{rng.next()});
    const auto tests = generate_tests(inst, 8, Seed{rng.next()});
    const auto p = load_program(rng.bernoulli(0.5) ? "append_rbr.mfa" : "start_br.mfa");
    const auto s = score_program(p, tests);
    EXPECT_EQ(s.full_pass, s.per_test == 1.0);
    EXPECT_EQ(s.n_tests - s.n_passed, s.failures.size());
  }
}

}  // namespace
}  // namespace delta::mfa
