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

#include <regex>
#include <set>

#include <gtest/gtest.h>

#include "delta/mfa/families.hpp"

namespace delta::mfa {
namespace {

Params pattern(std::string p, std::string alphabet = "RB") {
  Params params;
  params.alphabet = std::move(alphabet);
  params.pattern = std::move(p);
  return params;
}

bool accepts(const ProblemInstance& inst, std::string_view tape) {
  return std::get<Verdict>(spec_eval(inst, Tape::parse(tape))) == Verdict::Accept;
}

Tape output(const ProblemInstance& inst, std::string_view tape) {
  return std::get<Tape>(spec_eval(inst, Tape::parse(tape)));
}

// Independent MSB-first reading for the numeric oracles.
std::uint64_t binary(const std::string& s) {
  std::uint64_t v = 0;
  for (char c : s) v = v * 2 + (c == 'B');
  return v;
}

TEST(Families, TierAndKind) {
  EXPECT_EQ(tier_of(FamilyId::APPEND), Tier::Basic);
  EXPECT_EQ(tier_of(FamilyId::COMPR), Tier::Easy);
  EXPECT_EQ(tier_of(FamilyId::BIT_OP), Tier::Medium);
  EXPECT_EQ(tier_of(FamilyId::ADD), Tier::Hard);
  for (auto f : {FamilyId::APPEND, FamilyId::PREPEND, FamilyId::MUTATE, FamilyId::BIT_OP, FamilyId::FDIV,
                 FamilyId::MINMAX, FamilyId::ADD})
    EXPECT_EQ(task_kind_of(f), TaskKind::Transformation) << to_string(f);
  for (auto f : {FamilyId::EXACT, FamilyId::START, FamilyId::ENDS, FamilyId::REGEX, FamilyId::HAS, FamilyId::COMPR,
                 FamilyId::SYMM})
    EXPECT_EQ(task_kind_of(f), TaskKind::Decision) << to_string(f);
  for (auto f : kAllFamilies) EXPECT_EQ(family_from_string(to_string(f)), f);
}

TEST(SpecEval, Examples) {
  const auto has = make_instance(FamilyId::HAS, pattern("BRRR"));
  EXPECT_TRUE(accepts(has, "BBRRR"));
  EXPECT_FALSE(accepts(has, "BRR"));
  Params compr;
  compr.comparator = Comparator::GreaterEqual;
  compr.constant = 13;
  const auto ge13 = make_instance(FamilyId::COMPR, compr);
  EXPECT_TRUE(accepts(ge13, "BBRB"));
  EXPECT_FALSE(accepts(ge13, "BBRR"));
  EXPECT_EQ(output(make_instance(FamilyId::APPEND, pattern("RBR")), "B"), Tape::parse("BRBR"));
  const auto exact = make_instance(FamilyId::EXACT, pattern("RBB"));
  EXPECT_TRUE(accepts(exact, "RBB"));
  EXPECT_FALSE(accepts(exact, "RB"));
  EXPECT_THROW(spec_eval(exact, Tape::parse("RYB")), AlphabetError);
}

TEST(SpecEval, PrependMutateStartEnds) {
  EXPECT_EQ(output(make_instance(FamilyId::PREPEND, pattern("BR")), "RR"), Tape::parse("BRRR"));
  Params m = pattern("RB");
  m.replacement = "BR";
  EXPECT_EQ(output(make_instance(FamilyId::MUTATE, m), "RBRB"), Tape::parse("BRBR"));
  EXPECT_TRUE(accepts(make_instance(FamilyId::START, pattern("BR")), "BRB"));
  EXPECT_FALSE(accepts(make_instance(FamilyId::START, pattern("BR")), "RBR"));
  EXPECT_TRUE(accepts(make_instance(FamilyId::ENDS, pattern("BB")), "RBB"));
  EXPECT_FALSE(accepts(make_instance(FamilyId::ENDS, pattern("BB")), "BBR"));
}

TEST(SpecEval, SymmPattern) {
  Params p;
  p.symm_offset = 1;
  const auto symm = make_instance(FamilyId::SYMM, p);
  EXPECT_TRUE(accepts(symm, "RBB"));
  EXPECT_TRUE(accepts(symm, "RRBBB"));
  EXPECT_FALSE(accepts(symm, "RB"));
  EXPECT_FALSE(accepts(symm, "B"));
  EXPECT_FALSE(accepts(symm, ""));
}

// REGEX against std::regex over every tape up to length 8.
TEST(SpecEval, RegexMatchesStdRegex) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto inst = sample_instance(FamilyId::REGEX, Seed{s});
    const std::regex re(render_regex(inst.params.regex));
    for (const auto& t : enumerate_tapes(inst.params.alphabet, 8))
      ASSERT_EQ(accepts(inst, t.str()), std::regex_match(t.str(), re))
          << render_regex(inst.params.regex) << " on " << t.str();
  }
}

// HAS against std::string::find.
TEST(SpecEval, HasMatchesFind) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto inst = sample_instance(FamilyId::HAS, Seed{s});
    for (const auto& t : enumerate_tapes(inst.params.alphabet, inst.params.alphabet.size() > 2 ? 5 : 9))
      ASSERT_EQ(accepts(inst, t.str()), t.str().find(inst.params.pattern) != std::string::npos);
  }
}

// Numeric families against 64-bit arithmetic on short tapes.
TEST(SpecEval, NumericFamiliesMatchIntegerArithmetic) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto compr = sample_instance(FamilyId::COMPR, Seed{s});
    const auto bit_or = sample_instance(FamilyId::BIT_OP, Seed{s});
    const auto fdiv = sample_instance(FamilyId::FDIV, Seed{s});
    const auto minmax = sample_instance(FamilyId::MINMAX, Seed{s});
    const auto add = sample_instance(FamilyId::ADD, Seed{s});
    for (const auto& t : enumerate_tapes("RB", 9)) {
      const std::uint64_t v = binary(t.str());
      const auto c = static_cast<std::uint64_t>(compr.params.constant);
      bool want = false;
      switch (compr.params.comparator) {
        case Comparator::GreaterEqual: want = v >= c; break;
        case Comparator::Greater: want = v > c; break;
        case Comparator::LessEqual: want = v <= c; break;
        case Comparator::Less: want = v < c; break;
      }
      ASSERT_EQ(accepts(compr, t.str()), want) << compr.criteria << " on " << t.str();
      ASSERT_EQ(binary(output(bit_or, t.str()).str()), v | static_cast<std::uint64_t>(bit_or.params.constant));
      ASSERT_EQ(binary(output(fdiv, t.str()).str()), v / static_cast<std::uint64_t>(fdiv.params.constant));
      const auto k = static_cast<std::uint64_t>(minmax.params.constant);
      ASSERT_EQ(binary(output(minmax, t.str()).str()),
                minmax.params.extremum == Extremum::Max ? std::max(v, k) : std::min(v, k));
      ASSERT_EQ(binary(output(add, t.str()).str()), v + static_cast<std::uint64_t>(add.params.constant));
    }
  }
}

TEST(Encoding, RoundTrip) {
  EXPECT_EQ(encode_value(0), Tape::parse("R"));
  EXPECT_EQ(encode_value(13), Tape::parse("BBRB"));
  EXPECT_EQ(decode_value(Tape()), 0u);
  for (std::uint64_t v = 0; v < 2000; ++v) EXPECT_EQ(decode_value(encode_value(v)), v);
}

TEST(Instances, TableCriteria) {
  EXPECT_EQ(table_instance(FamilyId::COMPR).criteria.find("greater than or equal to 13") != std::string::npos, true);
  EXPECT_NE(table_instance(FamilyId::APPEND).criteria.find("append the sequence RBR to the end of the tape"),
            std::string::npos);
  EXPECT_NE(table_instance(FamilyId::EXACT).criteria.find("RBB"), std::string::npos);
}

TEST(Instances, SampleRanges) {
  std::set<std::string> criteria;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto has = sample_instance(FamilyId::HAS, Seed{s});
    EXPECT_GE(has.params.pattern.size(), 3u);
    EXPECT_LE(has.params.pattern.size(), 5u);
    EXPECT_TRUE(has.params.alphabet == "RB" || has.params.alphabet == "RBYG");
    for (char c : has.params.pattern) EXPECT_NE(has.params.alphabet.find(c), std::string::npos);
    criteria.insert(has.criteria);
    EXPECT_EQ(sample_instance(FamilyId::HAS, Seed{s}), has);
    const auto symm = sample_instance(FamilyId::SYMM, Seed{s});
    EXPECT_EQ(symm.params.alphabet, "RB");
  }
  EXPECT_GT(criteria.size(), 60u);
}

TEST(Instances, JsonRoundTrip) {
  for (auto f : kAllFamilies) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto inst = sample_instance(f, Seed{s});
      const nlohmann::json j = inst;
      EXPECT_EQ(j.get<ProblemInstance>(), inst) << j.dump();
    }
  }
}

TEST(Tests, ExactForcedCases) {
  const auto inst = make_instance(FamilyId::EXACT, pattern("RBB"));
  const auto tests = generate_tests(inst, 10, Seed{3});
  ASSERT_EQ(tests.size(), 10u);
  const TestCase empty{Tape(), Verdict::Reject};
  const TestCase rbb{Tape::parse("RBB"), Verdict::Accept};
  EXPECT_NE(std::find(tests.begin(), tests.end(), empty), tests.end());
  EXPECT_NE(std::find(tests.begin(), tests.end(), rbb), tests.end());
}

TEST(Tests, HasBalanceAndDeterminism) {
  const auto inst = make_instance(FamilyId::HAS, pattern("BRRR"));
  const auto tests = generate_tests(inst, 20, Seed{9});
  ASSERT_EQ(tests.size(), 20u);
  int acc = 0;
  for (const auto& t : tests) acc += std::get<Verdict>(t.expected) == Verdict::Accept;
  EXPECT_GE(acc, 8);
  EXPECT_GE(20 - acc, 8);
  EXPECT_EQ(generate_tests(inst, 20, Seed{9}), tests);
}

// Labels always agree with spec_eval, for every family and seed.
TEST(Tests, LabelsMatchOracle) {
  for (auto f : kAllFamilies) {
    for (std::uint64_t s = 0; s < 8; ++s) {
      const auto inst = sample_instance(f, Seed{s});
      const auto tests = generate_tests(inst, 16, Seed{s});
      ASSERT_EQ(tests.size(), 16u);
      EXPECT_EQ(tests.front().input, Tape());
      for (const auto& t : tests) EXPECT_EQ(spec_eval(inst, t.input), t.expected) << inst.criteria;
    }
  }
}

TEST(Tests, InfeasibleBalance) {
  const auto inst = make_instance(FamilyId::EXACT, pattern("RBBRBBRBBRBBRB"));
  EXPECT_THROW(generate_tests(inst, 10, Seed{1}), InfeasibleBalance);
}

TEST(Prompt, Render) {
  const auto has = make_instance(FamilyId::HAS, pattern("BRRR"));
  const std::string p = render_prompt(has);
  const std::string tail = "Accept if the tape contains the substring BRRR (must be consecutive)";
  ASSERT_GE(p.size(), tail.size());
  EXPECT_EQ(p.substr(p.size() - tail.size()), tail);
  EXPECT_EQ(render_prompt(has), p);
  EXPECT_EQ(p.find("{criteria}"), std::string::npos);
  EXPECT_EQ(p.find("{objective_clause}"), std::string::npos);
  const std::string t = render_prompt(make_instance(FamilyId::APPEND, pattern("RBR")));
  EXPECT_NE(t.find("append the sequence RBR to the end of the tape"), std::string::npos);
  EXPECT_NE(t.find("must equal the output tape"), std::string::npos);
}

}  // namespace
}  // namespace delta::mfa
