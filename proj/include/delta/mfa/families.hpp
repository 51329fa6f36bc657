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

#ifndef DELTA_MFA_FAMILIES_HPP
#define DELTA_MFA_FAMILIES_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "delta/common/rng.hpp"
#include "delta/mfa/tape.hpp"

namespace delta::mfa {

enum class FamilyId {
  APPEND, EXACT, START,          // Basic
  ENDS, REGEX, HAS, COMPR,       // Easy
  PREPEND, MUTATE, BIT_OP,       // Medium
  FDIV, SYMM, MINMAX, ADD,       // Hard
};

inline constexpr std::array<FamilyId, 14> kAllFamilies = {
    FamilyId::APPEND, FamilyId::EXACT,   FamilyId::START,  FamilyId::ENDS,   FamilyId::REGEX,
    FamilyId::HAS,    FamilyId::COMPR,   FamilyId::PREPEND, FamilyId::MUTATE, FamilyId::BIT_OP,
    FamilyId::FDIV,   FamilyId::SYMM,    FamilyId::MINMAX, FamilyId::ADD,
};

enum class Tier { Basic, Easy, Medium, Hard };
enum class TaskKind { Decision, Transformation };

std::string_view to_string(FamilyId family);
std::optional<FamilyId> family_from_string(std::string_view name);
std::string_view to_string(Tier tier);
Tier tier_of(FamilyId family);
TaskKind task_kind_of(FamilyId family);

enum class Comparator { GreaterEqual, Greater, LessEqual, Less };
enum class Extremum { Max, Min };

// One `(group)q` element of a REGEX template; q is '+', '*', '?' or 0.
struct RegexAtom {
  std::string group;
  char quantifier = 0;
  friend bool operator==(const RegexAtom&, const RegexAtom&) = default;
};

std::string render_regex(const std::vector<RegexAtom>& atoms);

// Family knobs. Only the fields a family uses are meaningful:
//   APPEND/EXACT/START/ENDS/HAS/PREPEND  pattern
//   MUTATE                               pattern -> replacement
//   REGEX                                regex
//   COMPR                                comparator, constant
//   BIT_OP (OR), FDIV (divisor), ADD     constant
//   MINMAX                               extremum, constant
//   SYMM                                 symm_offset (R{n}B{n+offset}, n >= 1)
struct Params {
  std::string alphabet = "RB";
  std::string pattern;
  std::string replacement;
  std::vector<RegexAtom> regex;
  Comparator comparator = Comparator::GreaterEqual;
  Extremum extremum = Extremum::Max;
  std::int64_t constant = 0;
  int symm_offset = 1;

  friend bool operator==(const Params&, const Params&) = default;
};

struct ProblemInstance {
  FamilyId family = FamilyId::APPEND;
  Params params;
  std::string criteria;
  TaskKind task_kind = TaskKind::Decision;
  std::string id;
  Seed seed;

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

enum class Verdict { Accept, Reject };

// Decision families expect a verdict, transformation families a tape.
using Expected = std::variant<Verdict, Tape>;

struct TestCase {
  Tape input;
  Expected expected;
  friend bool operator==(const TestCase&, const TestCase&) = default;
};

std::string to_string(const Expected& expected);

class AlphabetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InfeasibleBalance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary reading used by the numeric families: front = most significant bit,
// B = 1, R = 0, empty tape = 0. Encoding is minimal, with 0 written as "R".
std::uint64_t decode_value(const Tape& tape);
Tape encode_value(std::uint64_t value);

std::string criteria_text(FamilyId family, const Params& params);

// Builds an instance from explicit knobs (criteria, task kind and id derived).
ProblemInstance make_instance(FamilyId family, Params params, Seed seed = {});

// The criteria examples listed for each family in the benchmark's family table
// (APPEND RBR, EXACT RBB, START BR, ENDS BB, REGEX (RBR)+(B)?, HAS RYY, ...).
ProblemInstance table_instance(FamilyId family);

// Draws a family member; a pure function of (family, seed).
ProblemInstance sample_instance(FamilyId family, Seed seed);

// Ground truth for `input`. Throws AlphabetError on colors outside the
// instance alphabet.
Expected spec_eval(const ProblemInstance& instance, const Tape& input);

inline constexpr std::size_t kDefaultLengthCap = 12;

// Deterministic suite of `count` (>= 4) cases. Always contains the empty tape
// and, for decision instances, the shortest accepting tape; decision suites
// are at least 40% accept and 40% reject. Throws InfeasibleBalance when no
// accepting (or rejecting) tape exists within the length cap.
std::vector<TestCase> generate_tests(const ProblemInstance& instance, std::size_t count, Seed seed,
                                     std::size_t length_cap = kDefaultLengthCap);

// Full task prompt: the DSL description template with the objective clause
// and the instance criteria filled in.
std::string render_prompt(const ProblemInstance& instance);

void to_json(nlohmann::json& j, const ProblemInstance& instance);
void from_json(const nlohmann::json& j, ProblemInstance& instance);
void to_json(nlohmann::json& j, const TestCase& test);
void from_json(const nlohmann::json& j, TestCase& test);

}  // namespace delta::mfa

#endif  // DELTA_MFA_FAMILIES_HPP
