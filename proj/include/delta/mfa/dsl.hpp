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

#ifndef DELTA_MFA_DSL_HPP
#define DELTA_MFA_DSL_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "delta/mfa/tape.hpp"

namespace delta::mfa {

enum class NodeKind {
  Start,
  PullerRB,
  PullerYG,
  PainterRed,
  PainterBlue,
  PainterYellow,
  PainterGreen,
  End,
};

enum class Branch { Next, R, B, Y, G, Empty };

std::string_view keyword(NodeKind kind);
std::string_view label(Branch branch);

// Target literal for the implicit rejection route.
inline constexpr std::string_view kNoneTarget = "NONE";

struct Route {
  Branch branch;
  std::string target;  // node id or "NONE"
  int line = 0;

  friend bool operator==(const Route& a, const Route& b) {
    return a.branch == b.branch && a.target == b.target;
  }
};

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Start;
  // Declaration order is kept so duplicate labels survive to validation.
  std::vector<Route> routes;
  int line = 0;

  // Target for `branch`, or NONE when the branch is unspecified.
  std::string_view target(Branch branch) const;

  friend bool operator==(const Node& a, const Node& b) {
    return a.id == b.id && a.kind == b.kind && a.routes == b.routes;
  }
};

struct Program {
  std::vector<Node> nodes;  // source order
  std::string start_id;
  std::string end_id;

  // Index of the node with `id`, or nodes.size() if absent.
  std::size_t find(std::string_view id) const;

  friend bool operator==(const Program&, const Program&) = default;
};

enum class ParseErrorKind {
  MissingStart,
  MissingEnd,
  MultipleStart,
  MultipleEnd,
  DuplicateId,
  UnknownTarget,
  BadBranchLabel,
  SyntaxError,
};

std::string_view to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, int line, const std::string& message);
  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  ParseErrorKind kind_;
  int line_;
};

class ExtractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses DSL text. Comments (`#` to end of line) are stripped, unspecified
// puller branches read as NONE. Throws ParseError.
Program parse_program(std::string_view source);

// Canonical text; parse_program(print_program(p)) == p.
std::string print_program(const Program& program);

// Body of the last ```manufactoria fence, else of the last untagged fence.
// Throws ExtractError when the response holds no fenced block.
std::string extract_code_block(std::string_view response);

enum class Rule { MissingRoute, EndHasRoute, DuplicateBranch };

std::string_view to_string(Rule rule);

struct Diagnostic {
  std::string node_id;
  Rule rule;
  std::string message;

  friend bool operator==(const Diagnostic& a, const Diagnostic& b) {
    return a.node_id == b.node_id && a.rule == b.rule;
  }
};

// Structural checks that parsing leaves to a second pass. Empty iff valid.
std::vector<Diagnostic> validate_program(const Program& program);

struct RunLimits {
  std::size_t max_steps = 10'000;
  std::size_t max_tape_len = 1'000;
};

struct ReachedEnd {
  Tape final_tape;
  friend bool operator==(const ReachedEnd&, const ReachedEnd&) = default;
};
struct RejectedNoneRoute {
  std::string at_node;
  friend bool operator==(const RejectedNoneRoute&, const RejectedNoneRoute&) = default;
};
struct RejectedLoop {
  std::string at_node;
  friend bool operator==(const RejectedLoop&, const RejectedLoop&) = default;
};
struct RejectedBudget {
  bool tape_overflow = false;  // false: step budget ran out
  friend bool operator==(const RejectedBudget&, const RejectedBudget&) = default;
};

using Outcome = std::variant<ReachedEnd, RejectedNoneRoute, RejectedLoop, RejectedBudget>;

struct RunResult {
  Outcome outcome;
  std::size_t steps_taken = 0;

  bool reached_end() const { return std::holds_alternative<ReachedEnd>(outcome); }
  friend bool operator==(const RunResult&, const RunResult&) = default;
};

// Short tag ("end", "none_route", "loop", "budget") and a human description.
std::string_view outcome_tag(const Outcome& outcome);
std::string describe(const RunResult& result);

// One machine transition, as recorded by trace_machine.
struct Step {
  std::string node_id;
  std::string tape_before;
};

// Executes `program` on `input`. Deterministic; every call terminates within
// limits. A repeated (node, tape) configuration is reported as RejectedLoop.
// Throws std::invalid_argument for zero limits or an unresolvable start node.
RunResult run_machine(const Program& program, const Tape& input, const RunLimits& limits = {});

// Same as run_machine but also returns the visited configurations in order.
RunResult trace_machine(const Program& program, const Tape& input, const RunLimits& limits,
                        std::vector<Step>& steps);

}  // namespace delta::mfa

#endif  // DELTA_MFA_DSL_HPP
