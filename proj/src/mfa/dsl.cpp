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

#include "delta/mfa/dsl.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <unordered_set>

namespace delta::mfa {
namespace {

constexpr std::array<std::pair<std::string_view, NodeKind>, 8> kKeywords = {{
    {"START", NodeKind::Start},
    {"PULLER_RB", NodeKind::PullerRB},
    {"PULLER_YG", NodeKind::PullerYG},
    {"PAINTER_RED", NodeKind::PainterRed},
    {"PAINTER_BLUE", NodeKind::PainterBlue},
    {"PAINTER_YELLOW", NodeKind::PainterYellow},
    {"PAINTER_GREEN", NodeKind::PainterGreen},
    {"END", NodeKind::End},
}};

constexpr std::array<std::pair<std::string_view, Branch>, 5> kBracketLabels = {{
    {"R", Branch::R},
    {"B", Branch::B},
    {"Y", Branch::Y},
    {"G", Branch::G},
    {"EMPTY", Branch::Empty},
}};

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

// Splits on blanks; the DSL never needs quoting.
std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool branch_allowed(NodeKind kind, Branch branch) {
  switch (kind) {
    case NodeKind::Start:
    case NodeKind::PainterRed:
    case NodeKind::PainterBlue:
    case NodeKind::PainterYellow:
    case NodeKind::PainterGreen:
      return branch == Branch::Next;
    case NodeKind::PullerRB:
      return branch == Branch::R || branch == Branch::B || branch == Branch::Empty;
    case NodeKind::PullerYG:
      return branch == Branch::Y || branch == Branch::G || branch == Branch::Empty;
    case NodeKind::End:
      return true;  // rejected later by validate_program (EndHasRoute)
  }
  return false;
}

[[noreturn]] void fail(ParseErrorKind kind, int line, const std::string& what) {
  throw ParseError(kind, line, what);
}

}  // namespace

std::string_view keyword(NodeKind kind) {
  for (const auto& [word, k] : kKeywords)
    if (k == kind) return word;
  return "?";
}

std::string_view label(Branch branch) {
  switch (branch) {
    case Branch::Next: return "NEXT";
    case Branch::R: return "R";
    case Branch::B: return "B";
    case Branch::Y: return "Y";
    case Branch::G: return "G";
    case Branch::Empty: return "EMPTY";
  }
  return "?";
}

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::MissingStart: return "MissingStart";
    case ParseErrorKind::MissingEnd: return "MissingEnd";
    case ParseErrorKind::MultipleStart: return "MultipleStart";
    case ParseErrorKind::MultipleEnd: return "MultipleEnd";
    case ParseErrorKind::DuplicateId: return "DuplicateId";
    case ParseErrorKind::UnknownTarget: return "UnknownTarget";
    case ParseErrorKind::BadBranchLabel: return "BadBranchLabel";
    case ParseErrorKind::SyntaxError: return "SyntaxError";
  }
  return "?";
}

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::MissingRoute: return "MissingRoute";
    case Rule::EndHasRoute: return "EndHasRoute";
    case Rule::DuplicateBranch: return "DuplicateBranch";
  }
  return "?";
}

ParseError::ParseError(ParseErrorKind kind, int line, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " (line " + std::to_string(line) +
                         "): " + message),
      kind_(kind),
      line_(line) {}

std::string_view Node::target(Branch branch) const {
  for (const auto& r : routes)
    if (r.branch == branch) return r.target;
  return kNoneTarget;
}

std::size_t Program::find(std::string_view id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return i;
  return nodes.size();
}

Program parse_program(std::string_view source) {
  Program program;
  Node* current = nullptr;
  int start_line = 0;
  int end_line = 0;
  std::unordered_set<std::string> ids;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    std::size_t eol = source.find('\n', pos);
    if (eol == std::string_view::npos) eol = source.size();
    std::string_view line = source.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto toks = tokens(line);
    const std::string_view head = toks.front();

    // Route line: `NEXT <id>` or `[LABEL] <id>`.
    if (head == "NEXT" || head.front() == '[') {
      if (current == nullptr) fail(ParseErrorKind::SyntaxError, line_no, "route outside of a node");
      Branch branch = Branch::Next;
      if (head.front() == '[') {
        if (head.back() != ']') fail(ParseErrorKind::SyntaxError, line_no, "unterminated branch label");
        const auto name = head.substr(1, head.size() - 2);
        bool known = false;
        for (const auto& [text, b] : kBracketLabels) {
          if (text == name) {
            branch = b;
            known = true;
          }
        }
        if (!known)
          fail(ParseErrorKind::BadBranchLabel, line_no, "unknown branch label [" + std::string(name) + "]");
      }
      if (toks.size() != 2)
        fail(ParseErrorKind::SyntaxError, line_no, "expected exactly one target after " + std::string(head));
      if (!is_identifier(toks[1]))
        fail(ParseErrorKind::SyntaxError, line_no, "bad target '" + std::string(toks[1]) + "'");
      if (!branch_allowed(current->kind, branch))
        fail(ParseErrorKind::BadBranchLabel, line_no,
             std::string(label(branch)) + " is not a branch of " + std::string(keyword(current->kind)));
      current->routes.push_back(Route{branch, std::string(toks[1]), line_no});
      continue;
    }

    // Node header: `KEYWORD <id>:` (colon optional for END).
    const NodeKind* kind = nullptr;
    for (const auto& entry : kKeywords)
      if (entry.first == head) kind = &entry.second;
    if (kind == nullptr)
      fail(ParseErrorKind::SyntaxError, line_no, "expected a node directive, got '" + std::string(line) + "'");

    std::string_view rest = trim(line.substr(head.size()));
    const bool has_colon = !rest.empty() && rest.back() == ':';
    if (has_colon) rest = trim(rest.substr(0, rest.size() - 1));
    if (!has_colon && *kind != NodeKind::End)
      fail(ParseErrorKind::SyntaxError, line_no, "missing ':' after node id");
    if (!is_identifier(rest))
      fail(ParseErrorKind::SyntaxError, line_no, "bad node id '" + std::string(rest) + "'");
    if (rest == kNoneTarget) fail(ParseErrorKind::SyntaxError, line_no, "NONE is reserved");
    if (!ids.insert(std::string(rest)).second)
      fail(ParseErrorKind::DuplicateId, line_no, "node id '" + std::string(rest) + "' declared twice");

    if (*kind == NodeKind::Start) {
      if (!program.start_id.empty())
        fail(ParseErrorKind::MultipleStart, line_no, "second START (first on line " + std::to_string(start_line) + ")");
      program.start_id = std::string(rest);
      start_line = line_no;
    } else if (*kind == NodeKind::End) {
      if (!program.end_id.empty())
        fail(ParseErrorKind::MultipleEnd, line_no, "second END (first on line " + std::to_string(end_line) + ")");
      program.end_id = std::string(rest);
      end_line = line_no;
    }
    program.nodes.push_back(Node{std::string(rest), *kind, {}, line_no});
    current = &program.nodes.back();
  }

  if (program.start_id.empty()) fail(ParseErrorKind::MissingStart, line_no, "no START directive");
  if (program.end_id.empty()) fail(ParseErrorKind::MissingEnd, line_no, "no END directive");

  for (const auto& node : program.nodes) {
    for (const auto& r : node.routes) {
      if (r.target != kNoneTarget && !ids.contains(r.target))
        fail(ParseErrorKind::UnknownTarget, r.line, "route to undeclared node '" + r.target + "'");
    }
  }
  return program;
}

std::string print_program(const Program& program) {
  std::ostringstream out;
  bool first = true;
  for (const auto& node : program.nodes) {
    if (!first) out << '\n';
    first = false;
    out << keyword(node.kind) << ' ' << node.id;
    if (node.kind != NodeKind::End || !node.routes.empty()) out << ':';
    out << '\n';
    for (const auto& r : node.routes) {
      out << "    ";
      if (r.branch == Branch::Next)
        out << "NEXT";
      else
        out << '[' << label(r.branch) << ']';
      out << ' ' << r.target << '\n';
    }
  }
  return out.str();
}

std::string extract_code_block(std::string_view response) {
  struct Block {
    std::string tag;
    std::string body;
  };
  std::vector<Block> blocks;
  std::optional<Block> open;

  std::size_t pos = 0;
  while (pos <= response.size()) {
    std::size_t eol = response.find('\n', pos);
    if (eol == std::string_view::npos) eol = response.size();
    const std::string_view raw = response.substr(pos, eol - pos);
    pos = eol + 1;
    const std::string_view line = trim(raw);
    if (line.starts_with("```")) {
      if (open) {
        if (trim(line.substr(3)).empty()) {
          blocks.push_back(std::move(*open));
          open.reset();
          continue;
        }
      } else {
        open = Block{std::string(trim(line.substr(3))), {}};
        continue;
      }
    }
    if (open) {
      open->body.append(raw);
      open->body.push_back('\n');
    }
  }

  const Block* tagged = nullptr;
  const Block* untagged = nullptr;
  for (const auto& b : blocks) {
    if (b.tag == "manufactoria") tagged = &b;
    if (b.tag.empty()) untagged = &b;
  }
  if (tagged) return tagged->body;
  if (untagged) return untagged->body;
  throw ExtractError("NoCodeBlock: response contains no manufactoria or untagged fenced block");
}

std::vector<Diagnostic> validate_program(const Program& program) {
  std::vector<Diagnostic> out;
  for (const auto& node : program.nodes) {
    if (node.kind == NodeKind::End) {
      if (!node.routes.empty())
        out.push_back({node.id, Rule::EndHasRoute, "END node declares outgoing routes"});
      continue;
    }
    const bool needs_next = node.kind != NodeKind::PullerRB && node.kind != NodeKind::PullerYG;
    bool has_next = false;
    std::array<int, 6> seen{};
    for (const auto& r : node.routes) {
      if (r.branch == Branch::Next) has_next = true;
      if (++seen[static_cast<std::size_t>(r.branch)] == 2)
        out.push_back({node.id, Rule::DuplicateBranch,
                       "branch " + std::string(label(r.branch)) + " declared more than once"});
    }
    if (needs_next && !has_next)
      out.push_back({node.id, Rule::MissingRoute, std::string(keyword(node.kind)) + " node lacks NEXT"});
  }
  return out;
}

std::string_view outcome_tag(const Outcome& outcome) {
  switch (outcome.index()) {
    case 0: return "end";
    case 1: return "none_route";
    case 2: return "loop";
    default: return "budget";
  }
}

std::string describe(const RunResult& result) {
  std::ostringstream out;
  if (const auto* e = std::get_if<ReachedEnd>(&result.outcome)) {
    out << "reached END with tape \"" << e->final_tape.str() << "\"";
  } else if (const auto* n = std::get_if<RejectedNoneRoute>(&result.outcome)) {
    out << "rejected: routed to NONE from node " << n->at_node;
  } else if (const auto* l = std::get_if<RejectedLoop>(&result.outcome)) {
    out << "rejected: infinite loop detected at node " << l->at_node;
  } else {
    const auto& b = std::get<RejectedBudget>(result.outcome);
    out << (b.tape_overflow ? "rejected: tape length limit exceeded" : "rejected: step budget exhausted");
  }
  out << " after " << result.steps_taken << " steps";
  return out.str();
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Compiled {
  std::vector<std::array<std::size_t, 6>> next;
  std::size_t start = 0;
};

Compiled compile(const Program& program) {
  Compiled c;
  c.next.resize(program.nodes.size());
  for (std::size_t i = 0; i < program.nodes.size(); ++i) {
    c.next[i].fill(kNone);
    const auto& node = program.nodes[i];
    for (int b = 0; b < 6; ++b) {
      const auto t = node.target(static_cast<Branch>(b));
      if (t == kNoneTarget) continue;
      const auto idx = program.find(t);
      if (idx == program.nodes.size())
        throw std::invalid_argument("route to undeclared node '" + std::string(t) + "'");
      c.next[i][static_cast<std::size_t>(b)] = idx;
    }
  }
  c.start = program.find(program.start_id);
  if (c.start == program.nodes.size()) throw std::invalid_argument("program has no start node");
  return c;
}

RunResult run_impl(const Program& program, const Tape& input, const RunLimits& limits,
                   std::vector<Step>* trace) {
  if (limits.max_steps == 0 || limits.max_tape_len == 0)
    throw std::invalid_argument("run limits must be strictly positive");
  const Compiled c = compile(program);

  Tape tape = input;
  std::size_t at = c.start;
  std::size_t steps = 0;
  std::unordered_set<std::string> seen;
  std::string key;

  while (true) {
    const Node& node = program.nodes[at];
    if (node.kind == NodeKind::End) return {ReachedEnd{tape}, steps};

    key.assign(reinterpret_cast<const char*>(&at), sizeof at);
    key += tape.str();
    if (!seen.insert(key).second) return {RejectedLoop{node.id}, steps};
    if (steps == limits.max_steps) return {RejectedBudget{false}, steps};
    if (trace) trace->push_back({node.id, tape.str()});

    Branch branch = Branch::Next;
    switch (node.kind) {
      case NodeKind::PainterRed: tape.push_back(Color::R); break;
      case NodeKind::PainterBlue: tape.push_back(Color::B); break;
      case NodeKind::PainterYellow: tape.push_back(Color::Y); break;
      case NodeKind::PainterGreen: tape.push_back(Color::G); break;
      case NodeKind::PullerRB:
      case NodeKind::PullerYG: {
        const Color a = node.kind == NodeKind::PullerRB ? Color::R : Color::Y;
        const Color b = node.kind == NodeKind::PullerRB ? Color::B : Color::G;
        branch = Branch::Empty;
        if (!tape.empty() && (tape.front() == a || tape.front() == b)) {
          branch = tape.front() == a ? (a == Color::R ? Branch::R : Branch::Y)
                                     : (b == Color::B ? Branch::B : Branch::G);
          tape.pop_front();
        }
        break;
      }
      default: break;
    }
    ++steps;
    if (tape.size() > limits.max_tape_len) return {RejectedBudget{true}, steps};

    const std::size_t next = c.next[at][static_cast<std::size_t>(branch)];
    if (next == kNone) return {RejectedNoneRoute{node.id}, steps};
    at = next;
  }
}

}  // namespace

RunResult run_machine(const Program& program, const Tape& input, const RunLimits& limits) {
  return run_impl(program, input, limits, nullptr);
}

RunResult trace_machine(const Program& program, const Tape& input, const RunLimits& limits,
                        std::vector<Step>& steps) {
  steps.clear();
  return run_impl(program, input, limits, &steps);
}

}  // namespace delta::mfa
