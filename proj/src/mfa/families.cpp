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

#include "delta/mfa/families.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

namespace delta::mfa {
namespace {

#include "prompt_template.inc"

constexpr std::array<std::string_view, 14> kFamilyNames = {
    "APPEND", "EXACT", "START",  "ENDS", "REGEX", "HAS",    "COMPR",
    "PREPEND", "MUTATE", "BIT_OP", "FDIV", "SYMM",  "MINMAX", "ADD",
};

// Numeric knobs move by these deltas: +-1, +-2 and powers of two.
constexpr std::array<std::int64_t, 10> kJitter = {-16, -8, -4, -2, -1, 1, 2, 4, 8, 16};

bool is_numeric(FamilyId f) {
  return f == FamilyId::COMPR || f == FamilyId::BIT_OP || f == FamilyId::FDIV ||
         f == FamilyId::MINMAX || f == FamilyId::ADD;
}

std::string random_string(Rng& rng, std::string_view alphabet, std::size_t len) {
  std::string s;
  for (std::size_t i = 0; i < len; ++i)
    s.push_back(alphabet[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(alphabet.size()) - 1))]);
  return s;
}

std::int64_t jitter(Rng& rng, std::int64_t base, std::int64_t lo, std::int64_t hi) {
  std::int64_t v = base;
  const auto rounds = rng.uniform_int(1, 2);
  for (std::int64_t r = 0; r < rounds; ++r) {
    for (int attempt = 0; attempt < 32; ++attempt) {
      const std::int64_t candidate = v + kJitter[static_cast<std::size_t>(rng.uniform_int(0, kJitter.size() - 1))];
      if (candidate >= lo && candidate <= hi) {
        v = candidate;
        break;
      }
    }
  }
  return v;
}

// --- bit-string arithmetic (MSB first, '1'/'0'), exact for any length -------

std::string to_bits(const Tape& tape) {
  std::string bits;
  bits.reserve(tape.size());
  for (char c : tape.str()) bits.push_back(c == 'B' ? '1' : '0');
  const auto first = bits.find('1');
  return first == std::string::npos ? std::string("0") : bits.substr(first);
}

std::string bits_of(std::uint64_t v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back((v & 1U) ? '1' : '0');
    v >>= 1;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

int compare_bits(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return a < b ? -1 : (a == b ? 0 : 1);
}

std::string add_bits(const std::string& a, const std::string& b) {
  std::string out;
  int carry = 0;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()) || carry; ++i) {
    int s = carry;
    if (i < a.size()) s += a[a.size() - 1 - i] - '0';
    if (i < b.size()) s += b[b.size() - 1 - i] - '0';
    out.push_back(static_cast<char>('0' + (s & 1)));
    carry = s >> 1;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string or_bits(const std::string& a, const std::string& b) {
  const std::size_t n = std::max(a.size(), b.size());
  const std::string pa = std::string(n - a.size(), '0') + a;
  const std::string pb = std::string(n - b.size(), '0') + b;
  std::string out(n, '0');
  for (std::size_t i = 0; i < n; ++i) out[i] = (pa[i] == '1' || pb[i] == '1') ? '1' : '0';
  return out;
}

std::string div_bits(const std::string& a, std::uint64_t d) {
  std::string q;
  std::uint64_t rem = 0;
  for (char c : a) {
    rem = (rem << 1) | static_cast<std::uint64_t>(c - '0');
    q.push_back(rem >= d ? '1' : '0');
    if (rem >= d) rem -= d;
  }
  const auto first = q.find('1');
  return first == std::string::npos ? std::string("0") : q.substr(first);
}

Tape tape_of_bits(const std::string& bits) {
  std::string t;
  for (char c : bits) t.push_back(c == '1' ? 'B' : 'R');
  return Tape::parse(t);
}

// --- REGEX template matching -------------------------------------------------

bool regex_matches(const std::vector<RegexAtom>& atoms, std::string_view s) {
  std::set<std::size_t> at = {0};
  for (const auto& atom : atoms) {
    const std::size_t g = atom.group.size();
    std::set<std::size_t> next;
    for (std::size_t p : at) {
      const bool may_skip = atom.quantifier == '*' || atom.quantifier == '?';
      const bool may_repeat = atom.quantifier == '*' || atom.quantifier == '+';
      if (may_skip) next.insert(p);
      std::size_t q = p;
      while (q + g <= s.size() && s.compare(q, g, atom.group) == 0) {
        q += g;
        next.insert(q);
        if (!may_repeat) break;
      }
    }
    at = std::move(next);
    if (at.empty()) return false;
  }
  return at.contains(s.size());
}

std::string expand_regex(Rng& rng, const std::vector<RegexAtom>& atoms) {
  std::string out;
  for (const auto& atom : atoms) {
    std::int64_t reps = 1;
    switch (atom.quantifier) {
      case '+': reps = rng.uniform_int(1, 3); break;
      case '*': reps = rng.uniform_int(0, 3); break;
      case '?': reps = rng.uniform_int(0, 1); break;
      default: break;
    }
    for (std::int64_t i = 0; i < reps; ++i) out += atom.group;
  }
  return out;
}

std::string comparator_text(Comparator c) {
  switch (c) {
    case Comparator::GreaterEqual: return "greater than or equal to";
    case Comparator::Greater: return "greater than";
    case Comparator::LessEqual: return "less than or equal to";
    case Comparator::Less: return "less than";
  }
  return "?";
}

std::string comparator_key(Comparator c) {
  switch (c) {
    case Comparator::GreaterEqual: return ">=";
    case Comparator::Greater: return ">";
    case Comparator::LessEqual: return "<=";
    case Comparator::Less: return "<";
  }
  return "?";
}

Comparator comparator_from_key(const std::string& key) {
  if (key == ">") return Comparator::Greater;
  if (key == "<=") return Comparator::LessEqual;
  if (key == "<") return Comparator::Less;
  if (key == ">=") return Comparator::GreaterEqual;
  throw std::invalid_argument("unknown comparator '" + key + "'");
}

std::string hex_id(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string_view to_string(FamilyId family) { return kFamilyNames[static_cast<std::size_t>(family)]; }

std::optional<FamilyId> family_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kFamilyNames.size(); ++i)
    if (kFamilyNames[i] == name) return static_cast<FamilyId>(i);
  return std::nullopt;
}

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::Basic: return "BASIC";
    case Tier::Easy: return "EASY";
    case Tier::Medium: return "MEDIUM";
    case Tier::Hard: return "HARD";
  }
  return "?";
}

Tier tier_of(FamilyId family) {
  switch (family) {
    case FamilyId::APPEND: case FamilyId::EXACT: case FamilyId::START: return Tier::Basic;
    case FamilyId::ENDS: case FamilyId::REGEX: case FamilyId::HAS: case FamilyId::COMPR: return Tier::Easy;
    case FamilyId::PREPEND: case FamilyId::MUTATE: case FamilyId::BIT_OP: return Tier::Medium;
    default: return Tier::Hard;
  }
}

TaskKind task_kind_of(FamilyId family) {
  switch (family) {
    case FamilyId::APPEND: case FamilyId::PREPEND: case FamilyId::MUTATE: case FamilyId::BIT_OP:
    case FamilyId::FDIV: case FamilyId::MINMAX: case FamilyId::ADD:
      return TaskKind::Transformation;
    default:
      return TaskKind::Decision;
  }
}

std::string render_regex(const std::vector<RegexAtom>& atoms) {
  std::string out;
  for (const auto& a : atoms) {
    out += "(" + a.group + ")";
    if (a.quantifier) out.push_back(a.quantifier);
  }
  return out;
}

std::string to_string(const Expected& expected) {
  if (const auto* v = std::get_if<Verdict>(&expected)) return *v == Verdict::Accept ? "accept" : "reject";
  return "tape \"" + std::get<Tape>(expected).str() + "\"";
}

std::uint64_t decode_value(const Tape& tape) {
  const std::string bits = to_bits(tape);
  if (bits.size() > 64) throw std::out_of_range("tape value exceeds 64 bits");
  std::uint64_t v = 0;
  for (char c : bits) v = (v << 1) | static_cast<std::uint64_t>(c - '0');
  return v;
}

Tape encode_value(std::uint64_t value) { return tape_of_bits(bits_of(value)); }

std::string criteria_text(FamilyId family, const Params& p) {
  const std::string binary = "Treat Blue as 1 and Red as 0. ";
  switch (family) {
    case FamilyId::APPEND:
      return "Accept any input and append the sequence " + p.pattern + " to the end of the tape.";
    case FamilyId::EXACT: return "Accept if the tape is exactly " + p.pattern + ".";
    case FamilyId::START: return "Accept if the tape starts with " + p.pattern + ".";
    case FamilyId::ENDS: return "Accept if the tape ends with " + p.pattern + ".";
    case FamilyId::REGEX:
      return "Accept if the tape matches the regex pattern " + render_regex(p.regex) + " exactly.";
    case FamilyId::HAS:
      return "Accept if the tape contains the substring " + p.pattern + " (must be consecutive)";
    case FamilyId::COMPR:
      return binary + "Accept if the binary number is " + comparator_text(p.comparator) + " " +
             std::to_string(p.constant) + ".";
    case FamilyId::PREPEND: return "Put " + p.pattern + " at the beginning of the tape.";
    case FamilyId::MUTATE: return "Change all " + p.pattern + " to " + p.replacement + " sequentially.";
    case FamilyId::BIT_OP:
      return binary + "Apply bitwise OR with " + std::to_string(p.constant) + " to the binary number.";
    case FamilyId::FDIV:
      return binary + "Apply floor division by " + std::to_string(p.constant) + " to the binary number.";
    case FamilyId::SYMM: {
      const std::string tail = p.symm_offset == 0 ? "n" : "n+" + std::to_string(p.symm_offset);
      return "Accept strings that match the pattern R{n}B{" + tail + "} for any n >= 1.";
    }
    case FamilyId::MINMAX:
      return binary + "Output the " + (p.extremum == Extremum::Max ? "maximum" : "minimum") + " of " +
             std::to_string(p.constant) + " and input.";
    case FamilyId::ADD:
      return binary + "Apply add " + std::to_string(p.constant) + " to the binary number.";
  }
  return {};
}

ProblemInstance make_instance(FamilyId family, Params params, Seed seed) {
  ProblemInstance inst;
  inst.family = family;
  if (is_numeric(family) || family == FamilyId::SYMM) params.alphabet = "RB";
  inst.params = std::move(params);
  inst.criteria = criteria_text(family, inst.params);
  inst.task_kind = task_kind_of(family);
  inst.seed = seed;
  inst.id = "mfa-" + std::string(to_string(family)) + "-" + hex_id(mix64(seed.value ^ static_cast<std::uint64_t>(family)));
  return inst;
}

ProblemInstance table_instance(FamilyId family) {
  Params p;
  switch (family) {
    case FamilyId::APPEND: p.pattern = "RBR"; break;
    case FamilyId::EXACT: p.pattern = "RBB"; break;
    case FamilyId::START: p.pattern = "BR"; break;
    case FamilyId::ENDS: p.pattern = "BB"; break;
    case FamilyId::REGEX: p.regex = {{"RBR", '+'}, {"B", '?'}}; break;
    case FamilyId::HAS: p.pattern = "RYY"; p.alphabet = "RBYG"; break;
    case FamilyId::COMPR: p.comparator = Comparator::GreaterEqual; p.constant = 13; break;
    case FamilyId::PREPEND: p.pattern = "BR"; break;
    case FamilyId::MUTATE: p.pattern = "RB"; p.replacement = "BR"; break;
    case FamilyId::BIT_OP: p.constant = 16; break;
    case FamilyId::FDIV: p.constant = 4; break;
    case FamilyId::SYMM: p.symm_offset = 1; break;
    case FamilyId::MINMAX: p.extremum = Extremum::Max; p.constant = 11; break;
    case FamilyId::ADD: p.constant = 8; break;
  }
  return make_instance(family, std::move(p));
}

ProblemInstance sample_instance(FamilyId family, Seed seed) {
  Rng rng(derive(seed, static_cast<std::uint64_t>(family)));
  Params p;
  const auto pattern = [&](std::int64_t lo, std::int64_t hi) {
    return random_string(rng, p.alphabet, static_cast<std::size_t>(rng.uniform_int(lo, hi)));
  };
  switch (family) {
    case FamilyId::APPEND: p.pattern = pattern(2, 4); break;
    case FamilyId::EXACT: p.pattern = pattern(2, 5); break;
    case FamilyId::START: p.pattern = pattern(2, 3); break;
    case FamilyId::ENDS: p.pattern = pattern(2, 3); break;
    case FamilyId::PREPEND: p.pattern = pattern(2, 3); break;
    case FamilyId::HAS:
      if (rng.bernoulli(0.3)) p.alphabet = "RBYG";
      p.pattern = pattern(3, 5);
      break;
    case FamilyId::REGEX: {
      // At least one repeating atom, and not a lone one-color atom.
      static constexpr std::array<char, 4> kQuant = {'+', '*', '?', 0};
      while (true) {
        p.regex.clear();
        const auto n_atoms = rng.uniform_int(1, 3);
        for (std::int64_t i = 0; i < n_atoms; ++i)
          p.regex.push_back({pattern(1, 3), kQuant[static_cast<std::size_t>(rng.uniform_int(0, 3))]});
        const bool repeats = std::any_of(p.regex.begin(), p.regex.end(),
                                         [](const RegexAtom& a) { return a.quantifier == '+' || a.quantifier == '*'; });
        const bool single_char_star = p.regex.size() == 1 && p.regex[0].group.size() == 1;
        if (repeats && !single_char_star) break;
      }
      break;
    }
    case FamilyId::COMPR: {
      static constexpr std::array<Comparator, 4> kCmp = {Comparator::GreaterEqual, Comparator::Greater,
                                                         Comparator::LessEqual, Comparator::Less};
      p.comparator = kCmp[static_cast<std::size_t>(rng.uniform_int(0, 3))];
      p.constant = jitter(rng, 13, 2, 250);
      break;
    }
    case FamilyId::MUTATE: {
      static const std::vector<std::string> kPairs = {"RB", "BR", "RR", "BB"};
      p.pattern = rng.pick(kPairs);
      do {
        p.replacement = rng.pick(kPairs);
      } while (p.replacement == p.pattern);
      break;
    }
    case FamilyId::BIT_OP: p.constant = jitter(rng, 16, 1, 255); break;
    case FamilyId::FDIV: p.constant = jitter(rng, 4, 2, 16); break;
    case FamilyId::SYMM: p.symm_offset = static_cast<int>(jitter(rng, 1, 0, 2)); break;
    case FamilyId::MINMAX:
      p.extremum = rng.bernoulli(0.5) ? Extremum::Max : Extremum::Min;
      p.constant = jitter(rng, 11, 1, 255);
      break;
    case FamilyId::ADD: p.constant = jitter(rng, 8, 1, 255); break;
  }
  return make_instance(family, std::move(p), seed);
}

Expected spec_eval(const ProblemInstance& instance, const Tape& input) {
  const auto& p = instance.params;
  const std::string& s = input.str();
  if (s.find_first_not_of(p.alphabet) != std::string::npos)
    throw AlphabetError("tape \"" + s + "\" uses colors outside alphabet " + p.alphabet);

  const auto verdict = [](bool ok) -> Expected { return ok ? Verdict::Accept : Verdict::Reject; };
  switch (instance.family) {
    case FamilyId::APPEND: return Tape::parse(s + p.pattern);
    case FamilyId::PREPEND: return Tape::parse(p.pattern + s);
    case FamilyId::EXACT: return verdict(s == p.pattern);
    case FamilyId::START: return verdict(s.starts_with(p.pattern));
    case FamilyId::ENDS: return verdict(s.ends_with(p.pattern));
    case FamilyId::HAS: return verdict(s.find(p.pattern) != std::string::npos);
    case FamilyId::REGEX: return verdict(regex_matches(p.regex, s));
    case FamilyId::MUTATE: {
      std::string out;
      std::size_t i = 0;
      while (i < s.size()) {
        if (!p.pattern.empty() && s.compare(i, p.pattern.size(), p.pattern) == 0) {
          out += p.replacement;
          i += p.pattern.size();
        } else {
          out.push_back(s[i++]);
        }
      }
      return Tape::parse(out);
    }
    case FamilyId::SYMM: {
      const auto r = s.find_first_not_of('R');
      const std::size_t n = r == std::string::npos ? s.size() : r;
      const std::size_t tail = s.size() - n;
      const bool all_b = s.find_first_not_of('B', n) == std::string::npos;
      return verdict(n >= 1 && all_b && tail == n + static_cast<std::size_t>(p.symm_offset));
    }
    case FamilyId::COMPR: {
      const int c = compare_bits(to_bits(input), bits_of(static_cast<std::uint64_t>(p.constant)));
      switch (p.comparator) {
        case Comparator::GreaterEqual: return verdict(c >= 0);
        case Comparator::Greater: return verdict(c > 0);
        case Comparator::LessEqual: return verdict(c <= 0);
        case Comparator::Less: return verdict(c < 0);
      }
      break;
    }
    case FamilyId::BIT_OP:
      return tape_of_bits(or_bits(to_bits(input), bits_of(static_cast<std::uint64_t>(p.constant))));
    case FamilyId::ADD:
      return tape_of_bits(add_bits(to_bits(input), bits_of(static_cast<std::uint64_t>(p.constant))));
    case FamilyId::FDIV:
      return tape_of_bits(div_bits(to_bits(input), static_cast<std::uint64_t>(p.constant)));
    case FamilyId::MINMAX: {
      const std::string v = to_bits(input);
      const std::string k = bits_of(static_cast<std::uint64_t>(p.constant));
      const bool input_larger = compare_bits(v, k) > 0;
      const bool take_input = p.extremum == Extremum::Max ? input_larger : !input_larger;
      return tape_of_bits(take_input ? v : k);
    }
  }
  throw std::logic_error("unhandled family");
}

namespace {

// Candidate accepting tapes built from the family's structure; labels are
// still assigned by spec_eval, so a wrong proposal only wastes a draw.
std::string propose_accepting(const ProblemInstance& inst, Rng& rng, std::size_t cap) {
  const auto& p = inst.params;
  const auto filler = [&](std::size_t room) {
    return random_string(rng, p.alphabet, static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(room))));
  };
  const std::size_t room = cap > p.pattern.size() ? cap - p.pattern.size() : 0;
  switch (inst.family) {
    case FamilyId::EXACT: return p.pattern;
    case FamilyId::START: return p.pattern + filler(room);
    case FamilyId::ENDS: return filler(room) + p.pattern;
    case FamilyId::HAS: {
      const std::string left = filler(room);
      return left + p.pattern + filler(room - left.size());
    }
    case FamilyId::REGEX: return expand_regex(rng, p.regex);
    case FamilyId::SYMM: {
      const auto off = static_cast<std::size_t>(p.symm_offset);
      const std::size_t max_n = cap > off ? (cap - off) / 2 : 0;
      if (max_n < 1) return "R";
      const auto n = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_n)));
      return std::string(n, 'R') + std::string(n + off, 'B');
    }
    default: return random_string(rng, p.alphabet, static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(cap))));
  }
}

// Picks `want` tapes from `pool`, spreading the choices over lengths.
// Falls back to repeats once every distinct tape has been used.
void pick_stratified(Rng& rng, const std::map<std::size_t, std::vector<std::string>>& pool,
                     std::size_t want, std::set<std::string>& used, std::vector<std::string>& out) {
  std::vector<std::size_t> lengths;
  for (const auto& [len, items] : pool) lengths.push_back(len);
  if (lengths.empty()) return;
  std::size_t taken = 0;
  std::size_t turn = 0;
  std::size_t misses = 0;
  while (taken < want) {
    if (turn % lengths.size() == 0) rng.shuffle(lengths);
    const auto& bucket = pool.at(lengths[turn % lengths.size()]);
    ++turn;
    std::vector<const std::string*> fresh;
    for (const auto& s : bucket)
      if (!used.contains(s)) fresh.push_back(&s);
    if (fresh.empty()) {
      if (++misses < lengths.size()) continue;
      // Every bucket exhausted: allow repeats.
      const std::string& s = bucket[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(bucket.size()) - 1))];
      out.push_back(s);
      ++taken;
      continue;
    }
    misses = 0;
    const std::string& s = *fresh[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(fresh.size()) - 1))];
    used.insert(s);
    out.push_back(s);
    ++taken;
  }
}

// Largest length whose full enumeration stays below ~20k tapes.
std::size_t enumerable_length(std::size_t alphabet_size, std::size_t cap) {
  std::size_t total = 1, level = 1, len = 0;
  while (len < cap) {
    level *= alphabet_size;
    if (total + level > 20'000) break;
    total += level;
    ++len;
  }
  return len;
}

}  // namespace

std::vector<TestCase> generate_tests(const ProblemInstance& instance, std::size_t count, Seed seed,
                                     std::size_t length_cap) {
  if (count < 4) throw std::invalid_argument("generate_tests needs count >= 4");
  Rng rng(seed);
  const std::string& alphabet = instance.params.alphabet;
  const std::size_t enum_len = enumerable_length(alphabet.size(), length_cap);

  // Candidate pool: every short tape, random longer tapes, structured proposals.
  std::vector<std::string> candidates;
  for (const auto& t : enumerate_tapes(alphabet, enum_len)) candidates.push_back(t.str());
  for (std::size_t len = enum_len + 1; len <= length_cap; ++len)
    for (int i = 0; i < 64; ++i) candidates.push_back(random_string(rng, alphabet, len));
  if (instance.task_kind == TaskKind::Decision)
    for (int i = 0; i < 256; ++i) {
      std::string s = propose_accepting(instance, rng, length_cap);
      if (s.size() <= length_cap) candidates.push_back(std::move(s));
    }

  std::vector<TestCase> tests;
  std::set<std::string> used;
  const auto emit = [&](const std::string& s) {
    const Tape t = Tape::parse(s);
    tests.push_back({t, spec_eval(instance, t)});
  };

  emit("");
  used.insert("");

  if (instance.task_kind == TaskKind::Transformation) {
    std::map<std::size_t, std::vector<std::string>> pool;
    for (const auto& s : candidates) pool[s.size()].push_back(s);
    std::vector<std::string> picks;
    pick_stratified(rng, pool, count - 1, used, picks);
    for (const auto& s : picks) emit(s);
    return tests;
  }

  std::map<std::size_t, std::vector<std::string>> accept, reject;
  std::set<std::string> seen;
  for (const auto& s : candidates) {
    if (!seen.insert(s).second) continue;
    const bool ok = std::get<Verdict>(spec_eval(instance, Tape::parse(s))) == Verdict::Accept;
    (ok ? accept : reject)[s.size()].push_back(s);
  }
  if (accept.empty())
    throw InfeasibleBalance(instance.id + ": no accepting tape of length <= " + std::to_string(length_cap));
  if (reject.empty())
    throw InfeasibleBalance(instance.id + ": no rejecting tape of length <= " + std::to_string(length_cap));

  // Shortest accepting tape, ties broken by alphabet order.
  const std::string witness = *std::min_element(accept.begin()->second.begin(), accept.begin()->second.end(),
                                                [&](const std::string& a, const std::string& b) {
                                                  const auto rank = [&](const std::string& x) {
                                                    std::string r;
                                                    for (char c : x) r.push_back(static_cast<char>('a' + alphabet.find(c)));
                                                    return r;
                                                  };
                                                  return rank(a) < rank(b);
                                                });
  if (!witness.empty()) {
    emit(witness);
    used.insert(witness);
  }

  const std::size_t want_accept = (count + 1) / 2;
  const std::size_t want_reject = count - want_accept;
  std::size_t n_acc = 0, n_rej = 0;
  for (const auto& t : tests) (std::get<Verdict>(t.expected) == Verdict::Accept ? n_acc : n_rej)++;

  std::vector<std::string> picks;
  if (want_accept > n_acc) pick_stratified(rng, accept, want_accept - n_acc, used, picks);
  if (want_reject > n_rej) pick_stratified(rng, reject, want_reject - n_rej, used, picks);
  std::vector<TestCase> rest;
  for (const auto& s : picks) {
    const Tape t = Tape::parse(s);
    rest.push_back({t, spec_eval(instance, t)});
  }
  rng.shuffle(rest);
  tests.insert(tests.end(), rest.begin(), rest.end());
  tests.resize(std::min(tests.size(), count));
  return tests;
}

std::string render_prompt(const ProblemInstance& instance) {
  const std::string clause =
      instance.task_kind == TaskKind::Transformation
          ? ", and the robot's tape on arrival at the END node must equal the output tape required by the task"
          : "";
  std::string out(kPromptTemplate);
  const auto replace = [&](std::string_view key, const std::string& value) {
    const auto at = out.find(key);
    if (at != std::string::npos) out.replace(at, key.size(), value);
  };
  replace("{objective_clause}", clause);
  replace("{criteria}", instance.criteria);
  return out;
}

void to_json(nlohmann::json& j, const ProblemInstance& inst) {
  const auto& p = inst.params;
  nlohmann::json params = {{"alphabet", p.alphabet}};
  switch (inst.family) {
    case FamilyId::APPEND: case FamilyId::EXACT: case FamilyId::START: case FamilyId::ENDS:
    case FamilyId::HAS: case FamilyId::PREPEND:
      params["pattern"] = p.pattern;
      break;
    case FamilyId::MUTATE:
      params["pattern"] = p.pattern;
      params["replacement"] = p.replacement;
      break;
    case FamilyId::REGEX: params["regex"] = render_regex(p.regex); break;
    case FamilyId::COMPR:
      params["comparator"] = comparator_key(p.comparator);
      params["constant"] = p.constant;
      break;
    case FamilyId::MINMAX:
      params["extremum"] = p.extremum == Extremum::Max ? "max" : "min";
      params["constant"] = p.constant;
      break;
    case FamilyId::BIT_OP:
      params["op"] = "or";
      params["constant"] = p.constant;
      break;
    case FamilyId::FDIV: case FamilyId::ADD: params["constant"] = p.constant; break;
    case FamilyId::SYMM: params["offset"] = p.symm_offset; break;
  }
  j = nlohmann::json{{"id", inst.id},
                     {"family", std::string(to_string(inst.family))},
                     {"tier", std::string(to_string(tier_of(inst.family)))},
                     {"task_kind", inst.task_kind == TaskKind::Decision ? "decision" : "transformation"},
                     {"params", params},
                     {"criteria", inst.criteria},
                     {"seed", inst.seed.value}};
}

namespace {

std::vector<RegexAtom> parse_regex_template(const std::string& text) {
  std::vector<RegexAtom> atoms;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '(') throw std::invalid_argument("regex template atoms must be parenthesized: " + text);
    const auto close = text.find(')', i);
    if (close == std::string::npos) throw std::invalid_argument("unbalanced regex template: " + text);
    RegexAtom a{text.substr(i + 1, close - i - 1), 0};
    if (a.group.empty() || a.group.find_first_not_of("RBYG") != std::string::npos)
      throw std::invalid_argument("regex group must be a nonempty color string: " + text);
    i = close + 1;
    if (i < text.size() && (text[i] == '+' || text[i] == '*' || text[i] == '?')) a.quantifier = text[i++];
    atoms.push_back(std::move(a));
  }
  if (atoms.empty()) throw std::invalid_argument("empty regex template");
  return atoms;
}

}  // namespace

void from_json(const nlohmann::json& j, ProblemInstance& inst) {
  const auto family = family_from_string(j.at("family").get<std::string>());
  if (!family) throw std::invalid_argument("unknown family " + j.at("family").dump());
  const auto& jp = j.at("params");
  Params p;
  p.alphabet = jp.value("alphabet", std::string("RB"));
  if (p.alphabet.empty() || p.alphabet.find_first_not_of("RBYG") != std::string::npos)
    throw std::invalid_argument("bad alphabet '" + p.alphabet + "'");
  p.pattern = jp.value("pattern", std::string());
  p.replacement = jp.value("replacement", std::string());
  if (jp.contains("regex")) p.regex = parse_regex_template(jp.at("regex").get<std::string>());
  if (jp.contains("comparator")) p.comparator = comparator_from_key(jp.at("comparator").get<std::string>());
  if (jp.contains("extremum")) p.extremum = jp.at("extremum").get<std::string>() == "min" ? Extremum::Min : Extremum::Max;
  p.constant = jp.value("constant", std::int64_t{0});
  p.symm_offset = jp.value("offset", 1);

  const bool needs_pattern = *family == FamilyId::APPEND || *family == FamilyId::EXACT ||
                             *family == FamilyId::START || *family == FamilyId::ENDS ||
                             *family == FamilyId::HAS || *family == FamilyId::PREPEND ||
                             *family == FamilyId::MUTATE;
  if (needs_pattern && (p.pattern.empty() || p.pattern.find_first_not_of(p.alphabet) != std::string::npos))
    throw std::invalid_argument("pattern must be a nonempty string over the alphabet");
  if (*family == FamilyId::FDIV && p.constant < 1) throw std::invalid_argument("FDIV divisor must be >= 1");
  if (is_numeric(*family) && (p.constant < 0 || p.constant > 255))
    throw std::invalid_argument("numeric constant must fit in 8 bits");
  if (*family == FamilyId::SYMM && p.symm_offset < 0) throw std::invalid_argument("SYMM offset must be >= 0");

  inst = make_instance(*family, std::move(p), Seed{j.value("seed", std::uint64_t{0})});
  if (j.contains("id")) inst.id = j.at("id").get<std::string>();
}

void to_json(nlohmann::json& j, const TestCase& test) {
  j = nlohmann::json{{"input", test.input.str()}};
  if (const auto* v = std::get_if<Verdict>(&test.expected))
    j["accept"] = *v == Verdict::Accept;
  else
    j["output"] = std::get<Tape>(test.expected).str();
}

void from_json(const nlohmann::json& j, TestCase& test) {
  test.input = Tape::parse(j.at("input").get<std::string>());
  if (j.contains("output"))
    test.expected = Tape::parse(j.at("output").get<std::string>());
  else
    test.expected = j.at("accept").get<bool>() ? Verdict::Accept : Verdict::Reject;
}

}  // namespace delta::mfa
