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

#ifndef DELTA_REWARD_REWARD_HPP
#define DELTA_REWARD_REWARD_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "delta/common/score.hpp"

namespace delta::reward {

struct RewardSchedule {
  std::size_t warmup_steps = 100;
};

// per_test before warmup_steps, then 1.0 / 0.0 on full_pass.
double staged_reward(std::size_t step, const RewardSchedule& schedule, const Score& score);

struct ReplayTrace {
  std::string prompt_id;
  std::string trace;
  Score score;
  std::uint64_t recorded_at = 0;
  friend bool operator==(const ReplayTrace&, const ReplayTrace&) = default;
};

void to_json(nlohmann::json& j, const ReplayTrace& t);
void from_json(const nlohmann::json& j, ReplayTrace& t);

class NotFullPass : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Successful traces per prompt. Every record is appended to a JSONL log and
// the log is replayed on construction, so the store survives restarts. An
// empty path keeps the store in memory only.
class ReplayStore {
 public:
  explicit ReplayStore(std::filesystem::path log = {});

  // Returns the number of traces now stored for prompt_id.
  // Throws NotFullPass unless score.full_pass.
  std::size_t record_success(const std::string& prompt_id, const std::string& trace, const Score& score);

  // Up to k traces, newest first. Throws std::invalid_argument for k == 0.
  std::vector<ReplayTrace> fetch_recent(const std::string& prompt_id, std::size_t k = 3) const;

  std::size_t size() const;

 private:
  std::filesystem::path path_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::vector<ReplayTrace>> traces_;
  std::uint64_t counter_ = 0;
  std::ofstream log_;
};

inline constexpr std::size_t kFeedbackCap = 3;

// Continuation text listing up to `cap` failing cases; empty for a full pass.
std::string format_failure_feedback(const Score& score, std::size_t cap = kFeedbackCap);

}  // namespace delta::reward

#endif  // DELTA_REWARD_REWARD_HPP
