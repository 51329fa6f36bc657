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

#include "delta/reward/reward.hpp"

#include <mutex>

namespace delta::reward {

double staged_reward(std::size_t step, const RewardSchedule& schedule, const Score& score) {
  if (step < schedule.warmup_steps) return score.per_test;
  return score.full_pass ? 1.0 : 0.0;
}

void to_json(nlohmann::json& j, const ReplayTrace& t) {
  j = nlohmann::json{{"prompt_id", t.prompt_id}, {"trace", t.trace}, {"score", t.score}, {"recorded_at", t.recorded_at}};
}

void from_json(const nlohmann::json& j, ReplayTrace& t) {
  t.prompt_id = j.at("prompt_id").get<std::string>();
  t.trace = j.at("trace").get<std::string>();
  t.score = j.at("score").get<Score>();
  t.recorded_at = j.at("recorded_at").get<std::uint64_t>();
}

ReplayStore::ReplayStore(std::filesystem::path log) : path_(std::move(log)) {
  if (path_.empty()) return;
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  {
    std::ifstream is(path_);
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      ReplayTrace t;
      try {
        t = nlohmann::json::parse(line).get<ReplayTrace>();
      } catch (const std::exception&) {
        continue;  // torn final write
      }
      counter_ = std::max(counter_, t.recorded_at + 1);
      traces_[t.prompt_id].push_back(std::move(t));
    }
  }
  log_.open(path_, std::ios::app | std::ios::binary);
  if (!log_) throw std::runtime_error("cannot open replay log " + path_.string());
}

std::size_t ReplayStore::record_success(const std::string& prompt_id, const std::string& trace, const Score& score) {
  if (!score.full_pass) throw NotFullPass("only full-pass traces can be recorded");
  std::unique_lock lock(mu_);
  ReplayTrace t{prompt_id, trace, score, counter_++};
  if (log_.is_open()) {
    log_ << nlohmann::json(t).dump() << '\n';
    log_.flush();
    if (!log_) throw std::runtime_error("replay log write failed");
  }
  auto& list = traces_[prompt_id];
  list.push_back(std::move(t));
  return list.size();
}

std::vector<ReplayTrace> ReplayStore::fetch_recent(const std::string& prompt_id, std::size_t k) const {
  if (k == 0) throw std::invalid_argument("fetch_recent needs k >= 1");
  std::shared_lock lock(mu_);
  std::vector<ReplayTrace> out;
  const auto it = traces_.find(prompt_id);
  if (it == traces_.end()) return out;
  for (auto r = it->second.rbegin(); r != it->second.rend() && out.size() < k; ++r) out.push_back(*r);
  return out;
}

std::size_t ReplayStore::size() const {
  std::shared_lock lock(mu_);
  std::size_t n = 0;
  for (const auto& [id, list] : traces_) n += list.size();
  return n;
}

std::string format_failure_feedback(const Score& score, std::size_t cap) {
  if (score.full_pass || score.failures.empty()) return {};
  std::string out = "Your solution failed " + std::to_string(score.n_tests - score.n_passed) + " of " +
                    std::to_string(score.n_tests) + " test cases.";
  const std::size_t shown = std::min(cap, score.failures.size());
  if (shown > 0) out += " Failing cases:";
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& f = score.failures[i];
    out += "\n- ";
    if (f.input.empty() && f.expected.empty()) {
      out += f.reason;
      continue;
    }
    out += "input " + (f.input.empty() ? std::string("(empty tape)") : f.input) + ": expected " + f.expected +
           ", observed " + f.observed;
    if (!f.reason.empty()) out += " (" + f.reason + ")";
  }
  if (score.failures.size() > shown)
    out += "\n(" + std::to_string(score.failures.size() - shown) + " more failing cases not shown)";
  out += "\nPlease fix the solution and output the corrected version.\n";
  return out;
}

}  // namespace delta::reward
