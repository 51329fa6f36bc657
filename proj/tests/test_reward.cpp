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

#include <filesystem>
#include <thread>

#include <gtest/gtest.h>

#include "delta/common/rng.hpp"
#include "delta/reward/reward.hpp"

namespace delta::reward {
namespace {

Score passing() { return Score::from_counts(4, 4, {}); }

Score failing(std::size_t n_failures, std::size_t n_tests) {
  std::vector<Failure> f;
  for (std::size_t i = 0; i < n_failures; ++i) f.push_back({"RB" + std::string(i, 'R'), "accept", "reject", "none_route"});
  return Score::from_counts(n_tests, n_tests - n_failures, f);
}

struct TempLog {
  std::filesystem::path path;
  TempLog() : path(std::filesystem::temp_directory_path() / ("delta_replay_" + std::to_string(::getpid()) + ".jsonl")) {
    std::filesystem::remove(path);
  }
  ~TempLog() { std::filesystem::remove(path); }
};

TEST(Staged, Examples) {
  const RewardSchedule s{100};
  Score warm = failing(3, 5);
  warm.per_test = 0.4;
  EXPECT_DOUBLE_EQ(staged_reward(50, s, warm), 0.4);
  Score nine = failing(1, 10);
  EXPECT_DOUBLE_EQ(staged_reward(150, s, nine), 0.0);
  EXPECT_DOUBLE_EQ(staged_reward(150, s, passing()), 1.0);
}

// Exactly one transition, at warmup_steps.
TEST(Staged, SingleTransition) {
  const Score s = failing(1, 4);
  for (std::size_t w : {0u, 1u, 7u, 100u}) {
    for (std::size_t step = 0; step < 120; ++step)
      EXPECT_DOUBLE_EQ(staged_reward(step, {w}, s), step < w ? 0.75 : 0.0);
  }
}

TEST(Replay, RecordFetch) {
  ReplayStore store;
  for (int i = 0; i < 5; ++i) EXPECT_EQ(store.record_success("p", "trace" + std::to_string(i), passing()), i + 1u);
  const auto three = store.fetch_recent("p", 3);
  ASSERT_EQ(three.size(), 3u);
  EXPECT_EQ(three[0].trace, "trace4");
  EXPECT_EQ(three[2].trace, "trace2");
  EXPECT_GT(three[0].recorded_at, three[1].recorded_at);
  EXPECT_EQ(store.fetch_recent("p", 1).at(0).trace, "trace4");
  EXPECT_TRUE(store.fetch_recent("unknown").empty());
  EXPECT_THROW(store.fetch_recent("p", 0), std::invalid_argument);
  EXPECT_THROW(store.record_success("p", "bad", failing(1, 2)), NotFullPass);
  EXPECT_EQ(store.size(), 5u);
}

TEST(Replay, PersistsAcrossRestart) {
  TempLog log;
  {
    ReplayStore store(log.path);
    store.record_success("a", "one", passing());
    store.record_success("a", "two", passing());
    store.record_success("b", "three", passing());
  }
  ReplayStore again(log.path);
  const auto a = again.fetch_recent("a");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].trace, "two");
  again.record_success("a", "four", passing());
  EXPECT_EQ(again.fetch_recent("a", 1).at(0).trace, "four");
  EXPECT_EQ(again.size(), 4u);
}

// fetch_recent after record_success returns that trace first.
TEST(Replay, LifoProperty) {
  ReplayStore store;
  Rng rng(Seed{2});
  for (int i = 0; i < 300; ++i) {
    const std::string id = "p" + std::to_string(rng.uniform_int(0, 9));
    const std::string trace = "t" + std::to_string(i);
    store.record_success(id, trace, passing());
    const auto got = store.fetch_recent(id, static_cast<std::size_t>(rng.uniform_int(1, 5)));
    ASSERT_FALSE(got.empty());
    EXPECT_EQ(got[0].trace, trace);
    EXPECT_LE(got.size(), 5u);
  }
}

TEST(Replay, ConcurrentWriters) {
  TempLog log;
  {
    ReplayStore store(log.path);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t)
      threads.emplace_back([&store, t] {
        for (int i = 0; i < 50; ++i) store.record_success("p" + std::to_string(t % 2), "x", passing());
      });
    for (auto& th : threads) th.join();
    EXPECT_EQ(store.size(), 200u);
  }
  EXPECT_EQ(ReplayStore(log.path).size(), 200u);
}

TEST(Feedback, Text) {
  EXPECT_EQ(format_failure_feedback(passing()), "");
  const std::string ten = format_failure_feedback(failing(10, 12), 3);
  EXPECT_NE(ten.find("failed 10 of 12"), std::string::npos);
  std::size_t listed = 0;
  for (std::size_t pos = ten.find("\n- "); pos != std::string::npos; pos = ten.find("\n- ", pos + 1)) ++listed;
  EXPECT_EQ(listed, 3u);
  EXPECT_NE(ten.find("none_route"), std::string::npos);
  EXPECT_NE(ten.find("7 more"), std::string::npos);
}

}  // namespace
}  // namespace delta::reward
