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

#include <cstdlib>
#include <filesystem>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "delta/reward/service.hpp"
#include "test_util.hpp"

namespace delta::reward {
namespace {

using nlohmann::json;

struct Fixture {
  mfa::ProblemInstance instance = mfa::table_instance(mfa::FamilyId::EXACT);
  std::vector<mfa::TestCase> tests = mfa::generate_tests(instance, 12, Seed{1});
  bounce::DatasetEntry entry = bounce::build_requested({{bounce::Axis::ROT_BOX}, 0, Seed{3}, false});
  std::string solution = "```manufactoria\n" + delta::testing::read_data("exact_rbb.mfa") + "```";

  Registry registry() const {
    Registry r;
    r.add(MfaRecord{instance, tests});
    r.add(entry);
    return r;
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

ServiceConfig config() {
  ServiceConfig c;
  c.port = 0;
  c.exec.wall_timeout = 2.0;
  c.workers = 2;
  return c;
}

TEST(Config, EnvOverrides) {
  ::setenv("DELTA_FORGE_PORT", "9123", 1);
  ::setenv("DELTA_FORGE_WORKERS", "7", 1);
  ::setenv("DELTA_FORGE_GUEST", "python3 -I {harness} {candidate}", 1);
  const auto c = load_config(std::nullopt);
  ::unsetenv("DELTA_FORGE_PORT");
  ::unsetenv("DELTA_FORGE_WORKERS");
  ::unsetenv("DELTA_FORGE_GUEST");
  EXPECT_EQ(c.port, 9123);
  EXPECT_EQ(c.workers, 7);
  EXPECT_EQ(c.exec.guest_command, (std::vector<std::string>{"python3", "-I", "{harness}", "{candidate}"}));
}

TEST(Registry, JsonlRoundTrip) {
  const auto& f = fixture();
  const auto path = std::filesystem::temp_directory_path() / "delta_registry.jsonl";
  {
    std::ofstream os(path);
    os << mfa_record_json({f.instance, f.tests}).dump() << '\n' << json(f.entry).dump() << '\n';
  }
  Registry r;
  EXPECT_EQ(r.load_jsonl(path), 2u);
  ASSERT_NE(r.mfa(f.instance.id), nullptr);
  EXPECT_EQ(r.mfa(f.instance.id)->tests, f.tests);
  ASSERT_NE(r.bounce(f.entry.id), nullptr);
  EXPECT_EQ(r.bounce("nope"), nullptr);
  std::filesystem::remove(path);
}

TEST(Api, Handlers) {
  const auto& f = fixture();
  ReplayStore store;
  Api api(config(), f.registry(), store);
  const auto good = api.score_manufactoria({{"response", f.solution}, {"instance_id", f.instance.id}});
  EXPECT_EQ(good.status, 200);
  EXPECT_EQ(good.body.at("full_pass"), true);
  const auto inline_req = api.score_manufactoria({{"response", ""}, {"instance", f.instance}, {"tests", f.tests}});
  EXPECT_EQ(inline_req.body.at("per_test"), 0.0);
  EXPECT_EQ(api.score_manufactoria({{"response", ""}, {"instance_id", "missing"}}).status, 404);
  EXPECT_EQ(api.score_manufactoria({{"instance_id", f.instance.id}}).status, 400);

  EXPECT_EQ(api.reward({{"step", 50}, {"schedule", {{"warmup_steps", 100}}},
                        {"score", Score::from_counts(5, 2, {{}, {}, {}})}})
                .body.at("reward"),
            0.4);
  EXPECT_EQ(api.reward({{"step", -1}, {"score", Score::from_counts(1, 1, {})}}).status, 400);

  const Score pass = Score::from_counts(2, 2, {});
  EXPECT_EQ(api.replay_post("p", {{"trace", "t1"}, {"score", pass}}).status, 200);
  EXPECT_EQ(api.replay_post("p", {{"trace", "t2"}, {"score", Score::from_counts(2, 1, {{}})}}).status, 422);
  EXPECT_EQ(api.replay_get("p", 3).body.at("traces").size(), 1u);
  EXPECT_EQ(api.replay_get("unknown", 3).body.at("traces"), json::array());
  EXPECT_EQ(api.feedback({{"score", pass}}).body.at("text"), "");

  const auto bounce = api.score_bouncingsim(
      {{"source", "def predict_position(t):\n    while True:\n        pass\n"}, {"entry_id", f.entry.id}});
  EXPECT_EQ(bounce.status, 200);
  EXPECT_EQ(bounce.body.at("per_test"), 0.0);
  EXPECT_EQ(api.score_bouncingsim({{"source", "x"}, {"entry_id", "missing"}}).status, 404);
}

// Identical payloads give identical bodies.
TEST(Api, PureScoring) {
  const auto& f = fixture();
  ReplayStore store;
  Api api(config(), f.registry(), store);
  const json req = {{"response", f.solution}, {"instance", f.instance}};
  EXPECT_EQ(api.score_manufactoria(req).body.dump(), api.score_manufactoria(req).body.dump());
}

TEST(Server, HttpRoundTrip) {
  const auto& f = fixture();
  ReplayStore store;
  Api api(config(), f.registry(), store);
  Server server(api);
  const int port = server.bind();
  ASSERT_GT(port, 0);
  std::thread th([&] { server.listen_after_bind(); });
  httplib::Client cli("127.0.0.1", port);
  cli.set_read_timeout(30, 0);

  const json req = {{"response", f.solution}, {"instance_id", f.instance.id}};
  auto res = cli.Post("/score/manufactoria", req.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body), api.score_manufactoria(req).body);

  res = cli.Post("/replay/prompt-1", json{{"trace", "abc"}, {"score", Score::from_counts(1, 1, {})}}.dump(),
                 "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  res = cli.Get("/replay/prompt-1?k=3");
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body).at("traces").at(0).at("trace"), "abc");
  res = cli.Get("/replay/prompt-1?k=0");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);

  res = cli.Post("/feedback", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);

  const json sim = {{"source", "def predict_position(t):\n    return [[750, 750]]\n"}, {"entry", f.entry}};
  res = cli.Post("/score/bouncingsim", sim.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body).at("n_tests"), 5);

  server.stop();
  th.join();
}

}  // namespace
}  // namespace delta::reward
