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
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "delta/bounce/families.hpp"
#include "delta/bounce/periodic.hpp"

namespace delta::bounce {
namespace {

TEST(Axes, Parse) {
  EXPECT_EQ(parse_axes("ROT_OBJ+ROT_BOX"), (AxisSet{Axis::ROT_OBJ, Axis::ROT_BOX}));
  EXPECT_EQ(parse_axes("ROT_BOX,ROT_OBJ"), (AxisSet{Axis::ROT_OBJ, Axis::ROT_BOX}));
  EXPECT_EQ(axes_label(parse_axes("ROT_BOX+ROT_OBJ")), "ROT_OBJ+ROT_BOX");
  EXPECT_THROW(parse_axes("SPIN"), std::invalid_argument);
}

TEST(Sample, RotBoxBasic) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Scene sc = sample_scene({Axis::ROT_BOX}, 0, Seed{s});
    ASSERT_EQ(sc.containers.size(), 1u);
    const auto& c = sc.containers[0];
    EXPECT_GE(c.sides, 3);
    EXPECT_LE(c.sides, 4);
    EXPECT_NEAR(c.radius, 225.0, 1e-9);
    EXPECT_GE(std::abs(c.angular_velocity.base), 0.1 - 1e-9);
    EXPECT_LE(std::abs(c.angular_velocity.base), 0.2 + 1e-9);
    const double speed = norm(sc.balls[0].velocity);
    EXPECT_GE(speed, 200 - 0.02);
    EXPECT_LE(speed, 400 + 0.02);
  }
}

TEST(Sample, MultiBoxExtreme) {
  const Scene sc = sample_scene({Axis::MULTI_BOX}, 4, Seed{8});
  EXPECT_EQ(sc.containers.size(), 6u);
  for (const auto& b : sc.balls) EXPECT_DOUBLE_EQ(b.radius, 20.0);
}

TEST(Sample, DeterministicBytes) {
  for (Axis a : kAllAxes) {
    const nlohmann::json x = sample_scene({a}, 2, Seed{99});
    const nlohmann::json y = sample_scene({a}, 2, Seed{99});
    EXPECT_EQ(x.dump(), y.dump());
    EXPECT_EQ(x.get<Scene>(), sample_scene({a}, 2, Seed{99}));
  }
}

TEST(Periodic, ClosedForm) {
  const auto s = make_periodic_spec(4, 200, 100, 100, 1);
  EXPECT_NEAR(s.omega, 2.22144, 1e-5);
  EXPECT_NEAR(s.t_fly, 0.70711, 1e-5);
  EXPECT_NEAR(s.T_bounce, 1.41421, 1e-5);
  EXPECT_NEAR(s.T_orient, 2.82843, 1e-5);
  for (int n : {4, 6, 8}) {
    const auto p = make_periodic_spec(n, 250, 100, 170, 1);
    EXPECT_NEAR(p.omega * p.t_fly, 2 * std::numbers::pi / n, 1e-12);
  }
  const auto k0 = make_periodic_spec(6, 200, 100, 100, 0);
  EXPECT_EQ(k0.omega, 0.0);
  EXPECT_DOUBLE_EQ(k0.T_orient, k0.T_bounce);
  EXPECT_THROW(construct_periodic_scene(4, 200, 190, 100, 1, Seed{1}), DegenerateGap);
  // Inner square corner reaches the flight line halfway through the flight.
  EXPECT_THROW(construct_periodic_scene(4, 241.59, 140.20, 137.84, 1, Seed{1}), DegenerateGap);
  EXPECT_NO_THROW(construct_periodic_scene(4, 241.59, 140.20, 137.84, 0, Seed{1}));
}

TEST(Periodic, StaticContainerShuttle) {
  const auto ps = construct_periodic_scene(6, 220, 100, 150, 0, Seed{3});
  EXPECT_LT(recurrence_error(ps, kTruthConfig), 1.0);
  EXPECT_NEAR(measured_half_period(ps, kTruthConfig) / ps.spec.t_fly, 1.0, 0.01);
}

// Every sampled spec recurs and shuttles at t_fly.
TEST(Periodic, SampledScenesAreClean) {
  for (std::uint64_t i = 0; i < 40; ++i) {
    const auto ps = sample_periodic_scene(Seed{i});
    EXPECT_LT(recurrence_error(ps, kTruthConfig), 1.0) << i;
    EXPECT_NEAR(measured_half_period(ps, kTruthConfig) / ps.spec.t_fly, 1.0, 0.01) << i;
  }
}

TEST(Timestamps, Basic) {
  const Scene sc = sample_scene({Axis::ROT_BOX}, 0, Seed{5});
  const auto ts = choose_timestamps(sc, 0, Seed{5});
  ASSERT_EQ(ts.size(), 5u);
  const auto impact = first_impact(sc, kTruthConfig, horizon(0));
  ASSERT_TRUE(impact.has_value());
  EXPECT_GT(ts.front(), *impact);
  for (std::size_t i = 1; i < ts.size(); ++i) EXPECT_LT(ts[i - 1], ts[i]);
  EXPECT_EQ(choose_timestamps(sc, 0, Seed{5}), ts);
}

TEST(Timestamps, PeriodicGrid) {
  const auto ps = construct_periodic_scene(4, 200, 100, 100, 1, Seed{1});
  const auto ts = periodic_timestamps(ps.spec, 8);
  ASSERT_EQ(ts.size(), 8u);
  EXPECT_NEAR(ts.back(), 2 * ps.spec.T_orient, 0.006);
  for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_NEAR(ts[i], (i + 1) * 2 * ps.spec.T_orient / 8, 0.006);
}

TEST(Entry, ShapeAndJson) {
  const auto e = build_requested({{Axis::ROT_BOX}, 0, Seed{12}, false});
  EXPECT_EQ(e.tests.size(), 5u);
  for (const auto& t : e.tests) EXPECT_EQ(t.expected.size(), 1u);
  EXPECT_DOUBLE_EQ(e.tolerance, 50.0);
  const nlohmann::json j = e;
  for (const char* key : {"messages", "tests", "id", "difficulty", "timestamps", "tolerance"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j.at("messages").at(0).at("role"), "user");
  EXPECT_EQ(j.get<DatasetEntry>().id, e.id);
  EXPECT_EQ(nlohmann::json(j.get<DatasetEntry>()).dump(), j.dump());
}

TEST(Entry, ParallelMatchesSerial) {
  std::vector<EntryRequest> reqs;
  for (std::uint64_t i = 0; i < 6; ++i) reqs.push_back({{kAllAxes[i]}, 1, Seed{i}, false});
  reqs.push_back({{Axis::ROT_BOX}, 0, Seed{77}, true});
  const auto a = build_entries_serial(reqs);
  const auto b = build_entries_parallel(reqs);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(nlohmann::json(a[i]).dump(), nlohmann::json(b[i]).dump());
}

TEST(Prompt, DescribesScene) {
  const Scene sc = sample_scene({Axis::ROT_BOX}, 0, Seed{2});
  const std::string p = render_prompt(sc);
  EXPECT_NE(p.find("predict_position"), std::string::npos);
  EXPECT_EQ(render_prompt(sc), p);
}

TEST(Split, PlanSizes) {
  const auto files = plan_split(SplitKind::Explorative, {Axis::ROT_BOX}, {}, Seed{1});
  ASSERT_EQ(files.size(), 6u);
  EXPECT_EQ(files[0].name, "explorative_ROT_BOX_train");
  EXPECT_EQ(files[0].requests.size(), 1000u);
  EXPECT_EQ(files[1].requests.size(), 100u);
  for (std::size_t i = 2; i < files.size(); ++i) EXPECT_EQ(files[i].requests.size(), 100u);
  const auto comp = plan_split(SplitKind::Compositional, {}, {10, 5}, Seed{1});
  EXPECT_EQ(comp.size(), 3u);
  const auto trans = plan_split(SplitKind::Transformative, {}, {10, 5}, Seed{1});
  ASSERT_EQ(trans.size(), 2u);
  EXPECT_TRUE(trans[1].requests.front().periodic);
}

std::string file_bytes(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

TEST(Split, EmitDeterministic) {
  const auto dir = std::filesystem::temp_directory_path() / "delta_split_test";
  std::filesystem::remove_all(dir);
  const auto a = emit_split(SplitKind::Compositional, {}, {3, 2}, Seed{4}, dir / "a");
  const auto b = emit_split(SplitKind::Compositional, {}, {3, 2}, Seed{4}, dir / "b");
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(file_bytes(a[i].path), file_bytes(b[i].path));
    EXPECT_EQ(a[i].path.extension(), ".jsonl");
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace delta::bounce
