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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "delta/bounce/families.hpp"
#include "delta/bounce/periodic.hpp"
#include "delta/bounce/sim.hpp"

namespace delta::bounce {
namespace {

Scene box(Vec2 velocity, double omega = 0.0) {
  Scene s;
  PolygonSpec c;
  c.sides = 4;
  c.radius = 300;
  c.center = {750, 750};
  c.rotation = std::numbers::pi / 4;  // axis-aligned edges
  c.angular_velocity.base = omega;
  s.containers.push_back(c);
  BallSpec b;
  b.radius = 20;
  b.position = {750, 750};
  b.velocity = velocity;
  s.balls.push_back(b);
  return s;
}

// Smallest signed clearance between a ball center and the inset container edges.
double clearance(const Scene& s, const BallSpec& b, Vec2 p, double t) {
  const auto& c = s.containers[b.container];
  const auto verts = regular_polygon(c.sides, c.radius, c.center_at(t), c.orientation(t));
  double best = 1e300;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const Vec2 a = verts[i], e = verts[(i + 1) % verts.size()] - a;
    const Vec2 inward = perp(e) * (1.0 / norm(e));
    best = std::min(best, dot(p - a, inward) - b.circumradius());
  }
  return best;
}

TEST(Sim, FreeFlightBeforeImpact) {
  const Scene s = box({100, 0});
  // Inset half-width 300/sqrt(2) - 20 ~ 192; impact after ~1.92 s.
  for (double t : {0.0, 0.5, 1.0, 1.5, 1.9}) {
    const auto st = state_at(s, kTruthConfig, t);
    const auto ff = free_flight({750, 750}, {100, 0}, {}, t);
    EXPECT_NEAR(st.positions[0].x, ff.position.x, 1e-9);
    EXPECT_NEAR(st.positions[0].y, ff.position.y, 1e-9);
  }
}

TEST(Sim, WallBounceReversesVelocity) {
  const Scene s = box({100, 0});
  const double inset = 300 / std::sqrt(2.0) - 20;
  const auto st = state_at(s, kTruthConfig, 3.0);
  // Hits x = 750 + inset at t0, then travels back.
  const double t0 = inset / 100.0;
  EXPECT_NEAR(st.positions[0].x, 750 + inset - 100 * (3.0 - t0), 1e-6);
  EXPECT_NEAR(st.velocities[0].x, -100, 1e-9);
}

TEST(Sim, GravityVerticalDescent) {
  Scene s = box({0, 0});
  s.gravity.mode = GravityMode::Large;
  s.gravity.vector = {0, -100};
  for (double t = 0.1; t < 1.9; t += 0.2) {
    const auto st = state_at(s, kTruthConfig, t);
    EXPECT_NEAR(st.positions[0].x, 750, 1e-12);
    EXPECT_NEAR(st.positions[0].y, 750 - 50 * t * t, 1e-6);
  }
}

TEST(Sim, SampleIndependentOfBatch) {
  const Scene s = sample_scene({Axis::ROT_BOX}, 1, Seed{4});
  const std::vector<double> ts = {0.3, 1.234, 2.5, 3.9};
  const auto all = simulate(s, kTruthConfig, ts);
  for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_EQ(state_at(s, kTruthConfig, ts[i]), all[i]);
  EXPECT_EQ(simulate(s, kTruthConfig, ts), all);
}

TEST(Sim, Infeasible) {
  Scene s = box({0, 0});
  s.balls[0].position = {1100, 750};
  EXPECT_THROW(check_feasible(s), SimError);
  EXPECT_THROW(state_at(s, kTruthConfig, 1.0), SimError);
}

// Balls stay inside their (possibly rotating or moving) container.
TEST(Sim, ContainmentProperty) {
  for (Axis a : kAllAxes) {
    for (int tier = 0; tier < 3; ++tier) {
      const Scene s = sample_scene({a}, tier, derive(Seed{17}, static_cast<std::uint64_t>(a), tier));
      std::vector<double> ts;
      for (int i = 1; i <= 60; ++i) ts.push_back(i * 0.1);
      const auto samples = simulate(s, kTruthConfig, ts);
      for (const auto& sm : samples)
        for (std::size_t b = 0; b < s.balls.size(); ++b)
          EXPECT_GT(clearance(s, s.balls[b], sm.positions[b], sm.t), -1e-6)
              << to_string(a) << " tier " << tier << " t=" << sm.t;
    }
  }
}

TEST(Sim, SpeedConservedInStaticBox) {
  const Scene s = box({173, -91});
  Simulator sim(s, kTruthConfig);
  sim.run_until(40.0);
  EXPECT_GE(sim.events().size(), 20u);
  const auto st = state_at(s, kTruthConfig, 40.0);
  EXPECT_NEAR(norm(st.velocities[0]), norm(Vec2{173, -91}), 1e-9);
  for (const auto& e : sim.events()) EXPECT_NEAR(e.speed_after, e.speed_before, 1e-9);
}

TEST(Sim, BallBallExchange) {
  Scene s = box({100, 0});
  s.balls[0].position = {700, 750};
  BallSpec other = s.balls[0];
  other.position = {800, 750};
  other.velocity = {-100, 0};
  s.balls.push_back(other);
  // Centers 100 apart, radii 20: contact after 0.3 s, then velocities swap.
  const auto st = state_at(s, kTruthConfig, 0.4);
  EXPECT_NEAR(st.velocities[0].x, -100, 1e-9);
  EXPECT_NEAR(st.velocities[1].x, 100, 1e-9);
  EXPECT_NEAR(st.positions[0].x, 730 - 10, 1e-6);
}

TEST(Sanity, Examples) {
  const Scene still = box({0, 0});
  const auto r = sanity_check(still, {0.5, 1.0, 2.0}, kBaselineConfig, kTruthConfig);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.max_deviation, 0.0);

  const Scene s = sample_scene({Axis::ROT_BOX}, 0, Seed{21});
  EXPECT_TRUE(sanity_check(s, s.metadata.key_timestamps, kBaselineConfig, kTruthConfig).pass);
  const SimConfig coarse{0.5, 0};
  EXPECT_FALSE(sanity_check(s, s.metadata.key_timestamps, coarse, kTruthConfig).pass);
  EXPECT_THROW(sanity_check(s, {1.0}, kTruthConfig, kTruthConfig), std::invalid_argument);
}

TEST(Periodic, RecurrenceAtOrientationPeriod) {
  const auto ps = construct_periodic_scene(4, 200, 100, 100, 1, Seed{1});
  const auto a = state_at(ps.scene, kTruthConfig, 0.0);
  const auto b = state_at(ps.scene, kTruthConfig, ps.spec.T_orient);
  EXPECT_LT(norm(a.positions[0] - b.positions[0]), 1e-2);
  const SimConfig fine{kTruthConfig.dt / 4, kTruthConfig.max_substeps};
  const auto c = state_at(ps.scene, fine, ps.spec.T_orient);
  EXPECT_LT(norm(c.positions[0] - b.positions[0]), 1e-2);
}

}  // namespace
}  // namespace delta::bounce
