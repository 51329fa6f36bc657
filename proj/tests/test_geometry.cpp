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

#include "delta/bounce/geometry.hpp"
#include "delta/common/rng.hpp"

namespace delta::bounce {
namespace {

void expect_near(Vec2 a, Vec2 b, double tol = 1e-9) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
}

TEST(Polygon, UnitSquare) {
  const auto v = regular_polygon(4, 1.0, {0, 0}, 0.0);
  ASSERT_EQ(v.size(), 4u);
  expect_near(v[0], {1, 0});
  expect_near(v[1], {0, 1});
  expect_near(v[2], {-1, 0});
  expect_near(v[3], {0, -1});
  EXPECT_NEAR(apothem(4, 1.0), std::sqrt(2.0) / 2.0, 1e-12);
}

TEST(Polygon, PromptContainer) {
  const auto v = regular_polygon(3, 225.0, {750, 750}, 0.0);
  ASSERT_EQ(v.size(), 3u);
  expect_near(v[0], {975, 750});
  for (const auto& p : v) EXPECT_NEAR(norm(p - Vec2{750, 750}), 225.0, 1e-9);
}

TEST(Polygon, FullTurnSymmetry) {
  for (int n = 3; n <= 8; ++n) {
    const auto a = regular_polygon(n, 100.0, {5, 7}, 0.0);
    const auto b = regular_polygon(n, 100.0, {5, 7}, 2 * std::numbers::pi / n);
    for (const auto& p : b) {
      double best = 1e300;
      for (const auto& q : a) best = std::min(best, norm(p - q));
      EXPECT_LT(best, 1e-9);
    }
  }
}

TEST(Polygon, Degenerate) {
  EXPECT_THROW(regular_polygon(2, 1.0, {}, 0), DegenerateShape);
  EXPECT_THROW(regular_polygon(4, 0.0, {}, 0), DegenerateShape);
}

TEST(Reflect, Examples) {
  expect_near(reflect({3, -4}, {0, 1}), {3, 4});
  expect_near(reflect({0, -5}, {0, 1}, {0, 2}), {0, 9});
  expect_near(reflect({7, 0}, {0, 1}), {7, 0});
  EXPECT_THROW(reflect({1, 1}, {0, 2}), NotUnitNormal);
}

// Reflection is an involution and preserves speed in the wall frame.
TEST(Reflect, Properties) {
  Rng rng(Seed{3});
  for (int i = 0; i < 1000; ++i) {
    const Vec2 v{rng.uniform(-500, 500), rng.uniform(-500, 500)};
    const Vec2 n = unit_at(rng.uniform(0, 2 * std::numbers::pi));
    const Vec2 w{rng.uniform(-50, 50), rng.uniform(-50, 50)};
    const Vec2 r = reflect(v, n, w);
    expect_near(reflect(r, n, w), v, 1e-8);
    EXPECT_NEAR(norm(r - w), norm(v - w), 1e-8);
  }
}

TEST(FreeFlight, Examples) {
  const auto a = free_flight({750, 750}, {0, 0}, {0, -10}, 1.0);
  expect_near(a.position, {750, 745});
  const auto b = free_flight({1, 2}, {3, 4}, {5, 6}, 0.0);
  expect_near(b.position, {1, 2});
  expect_near(b.velocity, {3, 4});
  const auto c = free_flight({0, 0}, {100, 0}, {0, 0}, 2.0);
  expect_near(c.position, {200, 0});
  expect_near(c.velocity, {100, 0});
  EXPECT_THROW(free_flight({}, {}, {}, -1.0), std::invalid_argument);
}

}  // namespace
}  // namespace delta::bounce
