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

#include "delta/bounce/geometry.hpp"

#include <numbers>
#include <string>

namespace delta::bounce {

std::vector<Vec2> regular_polygon(int sides, double radius, Vec2 center, double rotation) {
  if (sides < 3) throw DegenerateShape("polygon needs at least 3 sides, got " + std::to_string(sides));
  if (!(radius > 0.0)) throw DegenerateShape("polygon radius must be positive");
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(sides));
  for (int k = 0; k < sides; ++k)
    out.push_back(center + radius * unit_at(rotation + 2.0 * std::numbers::pi * k / sides));
  return out;
}

double apothem(int sides, double radius) { return radius * std::cos(std::numbers::pi / sides); }

Vec2 reflect(Vec2 v, Vec2 normal, Vec2 wall_velocity) {
  if (std::abs(norm(normal) - 1.0) > 1e-9) throw NotUnitNormal("reflection normal is not unit length");
  const Vec2 u = v - wall_velocity;
  return u - 2.0 * dot(u, normal) * normal + wall_velocity;
}

Kinematics free_flight(Vec2 position, Vec2 velocity, Vec2 accel, double t) {
  if (t < 0.0) throw std::invalid_argument("free_flight needs t >= 0");
  return {position + t * velocity + (0.5 * t * t) * accel, velocity + t * accel};
}

}  // namespace delta::bounce
