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

#ifndef DELTA_BOUNCE_GEOMETRY_HPP
#define DELTA_BOUNCE_GEOMETRY_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace delta::bounce {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  Vec2& operator+=(Vec2 b) { x += b.x; y += b.y; return *this; }
  Vec2& operator-=(Vec2 b) { x -= b.x; y -= b.y; return *this; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
// Counter-clockwise quarter turn.
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 unit_at(double angle) { return {std::cos(angle), std::sin(angle)}; }

class DegenerateShape : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotUnitNormal : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// CCW vertices; vertex k sits at angle rotation + 2*pi*k/sides.
std::vector<Vec2> regular_polygon(int sides, double radius, Vec2 center, double rotation);

// R * cos(pi / n).
double apothem(int sides, double radius);

// Elastic reflection in the frame of a wall moving with `wall_velocity`.
// `normal` must be unit length within 1e-9.
Vec2 reflect(Vec2 v, Vec2 normal, Vec2 wall_velocity = {});

struct Kinematics {
  Vec2 position;
  Vec2 velocity;
};

// Constant-acceleration closed form. Throws std::invalid_argument for t < 0.
Kinematics free_flight(Vec2 position, Vec2 velocity, Vec2 accel, double t);

}  // namespace delta::bounce

#endif  // DELTA_BOUNCE_GEOMETRY_HPP
