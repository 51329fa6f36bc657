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

#ifndef DELTA_BOUNCE_SCENE_HPP
#define DELTA_BOUNCE_SCENE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "delta/bounce/geometry.hpp"

namespace delta::bounce {

inline constexpr double kWorkspaceSize = 1500.0;

// omega(t) = base + amplitude * sin(frequency * t)
struct AngularProfile {
  double base = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;

  double rate(double t) const;
  // Integral of rate over [0, t].
  double angle(double t) const;
  bool time_varying() const { return amplitude != 0.0 && frequency != 0.0; }
  friend bool operator==(const AngularProfile&, const AngularProfile&) = default;
};

enum class PathKind { None, Sin1d, Lissajous };

std::string_view to_string(PathKind kind);

// Center offset from the rest position.
//   sin1d:     amplitude.x * sin(frequency.x * t) along unit_at(direction)
//   lissajous: (amplitude.x * sin(frequency.x * t), amplitude.y * sin(frequency.y * t + phase))
struct TranslationPath {
  PathKind kind = PathKind::None;
  Vec2 amplitude;
  Vec2 frequency;
  double phase = 0.0;
  double direction = 0.0;

  Vec2 offset(double t) const;
  Vec2 velocity(double t) const;
  friend bool operator==(const TranslationPath&, const TranslationPath&) = default;
};

// Containers hold balls inside; obstacles keep balls outside.
enum class PolygonRole { Container, Obstacle };

struct PolygonSpec {
  int sides = 4;
  double radius = 150.0;  // circumradius
  Vec2 center{750.0, 750.0};
  double rotation = 0.0;
  AngularProfile angular_velocity;
  TranslationPath translation;
  PolygonRole role = PolygonRole::Container;

  double orientation(double t) const { return rotation + angular_velocity.angle(t); }
  Vec2 center_at(double t) const { return center + translation.offset(t); }
  // Velocity of the rigid body at world point q.
  Vec2 surface_velocity(Vec2 q, double t) const;
  friend bool operator==(const PolygonSpec&, const PolygonSpec&) = default;
};

struct BallSpec {
  int sides = 4;
  double radius = 40.0;
  double rotation = 0.0;
  // Explicit CCW convex outline relative to `position`; overrides sides/radius.
  std::vector<Vec2> vertices;
  Vec2 position{750.0, 750.0};
  Vec2 velocity;
  AngularProfile spin;
  std::size_t container = 0;

  // Radius of the disc used for contact.
  double circumradius() const;
  friend bool operator==(const BallSpec&, const BallSpec&) = default;
};

enum class GravityMode { None, Tiny, Small, Large, Tilted, Chaotic };

std::string_view to_string(GravityMode mode);

struct Gravity {
  GravityMode mode = GravityMode::None;
  Vec2 vector;  // constant acceleration for every mode except chaotic
  // chaotic: magnitude * unit_at(base_angle + swing * sin(frequency * t))
  double magnitude = 0.0;
  double base_angle = 0.0;
  double swing = 0.0;
  double frequency = 0.0;

  Vec2 accel_at(double t) const;
  friend bool operator==(const Gravity&, const Gravity&) = default;
};

struct SceneMetadata {
  int difficulty = 0;
  std::vector<std::string> families;
  std::vector<double> key_timestamps;
  friend bool operator==(const SceneMetadata&, const SceneMetadata&) = default;
};

struct Scene {
  std::vector<PolygonSpec> containers;
  std::vector<BallSpec> balls;
  Gravity gravity;
  std::uint64_t seed = 0;
  SceneMetadata metadata;
  friend bool operator==(const Scene&, const Scene&) = default;
};

std::string_view difficulty_name(int tier);

void to_json(nlohmann::json& j, const Scene& scene);
// Throws std::invalid_argument on a malformed record.
void from_json(const nlohmann::json& j, Scene& scene);

}  // namespace delta::bounce

#endif  // DELTA_BOUNCE_SCENE_HPP
