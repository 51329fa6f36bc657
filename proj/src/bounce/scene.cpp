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

#include "delta/bounce/scene.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace delta::bounce {

double AngularProfile::rate(double t) const {
  if (!time_varying()) return base;
  return base + amplitude * std::sin(frequency * t);
}

double AngularProfile::angle(double t) const {
  if (!time_varying()) return base * t;
  return base * t + (amplitude / frequency) * (1.0 - std::cos(frequency * t));
}

std::string_view to_string(PathKind kind) {
  switch (kind) {
    case PathKind::None: return "none";
    case PathKind::Sin1d: return "sin1d";
    case PathKind::Lissajous: return "lissajous";
  }
  return "?";
}

Vec2 TranslationPath::offset(double t) const {
  switch (kind) {
    case PathKind::None: return {};
    case PathKind::Sin1d: return (amplitude.x * std::sin(frequency.x * t)) * unit_at(direction);
    case PathKind::Lissajous:
      return {amplitude.x * std::sin(frequency.x * t), amplitude.y * std::sin(frequency.y * t + phase)};
  }
  return {};
}

Vec2 TranslationPath::velocity(double t) const {
  switch (kind) {
    case PathKind::None: return {};
    case PathKind::Sin1d:
      return (amplitude.x * frequency.x * std::cos(frequency.x * t)) * unit_at(direction);
    case PathKind::Lissajous:
      return {amplitude.x * frequency.x * std::cos(frequency.x * t),
              amplitude.y * frequency.y * std::cos(frequency.y * t + phase)};
  }
  return {};
}

Vec2 PolygonSpec::surface_velocity(Vec2 q, double t) const {
  return translation.velocity(t) + angular_velocity.rate(t) * perp(q - center_at(t));
}

double BallSpec::circumradius() const {
  if (vertices.empty()) return radius;
  double r = 0.0;
  for (const auto& v : vertices) r = std::max(r, norm(v));
  return r;
}

std::string_view to_string(GravityMode mode) {
  switch (mode) {
    case GravityMode::None: return "none";
    case GravityMode::Tiny: return "tiny";
    case GravityMode::Small: return "small";
    case GravityMode::Large: return "large";
    case GravityMode::Tilted: return "tilted";
    case GravityMode::Chaotic: return "chaotic";
  }
  return "?";
}

Vec2 Gravity::accel_at(double t) const {
  if (mode != GravityMode::Chaotic) return vector;
  return magnitude * unit_at(base_angle + swing * std::sin(frequency * t));
}

std::string_view difficulty_name(int tier) {
  static constexpr std::array<std::string_view, 5> kNames = {"basic", "easy", "medium", "hard", "extreme"};
  if (tier < 0 || tier >= 5) throw std::out_of_range("difficulty tier out of range");
  return kNames[static_cast<std::size_t>(tier)];
}

namespace {

nlohmann::json vec(Vec2 v) { return nlohmann::json::array({v.x, v.y}); }

Vec2 vec_of(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [x, y], got " + j.dump());
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

nlohmann::json profile(const AngularProfile& p) {
  return {{"base", p.base}, {"amplitude", p.amplitude}, {"frequency", p.frequency}};
}

AngularProfile profile_of(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0, 0.0};
  return {j.value("base", 0.0), j.value("amplitude", 0.0), j.value("frequency", 0.0)};
}

template <typename Enum, std::size_t N>
Enum enum_of(const std::string& s, const std::array<Enum, N>& values) {
  for (Enum e : values)
    if (to_string(e) == s) return e;
  throw std::invalid_argument("unknown enum value '" + s + "'");
}

}  // namespace

void to_json(nlohmann::json& j, const Scene& scene) {
  nlohmann::json containers = nlohmann::json::array();
  for (const auto& c : scene.containers) {
    const auto& tr = c.translation;
    nlohmann::json path = {{"kind", std::string(to_string(tr.kind))}};
    if (tr.kind != PathKind::None) {
      path["amplitude"] = vec(tr.amplitude);
      path["frequency"] = vec(tr.frequency);
      path["phase"] = tr.phase;
      path["direction"] = tr.direction;
    }
    containers.push_back({{"sides", c.sides},
                          {"radius", c.radius},
                          {"center", vec(c.center)},
                          {"rotation", c.rotation},
                          {"angular_velocity", profile(c.angular_velocity)},
                          {"translation", path},
                          {"role", c.role == PolygonRole::Container ? "container" : "obstacle"}});
  }
  nlohmann::json balls = nlohmann::json::array();
  for (const auto& b : scene.balls) {
    nlohmann::json jb = {{"sides", b.sides},
                         {"radius", b.radius},
                         {"rotation", b.rotation},
                         {"position", vec(b.position)},
                         {"velocity", vec(b.velocity)},
                         {"spin", profile(b.spin)},
                         {"container", b.container}};
    if (!b.vertices.empty()) {
      nlohmann::json vs = nlohmann::json::array();
      for (const auto& v : b.vertices) vs.push_back(vec(v));
      jb["vertices"] = vs;
    }
    balls.push_back(jb);
  }
  const auto& g = scene.gravity;
  nlohmann::json gravity = {{"mode", std::string(to_string(g.mode))}, {"vector", vec(g.vector)}};
  if (g.mode == GravityMode::Chaotic) {
    gravity["magnitude"] = g.magnitude;
    gravity["base_angle"] = g.base_angle;
    gravity["swing"] = g.swing;
    gravity["frequency"] = g.frequency;
  }
  j = nlohmann::json{{"containers", containers},
                     {"balls", balls},
                     {"physics", {{"gravity", gravity}, {"restitution", 1.0}}},
                     {"workspace", {kWorkspaceSize, kWorkspaceSize}},
                     {"seed", scene.seed},
                     {"metadata",
                      {{"difficulty", scene.metadata.difficulty},
                       {"difficulty_name", std::string(difficulty_name(scene.metadata.difficulty))},
                       {"families", scene.metadata.families},
                       {"key_timestamps", scene.metadata.key_timestamps}}}};
}

void from_json(const nlohmann::json& j, Scene& scene) {
  static constexpr std::array kPaths = {PathKind::None, PathKind::Sin1d, PathKind::Lissajous};
  static constexpr std::array kModes = {GravityMode::None,  GravityMode::Tiny,   GravityMode::Small,
                                        GravityMode::Large, GravityMode::Tilted, GravityMode::Chaotic};
  try {
    Scene s;
    for (const auto& jc : j.at("containers")) {
      PolygonSpec c;
      c.sides = jc.at("sides").get<int>();
      c.radius = jc.at("radius").get<double>();
      c.center = vec_of(jc.at("center"));
      c.rotation = jc.value("rotation", 0.0);
      if (jc.contains("angular_velocity")) c.angular_velocity = profile_of(jc.at("angular_velocity"));
      if (jc.contains("translation")) {
        const auto& jt = jc.at("translation");
        c.translation.kind = enum_of(jt.value("kind", std::string("none")), kPaths);
        if (c.translation.kind != PathKind::None) {
          c.translation.amplitude = vec_of(jt.at("amplitude"));
          c.translation.frequency = vec_of(jt.at("frequency"));
          c.translation.phase = jt.value("phase", 0.0);
          c.translation.direction = jt.value("direction", 0.0);
        }
      }
      const std::string role = jc.value("role", std::string("container"));
      if (role != "container" && role != "obstacle") throw std::invalid_argument("unknown role " + role);
      c.role = role == "container" ? PolygonRole::Container : PolygonRole::Obstacle;
      if (c.sides < 3 || !(c.radius > 0.0)) throw std::invalid_argument("degenerate container");
      s.containers.push_back(c);
    }
    for (const auto& jb : j.at("balls")) {
      BallSpec b;
      b.sides = jb.value("sides", 0);
      b.radius = jb.value("radius", 0.0);
      b.rotation = jb.value("rotation", 0.0);
      if (jb.contains("vertices"))
        for (const auto& v : jb.at("vertices")) b.vertices.push_back(vec_of(v));
      b.position = vec_of(jb.at("position"));
      b.velocity = vec_of(jb.at("velocity"));
      if (jb.contains("spin")) b.spin = profile_of(jb.at("spin"));
      b.container = jb.value("container", std::size_t{0});
      if (b.vertices.empty() && (b.sides < 3 || !(b.radius > 0.0)))
        throw std::invalid_argument("ball needs sides >= 3 and radius > 0, or vertices");
      if (b.container >= s.containers.size() || s.containers[b.container].role != PolygonRole::Container)
        throw std::invalid_argument("ball container index does not name a container");
      s.balls.push_back(std::move(b));
    }
    if (j.contains("physics") && j.at("physics").contains("gravity")) {
      const auto& jg = j.at("physics").at("gravity");
      s.gravity.mode = enum_of(jg.value("mode", std::string("none")), kModes);
      if (jg.contains("vector")) s.gravity.vector = vec_of(jg.at("vector"));
      s.gravity.magnitude = jg.value("magnitude", 0.0);
      s.gravity.base_angle = jg.value("base_angle", 0.0);
      s.gravity.swing = jg.value("swing", 0.0);
      s.gravity.frequency = jg.value("frequency", 0.0);
    }
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("metadata")) {
      const auto& jm = j.at("metadata");
      s.metadata.difficulty = jm.value("difficulty", 0);
      s.metadata.families = jm.value("families", std::vector<std::string>{});
      s.metadata.key_timestamps = jm.value("key_timestamps", std::vector<double>{});
    }
    scene = std::move(s);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed scene: ") + e.what());
  }
}

}  // namespace delta::bounce
