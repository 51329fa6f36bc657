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

#include "delta/bounce/families.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <numbers>

namespace delta::bounce {
namespace {

constexpr std::array<std::string_view, 6> kAxisNames = {"ROT_OBJ", "ROT_BOX", "MOV_BOX",
                                                        "GRAVITY", "MULTI_BOX", "MULTI_OBJ"};

using R = Range;
using I = IntRange;
constexpr auto kNo = std::nullopt;

DifficultyRow row(double f, I outer, std::optional<I> inner, std::optional<double> r, std::optional<R> omega,
                  bool tv, R speed) {
  DifficultyRow d;
  d.f = f;
  d.outer = outer;
  d.inner = inner;
  d.ball_radius = r;
  d.omega = omega;
  d.time_varying = tv;
  d.speed = speed;
  return d;
}

std::array<std::array<DifficultyRow, kTierCount>, 6> build_table() {
  std::array<std::array<DifficultyRow, kTierCount>, 6> t{};
  const R v0{200, 400}, v1{400, 600}, v2{600, 800}, v3{800, 1000}, v4{1000, 1200};

  t[0] = {row(1.5, {3, 4}, I{3, 4}, 40, R{0.1, 0.2}, false, v0), row(1.4, {3, 5}, I{5, 6}, 35, R{0.2, 0.5}, false, v1),
          row(1.3, {3, 6}, I{6, 7}, 30, R{0.5, 1.0}, false, v2), row(1.2, {3, 7}, I{7, 8}, 30, R{1.0, 2.0}, true, v2),
          row(1.0, {3, 7}, I{8, 8}, 30, R{2.0, 2.5}, true, v2)};

  t[1] = {row(1.5, {3, 4}, I{3, 4}, kNo, R{0.1, 0.2}, false, v0), row(1.4, {5, 6}, I{5, 6}, kNo, R{0.2, 0.5}, false, v1),
          row(1.3, {6, 7}, I{6, 7}, kNo, R{0.5, 1.0}, false, v2), row(1.2, {7, 8}, I{7, 8}, kNo, R{1.0, 1.5}, true, v3),
          row(0.8, {8, 10}, I{8, 10}, kNo, R{2.0, 3.0}, true, v4)};

  const std::array<double, 5> f = {1.5, 1.4, 1.3, 1.2, 1.0};
  const std::array<I, 5> out = {I{3, 4}, I{5, 6}, I{6, 7}, I{7, 8}, I{8, 10}};
  const std::array<R, 5> v = {v0, v1, v2, v3, v4};

  const std::array<R, 5> amp = {R{0, 10}, R{20, 40}, R{40, 60}, R{60, 90}, R{90, 120}};
  const std::array<double, 3> sin_freq = {0.1, 0.5, 1.0};
  for (int i = 0; i < kTierCount; ++i) {
    auto d = row(f[i], out[i], kNo, kNo, kNo, false, v[i]);
    d.amplitude = amp[i];
    d.path = i < 3 ? PathKind::Sin1d : PathKind::Lissajous;
    d.path_frequency = i < 3 ? sin_freq[i] : 0.0;
    d.chaotic_path = i == 4;
    t[2][i] = d;
  }

  const std::array<GravityMode, 5> g = {GravityMode::Tiny, GravityMode::Small, GravityMode::Large,
                                        GravityMode::Tilted, GravityMode::Tilted};
  for (int i = 0; i < kTierCount; ++i) {
    auto d = row(f[i], out[i], kNo, kNo, kNo, false, v[i]);
    d.gravity = g[i];
    t[3][i] = d;
  }

  const std::array<int, 5> cts = {2, 2, 3, 4, 6};
  const std::array<double, 5> rr = {40, 35, 30, 25, 20};
  for (int i = 0; i < kTierCount; ++i) {
    auto d = row(f[i], out[i], kNo, rr[i], kNo, false, v[i]);
    d.containers = cts[i];
    t[4][i] = d;
  }

  const std::array<I, 5> n = {I{2, 2}, I{3, 3}, I{4, 5}, I{5, 6}, I{7, 9}};
  for (int i = 0; i < kTierCount; ++i) {
    auto d = row(2.5, {3, 6}, i == 0 ? std::optional<I>(I{3, 6}) : kNo, 20, kNo, false, v[i]);
    d.balls = n[i];
    t[5][i] = d;
  }
  return t;
}

bool has(const AxisSet& axes, Axis a) { return std::find(axes.begin(), axes.end(), a) != axes.end(); }

double round_to(double x, int decimals) {
  const double s = std::pow(10.0, decimals);
  const double r = std::round(x * s) / s;
  return r == 0.0 ? 0.0 : r;
}

int pick_int(Rng& rng, IntRange r) { return static_cast<int>(rng.uniform_int(r.lo, r.hi)); }
double pick(Rng& rng, Range r) { return rng.uniform(r.lo, r.hi); }

// Sinusoidal envelope at a quarter of the base rate.
AngularProfile profile(Rng& rng, double base, bool tv) {
  AngularProfile p{round_to(base, 3), 0.0, 0.0};
  if (tv) {
    p.amplitude = round_to(0.25 * p.base, 3);
    p.frequency = round_to(rng.uniform(0.5, 1.5), 3);
  }
  return p;
}

Gravity make_gravity(Rng& rng, GravityMode mode) {
  Gravity g;
  g.mode = mode;
  switch (mode) {
    case GravityMode::None: break;
    case GravityMode::Tiny: g.vector = {0.0, -1.0}; break;
    case GravityMode::Small: g.vector = {0.0, -5.0}; break;
    case GravityMode::Large: g.vector = {0.0, -20.0}; break;
    case GravityMode::Tilted: {
      const double tilt = rng.uniform(0.0, std::numbers::pi / 4.0) * (rng.bernoulli(0.5) ? 1.0 : -1.0);
      const Vec2 a = 20.0 * unit_at(-std::numbers::pi / 2.0 + tilt);
      g.vector = {round_to(a.x, 2), round_to(a.y, 2)};
      break;
    }
    case GravityMode::Chaotic:
      g.magnitude = 20.0;
      g.base_angle = round_to(-std::numbers::pi / 2.0, 3);
      g.swing = round_to(rng.uniform(std::numbers::pi / 8.0, std::numbers::pi / 4.0), 3);
      g.frequency = round_to(rng.uniform(0.5, 1.5), 3);
      break;
  }
  return g;
}

TranslationPath make_path(Rng& rng, const DifficultyRow& row) {
  TranslationPath p;
  p.kind = row.path;
  if (p.kind == PathKind::Sin1d) {
    p.amplitude = {round_to(pick(rng, *row.amplitude), 2), 0.0};
    p.frequency = {row.path_frequency, 0.0};
    p.direction = round_to(rng.uniform(0.0, std::numbers::pi), 3);
  } else if (p.kind == PathKind::Lissajous) {
    p.amplitude = {round_to(pick(rng, *row.amplitude), 2), round_to(pick(rng, *row.amplitude), 2)};
    const Range fr = row.chaotic_path ? Range{1.0, 2.0} : Range{0.5, 1.0};
    p.frequency = {round_to(pick(rng, fr), 3), round_to(pick(rng, fr), 3)};
    p.phase = round_to(rng.uniform(0.0, 2.0 * std::numbers::pi), 3);
  }
  return p;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Shortest fixed form with at least `decimals` digits that reproduces x.
std::string num(double x, int decimals) {
  if (x == 0.0) x = 0.0;
  char buf[64];
  for (int d = decimals; d <= 12; ++d) {
    std::snprintf(buf, sizeof buf, "%.*f", d, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string point(Vec2 p, int decimals = 2) { return "(" + num(p.x, decimals) + ", " + num(p.y, decimals) + ")"; }

std::string rate_text(const AngularProfile& p) {
  if (p.time_varying())
    return "angular velocity " + num(p.base, 3) + " + " + num(p.amplitude, 3) + "*sin(" + num(p.frequency, 3) +
           "*t) rad/s";
  return "constant angular velocity " + num(p.base, 3) + " rad/s";
}

std::string path_text(const TranslationPath& p) {
  if (p.kind == PathKind::Sin1d)
    return "center offset " + num(p.amplitude.x, 2) + "*sin(" + num(p.frequency.x, 3) + "*t) m along direction " +
           num(p.direction, 3) + " rad";
  return "center offset (" + num(p.amplitude.x, 2) + "*sin(" + num(p.frequency.x, 3) + "*t), " +
         num(p.amplitude.y, 2) + "*sin(" + num(p.frequency.y, 3) + "*t + " + num(p.phase, 3) + ")) m";
}

}  // namespace

std::string_view to_string(Axis axis) { return kAxisNames[static_cast<std::size_t>(axis)]; }

std::optional<Axis> axis_from_string(std::string_view name) {
  if (name == "ROT_BALL") return Axis::MULTI_OBJ;
  for (std::size_t i = 0; i < kAxisNames.size(); ++i)
    if (kAxisNames[i] == name) return static_cast<Axis>(i);
  return std::nullopt;
}

AxisSet normalize(AxisSet axes) {
  if (axes.empty()) throw std::invalid_argument("axis set must be nonempty");
  std::sort(axes.begin(), axes.end());
  axes.erase(std::unique(axes.begin(), axes.end()), axes.end());
  return axes;
}

std::string axes_label(const AxisSet& axes) {
  std::string out;
  for (Axis a : axes) {
    if (!out.empty()) out += "+";
    out += to_string(a);
  }
  return out;
}

AxisSet parse_axes(std::string_view text) {
  AxisSet out;
  std::size_t i = 0;
  while (i <= text.size()) {
    const auto j = text.find_first_of("+,", i);
    const auto token = text.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i);
    const auto a = axis_from_string(token);
    if (!a) throw std::invalid_argument("unknown family axis '" + std::string(token) + "'");
    out.push_back(*a);
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return normalize(out);
}

const DifficultyRow& difficulty_row(Axis axis, int tier) {
  static const auto table = build_table();
  if (tier < 0 || tier >= kTierCount) throw std::out_of_range("difficulty tier must be in [0, 4]");
  return table[static_cast<std::size_t>(axis)][static_cast<std::size_t>(tier)];
}

double default_ball_radius(int tier) { return difficulty_row(Axis::MULTI_BOX, tier).ball_radius.value(); }

double round2(double x) { return round_to(x, 2); }

std::optional<double> first_impact(const Scene& scene, const SimConfig& config, double t_end) {
  Simulator sim(scene, config);
  sim.run_until(t_end);
  if (sim.events().empty()) return std::nullopt;
  return sim.events().front().t;
}

double predictable_horizon(const Scene& scene, int tier, const SimConfig& baseline, const SimConfig& truth) {
  constexpr double kProbe = 0.05;
  const double end = horizon(tier);
  std::vector<double> grid;
  for (int i = 1; i * kProbe <= end + 1e-9; ++i) grid.push_back(i * kProbe);
  const auto a = simulate(scene, baseline, grid);
  const auto b = simulate(scene, truth, grid);
  double last = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < a[i].positions.size(); ++j)
      if (norm(a[i].positions[j] - b[i].positions[j]) >= kSanityThreshold / 3.0) return last;
    last = grid[i];
  }
  return end;
}

std::vector<double> choose_timestamps(const Scene& scene, int tier, Seed seed, const SimConfig& truth,
                                      std::optional<double> end_override) {
  const double end = end_override.value_or(horizon(tier));
  const double start = first_impact(scene, truth, end).value_or(0.0) + 0.01;
  Rng rng(seed);
  constexpr int kCount = 5;
  const double width = (end - start) / kCount;
  std::vector<double> out;
  for (int i = 0; i < kCount; ++i) {
    double t = round_to(start + (i + rng.uniform01()) * width, 2);
    if (!out.empty() && t <= out.back()) t = round_to(out.back() + 0.01, 2);
    out.push_back(t);
  }
  return out;
}

namespace {

// One candidate draw; returns nullopt when a placement constraint fails.
std::optional<Scene> draw_scene(const AxisSet& axes, int tier, Rng& rng, const SampleOptions& opt) {
  const DifficultyRow& base = difficulty_row(axes.front(), tier);
  const double R = round_to(150.0 * base.f, 2);

  int n_containers = has(axes, Axis::MULTI_BOX) ? difficulty_row(Axis::MULTI_BOX, tier).containers : 1;
  int n_balls = has(axes, Axis::MULTI_OBJ) ? pick_int(rng, difficulty_row(Axis::MULTI_OBJ, tier).balls) : 1;
  const double r = base.ball_radius.value_or(default_ball_radius(tier));
  const IntRange ball_sides = base.inner.value_or(base.outer);

  Scene s;
  for (int i = 0; i < n_containers; ++i) {
    PolygonSpec c;
    c.sides = pick_int(rng, base.outer);
    c.radius = R;
    c.rotation = round_to(rng.uniform(0.0, 2.0 * std::numbers::pi / c.sides), 3);
    if (n_containers == 1) {
      c.center = {750.0, 750.0};
    } else {
      bool placed = false;
      for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
        c.center = {round_to(rng.uniform(R + 10.0, kWorkspaceSize - R - 10.0), 2),
                    round_to(rng.uniform(R + 10.0, kWorkspaceSize - R - 10.0), 2)};
        placed = std::all_of(s.containers.begin(), s.containers.end(), [&](const PolygonSpec& o) {
          return norm(o.center - c.center) >= c.radius + o.radius + opt.container_gap;
        });
      }
      if (!placed) return std::nullopt;
    }
    if (has(axes, Axis::ROT_BOX)) {
      const auto& rb = difficulty_row(Axis::ROT_BOX, tier);
      c.angular_velocity = profile(rng, pick(rng, *rb.omega), rb.time_varying);
    }
    if (has(axes, Axis::MOV_BOX)) c.translation = make_path(rng, difficulty_row(Axis::MOV_BOX, tier));
    s.containers.push_back(c);
  }

  const PolygonSpec& home = s.containers.front();
  const double room = apothem(home.sides, home.radius) - r - opt.margin;
  if (room <= 0.0) return std::nullopt;
  for (int i = 0; i < n_balls; ++i) {
    BallSpec b;
    b.sides = pick_int(rng, ball_sides);
    b.radius = r;
    b.rotation = round_to(rng.uniform(0.0, 2.0 * std::numbers::pi / b.sides), 3);
    bool placed = false;
    for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
      const double rho = room * std::sqrt(rng.uniform01());
      const Vec2 p = home.center + rho * unit_at(rng.uniform(0.0, 2.0 * std::numbers::pi));
      b.position = {round_to(p.x, 2), round_to(p.y, 2)};
      placed = norm(b.position - home.center) <= room &&
               std::all_of(s.balls.begin(), s.balls.end(), [&](const BallSpec& o) {
                 return norm(o.position - b.position) >= r + o.circumradius() + opt.margin;
               });
    }
    if (!placed) return std::nullopt;
    const Vec2 v = pick(rng, base.speed) * unit_at(rng.uniform(0.0, 2.0 * std::numbers::pi));
    b.velocity = {round_to(v.x, 2), round_to(v.y, 2)};
    if (has(axes, Axis::ROT_OBJ)) {
      const auto& ro = difficulty_row(Axis::ROT_OBJ, tier);
      b.spin = profile(rng, pick(rng, *ro.omega), ro.time_varying);
    }
    s.balls.push_back(b);
  }
  if (has(axes, Axis::GRAVITY)) s.gravity = make_gravity(rng, difficulty_row(Axis::GRAVITY, tier).gravity);
  s.metadata.difficulty = tier;
  for (Axis a : axes) s.metadata.families.emplace_back(to_string(a));
  return s;
}

}  // namespace

Scene sample_scene(const AxisSet& axes_in, int tier, Seed seed, const SampleOptions& options) {
  const AxisSet axes = normalize(axes_in);
  difficulty_row(axes.front(), tier);  // validates the tier
  std::string last_reason = "no attempt";
  for (int attempt = 0; attempt < options.retry_budget; ++attempt) {
    const Seed draw_seed = derive(seed, 0x5343454eULL, static_cast<std::uint64_t>(attempt));
    Rng rng(draw_seed);
    auto scene = draw_scene(axes, tier, rng, options);
    if (!scene) {
      last_reason = "placement failed";
      continue;
    }
    scene->seed = seed.value;
    try {
      check_feasible(*scene);
      const double end = predictable_horizon(*scene, tier, options.baseline, options.truth);
      const auto impact = first_impact(*scene, options.truth, end);
      if (!impact || end - *impact < 0.5) {
        last_reason = "predictable window after the first impact is shorter than 0.5 s";
        continue;
      }
      auto ts = choose_timestamps(*scene, tier, derive(draw_seed, 0x54494d45ULL), options.truth, end);
      const auto sanity = sanity_check(*scene, ts, options.baseline, options.truth);
      if (!sanity.pass) {
        last_reason = "sanity deviation " + std::to_string(sanity.max_deviation) + " " + sanity.error;
        continue;
      }
      scene->metadata.key_timestamps = std::move(ts);
      return *scene;
    } catch (const SimError& e) {
      last_reason = e.what();
    }
  }
  throw RetryBudgetExhausted("no acceptable " + axes_label(axes) + " tier " + std::to_string(tier) +
                             " scene for seed " + std::to_string(seed.value) + " after " +
                             std::to_string(options.retry_budget) + " draws (last: " + last_reason + ")");
}

std::string render_prompt(const Scene& scene) {
  std::string p;
  p += R"(## Polygon Dynamics Prediction
In this task, you will implement a single function predict_position(t)
that computes the 2D positions of all balls at an arbitrary future time
t under idealized mechanics. The function parses the scene configuration
(containers, balls, and physics/meta), reconstructs the motions, detects
and handles boundary collisions with finite-size treatment, and returns
a list where each element is the [x, y] position (rounded to 2 decimals)
of a ball at time t. Each evaluation of t must be computed directly from
initial conditions and scene mechanics with no hidden state or
accumulation across calls. Rendering, animation, and explanatory text
are out of scope; prefer closed-form reasoning and avoid coarse time-
stepping except where narrowly required for collision resolution.

### Mechanics (General)
- Kinematics: Use closed-form equations under constant acceleration:
x(t)=x0+vx0*t+0.5*ax*t^2, y(t)=y0+vy0*t+0.5*ay*t^2.
- Collisions: Perfectly elastic. Reflect velocity using v' = v -
2·dot(v, n̂)·n̂, where n̂ is the inward unit normal at the contact.
For a moving wall, reflect the velocity relative to the wall's local
surface velocity and add the surface velocity back.
- Finite size: Treat each ball as a disc of its circumradius. A ball
center stays inside its container shrunk by the ball radius (every edge
offset inward by the radius), outside any obstacle grown by the radius,
and two balls touch when their centers are one radius sum apart. Derive
regular shapes from ('sides','radius','center','rotation'); irregular
convex polygon balls use provided vertices.
- Geometry: Irregular convex polygons (if present) are simple (non self-
intersecting). Ball finite size must be respected in all interactions.
- Units: Positions in meters; time in seconds; angles in radians;
velocities in m/s; accelerations in m/s^2.
- Cartesian Axes: +X is right, +Y is up.

### Constraints
- Implement only predict_position(t); no other entry points will be called.
- No global variables; no variables defined outside the function.
- Do not import external libraries (except math); do not perform I/O; do
not print; do not use randomness.
- Numerical output must be round(value, 2); normalize -0.0 to 0.0.

### Verification and output contract
- Return a list of positions per ball for the provided t: [[x1,y1],[x2,y2],...].
- Each call must be computed independently (no state carry-over between calls).
- You should assume that the ball will hit the wall and bounce back,
which will be verified in test cases.


### Scene description
#### Containers
)";
  std::vector<std::string> dynamics;
  for (std::size_t i = 0; i < scene.containers.size(); ++i) {
    const auto& c = scene.containers[i];
    const bool obstacle = c.role == PolygonRole::Obstacle;
    p += "- " + std::string(obstacle ? "Obstacle " : "Container ") + std::to_string(i + 1) + ": regular polygon with " +
         std::to_string(c.sides) + " sides, radius " + num(c.radius, 2) + "m, center at " + point(c.center) +
         "; initial orientation " + num(c.rotation, 3) + " rad; ";
    p += c.angular_velocity.base == 0.0 && !c.angular_velocity.time_varying() ? std::string("no rotation")
                                                                              : rate_text(c.angular_velocity);
    if (obstacle) p += "; balls stay outside it";
    p += "\n";
    if (c.angular_velocity.time_varying())
      dynamics.push_back("Container " + std::to_string(i + 1) + " spins at " + rate_text(c.angular_velocity) +
                         " (sinusoidal envelope).");
    if (c.translation.kind != PathKind::None)
      dynamics.push_back("Container " + std::to_string(i + 1) + " translates (" +
                         std::string(to_string(c.translation.kind)) + "): " + path_text(c.translation) +
                         " from its listed center.");
  }
  p += "\n#### Objects\n";
  for (std::size_t i = 0; i < scene.balls.size(); ++i) {
    const auto& b = scene.balls[i];
    p += "- Ball " + std::to_string(i + 1) + ": ";
    if (b.vertices.empty()) {
      p += "regular polygon (" + std::to_string(b.sides) + " sides), radius " + num(b.radius, 1) + "m";
      if (b.rotation != 0.0) p += ", initial orientation " + num(b.rotation, 3) + " rad";
    } else {
      p += "irregular convex polygon with vertices (relative to its center)";
      for (const auto& v : b.vertices) p += " " + point(v);
    }
    p += ", initial position " + point(b.position) + ", initial velocity " + point(b.velocity) + " m/s";
    if (b.spin.base != 0.0 || b.spin.time_varying()) p += "; spins about its center at " + rate_text(b.spin);
    if (scene.containers.size() > 1) p += "; inside Container " + std::to_string(b.container + 1);
    p += "\n";
    if (b.spin.time_varying())
      dynamics.push_back("Ball " + std::to_string(i + 1) + " spin follows " + rate_text(b.spin) + ".");
  }
  p += "\n### Physics\n";
  const auto& g = scene.gravity;
  if (g.mode == GravityMode::None)
    p += "- no effective gravity (treated as zero).\n";
  else if (g.mode == GravityMode::Chaotic) {
    p += "- time-varying gravity of magnitude " + num(g.magnitude, 2) + " m/s^2 with direction angle " +
         num(g.base_angle, 3) + " + " + num(g.swing, 3) + "*sin(" + num(g.frequency, 3) + "*t) rad.\n";
    dynamics.push_back("Gravity direction varies in time as stated above.");
  } else {
    p += "- gravity (" + std::string(to_string(g.mode)) + "): constant acceleration " + point(g.vector) +
         " m/s^2.\n";
  }
  p += "\n### Dynamics\n";
  if (dynamics.empty()) p += "- No additional time-varying mechanisms.\n";
  for (const auto& d : dynamics) p += "- " + d + "\n";
  p += R"(
### Conventions for this scene
- Containers are convex regular polygons (parameters: 'sides', 'radius',
'center'), unless otherwise specified.
- Angle baseline: By default, the initial orientation is 0.000 rad,
pointing to the first vertex along +X (standard Cartesian axes);
positive angles rotate CCW about the container center.
- Polygon vertices (if provided) are CCW and form a simple convex polygon.
- Container 'radius' denotes the circumradius (meters).
- For balls: irregular convex polygons rely on provided vertices (no
radius mentioned); regular polygons may be derived from
'sides/radius/center/rotation'.
- Containers are kinematic (infinite mass, prescribed motion); impacts
do not alter container motion.

### Task
- Number of balls: )";
  p += std::to_string(scene.balls.size());
  p += R"(
- Your should think step by step and write python code.
- The final output should be in the following format:
[Your thinking steps here ...](optional)
```python
[Your Python code here]
```
- Define predict_position(t) returning a list of length n_balls; each
element is [x_i, y_i] (rounded to 2 decimals) for Ball i at time t (seconds)

### Output
- Required format: function predict_position(t: float) -> [[x1,y1],
[x2,y2],...]; coordinates as 2-decimal floats
)";
  return p;
}

DatasetEntry build_entry(const Scene& scene, const std::vector<double>& timestamps, double tolerance, std::string id) {
  if (timestamps.empty()) throw std::invalid_argument("build_entry needs at least one timestamp");
  DatasetEntry e;
  e.scene = scene;
  e.timestamps = timestamps;
  std::sort(e.timestamps.begin(), e.timestamps.end());
  e.scene.metadata.key_timestamps = e.timestamps;
  e.difficulty = scene.metadata.difficulty;
  e.tolerance = tolerance;
  e.prompt = render_prompt(scene);
  const auto samples = simulate(scene, kTruthConfig, e.timestamps);
  for (const auto& s : samples) {
    PositionTest t{s.t, {}};
    for (const auto& pos : s.positions) t.expected.push_back({round2(pos.x), round2(pos.y)});
    e.tests.push_back(std::move(t));
  }
  if (id.empty()) {
    std::string label;
    for (const auto& f : scene.metadata.families) label += (label.empty() ? "" : "+") + f;
    id = "bounce-" + label + "-" + std::string(difficulty_name(e.difficulty)) + "-" + hex(scene.seed);
  }
  e.id = std::move(id);
  return e;
}

void to_json(nlohmann::json& j, const DatasetEntry& e) {
  nlohmann::json tests = nlohmann::json::array();
  for (const auto& t : e.tests) {
    nlohmann::json pos = nlohmann::json::array();
    for (const auto& p : t.expected) pos.push_back({p.x, p.y});
    tests.push_back({{"t", t.t}, {"expected", pos}});
  }
  j = nlohmann::json{{"messages", nlohmann::json::array({{{"role", "user"}, {"content", e.prompt}}})},
                     {"tests", tests},
                     {"id", e.id},
                     {"difficulty", e.difficulty},
                     {"timestamps", e.timestamps},
                     {"tolerance", e.tolerance},
                     {"families", e.scene.metadata.families},
                     {"scene", e.scene}};
}

void from_json(const nlohmann::json& j, DatasetEntry& e) {
  try {
    DatasetEntry out;
    out.id = j.at("id").get<std::string>();
    const auto& msgs = j.at("messages");
    if (!msgs.empty()) out.prompt = msgs.at(0).value("content", "");
    for (const auto& jt : j.at("tests")) {
      PositionTest t;
      t.t = jt.at("t").get<double>();
      for (const auto& p : jt.at("expected")) t.expected.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      out.tests.push_back(std::move(t));
    }
    out.difficulty = j.value("difficulty", 0);
    out.timestamps = j.value("timestamps", std::vector<double>{});
    out.tolerance = j.value("tolerance", kDefaultTolerance);
    if (j.contains("scene")) out.scene = j.at("scene").get<Scene>();
    e = std::move(out);
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("malformed dataset entry: ") + ex.what());
  }
}

DatasetEntry build_requested(const EntryRequest& req, const SampleOptions& options) {
  if (req.periodic) {
    for (int attempt = 0; attempt < options.retry_budget; ++attempt) {
      PeriodicScene ps;
      try {
        ps = sample_periodic_scene(derive(req.seed, static_cast<std::uint64_t>(attempt)));
      } catch (const DegenerateGap&) {
        continue;
      }
      if (recurrence_error(ps, options.truth) > 1.0) continue;
      ps.scene.seed = req.seed.value;
      return build_entry(ps.scene, periodic_timestamps(ps.spec));
    }
    throw RetryBudgetExhausted("no periodic scene for seed " + std::to_string(req.seed.value));
  }
  const Scene s = sample_scene(req.axes, req.tier, req.seed, options);
  return build_entry(s, s.metadata.key_timestamps);
}

std::vector<DatasetEntry> build_entries_serial(const std::vector<EntryRequest>& requests, const SampleOptions& options) {
  std::vector<DatasetEntry> out;
  out.reserve(requests.size());
  for (const auto& r : requests) out.push_back(build_requested(r, options));
  return out;
}

std::vector<DatasetEntry> build_entries_parallel(const std::vector<EntryRequest>& requests,
                                                 const SampleOptions& options) {
  std::vector<DatasetEntry> out(requests.size());
  std::vector<std::exception_ptr> errors(requests.size());
  const auto n = static_cast<std::ptrdiff_t>(requests.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = build_requested(requests[k], options);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::string_view to_string(SplitKind kind) {
  switch (kind) {
    case SplitKind::Explorative: return "explorative";
    case SplitKind::Compositional: return "compositional";
    case SplitKind::Transformative: return "transformative";
  }
  return "?";
}

std::optional<SplitKind> split_from_string(std::string_view name) {
  for (SplitKind k : {SplitKind::Explorative, SplitKind::Compositional, SplitKind::Transformative})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

std::vector<SplitFile> plan_split(SplitKind kind, const std::vector<Axis>& families, SplitCounts counts, Seed seed) {
  if (counts.train == 0 || counts.test == 0) throw std::invalid_argument("split counts must be positive");
  std::vector<SplitFile> files;
  const auto add = [&](std::string name, AxisSet axes, int tier, std::size_t count, bool periodic = false) {
    SplitFile f{std::move(name), {}};
    const std::uint64_t tag = fnv1a(f.name);
    for (std::size_t i = 0; i < count; ++i)
      f.requests.push_back({axes, tier, derive(seed, tag, i), periodic});
    files.push_back(std::move(f));
  };
  const std::string prefix = std::string(to_string(kind)) + "_";
  switch (kind) {
    case SplitKind::Explorative: {
      const std::vector<Axis> fams = families.empty() ? std::vector<Axis>(kAllAxes.begin(), kAllAxes.end()) : families;
      for (Axis a : fams) {
        const std::string fam(to_string(a));
        add(prefix + fam + "_train", {a}, 0, counts.train);
        add(prefix + fam + "_test_id", {a}, 0, counts.test);
        for (int tier = 1; tier < kTierCount; ++tier)
          add(prefix + fam + "_test_ood_" + std::string(difficulty_name(tier)), {a}, tier, counts.test);
      }
      break;
    }
    case SplitKind::Compositional:
      add(prefix + "ROT_BOX_train", {Axis::ROT_BOX}, 0, counts.train);
      add(prefix + "ROT_OBJ_train", {Axis::ROT_OBJ}, 0, counts.train);
      add(prefix + "ROT_OBJ+ROT_BOX_test", {Axis::ROT_OBJ, Axis::ROT_BOX}, 0, counts.test);
      break;
    case SplitKind::Transformative:
      add(prefix + "ROT_BOX_train", {Axis::ROT_BOX}, 0, counts.train);
      add(prefix + "periodic_test", {Axis::ROT_BOX}, 0, counts.test, true);
      break;
  }
  return files;
}

std::vector<EmittedFile> emit_split(SplitKind kind, const std::vector<Axis>& families, SplitCounts counts, Seed seed,
                                    const std::filesystem::path& destination, const SampleOptions& options) {
  std::filesystem::create_directories(destination);
  std::vector<EmittedFile> out;
  for (const auto& file : plan_split(kind, families, counts, seed)) {
    const auto entries = build_entries_parallel(file.requests, options);
    EmittedFile ef{destination / (file.name + ".jsonl"), entries.size()};
    std::ofstream os(ef.path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + ef.path.string());
    for (const auto& e : entries) os << nlohmann::json(e).dump() << '\n';
    if (!os) throw std::runtime_error("write failed for " + ef.path.string());
    out.push_back(std::move(ef));
  }
  return out;
}

}  // namespace delta::bounce
