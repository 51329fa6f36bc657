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

#include "delta/bounce/periodic.hpp"

#include <cmath>
#include <numbers>

namespace delta::bounce {

PeriodicSpec make_periodic_spec(int n, double R_o, double R_i, double v, int k, double ball_radius) {
  if (n < 3) throw std::invalid_argument("periodic scene needs n >= 3");
  if (!(R_i > 0.0) || !(R_o > R_i)) throw std::invalid_argument("periodic scene needs R_o > R_i > 0");
  if (!(v > 0.0)) throw std::invalid_argument("periodic scene needs v > 0");
  PeriodicSpec s{n, R_o, R_i, v, k, ball_radius};
  s.delta = (R_o - R_i) * std::cos(std::numbers::pi / n);
  s.t_fly = s.delta / v;
  s.omega = k * 2.0 * std::numbers::pi * v / (n * s.delta);
  s.T_bounce = 2.0 * s.t_fly;
  s.T_orient = k == 0 ? s.T_bounce : n * s.delta / (std::abs(k) * v);
  return s;
}

PeriodicScene construct_periodic_scene(int n, double R_o, double R_i, double v, int k, Seed seed) {
  const PeriodicSpec spec = make_periodic_spec(n, R_o, R_i, v, k);
  const double r = spec.ball_radius;
  const double c = std::cos(std::numbers::pi / n);
  if (spec.delta <= 2.0 * r)
    throw DegenerateGap("normal gap " + std::to_string(spec.delta) + " m leaves no room for a ball of radius " +
                        std::to_string(r));
  if (R_i - r / c <= 0.0) throw DegenerateGap("inner polygon vanishes after shrinking by the ball radius");
  // A rotating inner corner first crosses the flight line t_fly / (2|k|)
  // before arrival, when the ball is delta / (2|k|) above the inner apothem.
  if (k != 0 && apothem(n, R_i) + spec.delta / (2.0 * std::abs(k)) <= R_i - r / c + r + 1e-6)
    throw DegenerateGap("inner corner sweeps through the flight line");

  Rng rng(seed);
  const int side = static_cast<int>(rng.uniform_int(0, n - 1));
  const double phi = (2 * side + 1) * std::numbers::pi / n;
  const double lead = 1e-3 * spec.t_fly;
  const Vec2 center{750.0, 750.0};

  PolygonSpec outer;
  outer.sides = n;
  outer.radius = R_o + r / c;
  outer.center = center;
  outer.rotation = spec.omega * lead;
  outer.angular_velocity.base = spec.omega;
  PolygonSpec inner = outer;
  inner.radius = R_i - r / c;
  inner.role = PolygonRole::Obstacle;

  BallSpec ball;
  ball.sides = n;
  ball.radius = r;
  ball.position = center + (apothem(n, R_o) - v * lead) * unit_at(phi);
  ball.velocity = -v * unit_at(phi);

  PeriodicScene out;
  out.spec = spec;
  out.scene.containers = {outer, inner};
  out.scene.balls = {ball};
  out.scene.seed = seed.value;
  out.scene.metadata.difficulty = 0;
  out.scene.metadata.families = {"ROT_BOX", "PERIODIC"};
  return out;
}

PeriodicScene sample_periodic_scene(Seed seed) {
  Rng rng(derive(seed, 0x7065726fULL));
  static const std::vector<int> kSides = {4, 6, 8};
  constexpr int kAttempts = 50;
  const auto round2 = [](double x) { return std::round(x * 100.0) / 100.0; };
  for (int attempt = 0;; ++attempt) {
    const int n = rng.pick(kSides);
    const double R_o = round2(rng.uniform(150.0, 300.0));
    const double R_i = round2(R_o * rng.uniform(0.3, 0.6));
    const double v = round2(rng.uniform(100.0, 300.0));
    try {
      return construct_periodic_scene(n, R_o, R_i, v, 1, derive(seed, 1));
    } catch (const DegenerateGap&) {
      if (attempt + 1 == kAttempts) throw;
    }
  }
}

std::vector<double> periodic_timestamps(const PeriodicSpec& spec, int count) {
  std::vector<double> out;
  for (int j = 1; j <= count; ++j) out.push_back(std::round(2.0 * spec.T_orient * j / count * 100.0) / 100.0);
  return out;
}

double recurrence_error(const PeriodicScene& ps, const SimConfig& config, int points) {
  std::vector<double> a, b;
  for (int i = 0; i < points; ++i) a.push_back(ps.spec.T_orient * i / points);
  for (double t : a) b.push_back(t + ps.spec.T_orient);
  std::vector<double> times = a;
  times.insert(times.end(), b.begin(), b.end());
  const auto samples = simulate(ps.scene, config, times);
  double err = 0.0;
  for (int i = 0; i < points; ++i)
    err = std::max(err, norm(samples[static_cast<std::size_t>(i)].positions[0] -
                             samples[static_cast<std::size_t>(i + points)].positions[0]));
  return err;
}

double measured_half_period(const PeriodicScene& ps, const SimConfig& config) {
  Simulator sim(ps.scene, config);
  sim.run_until(2.0 * ps.spec.T_orient);
  const auto& ev = sim.events();
  if (ev.size() < 2) return 0.0;
  return (ev.back().t - ev.front().t) / static_cast<double>(ev.size() - 1);
}

}  // namespace delta::bounce
