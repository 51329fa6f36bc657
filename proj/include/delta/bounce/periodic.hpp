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

#ifndef DELTA_BOUNCE_PERIODIC_HPP
#define DELTA_BOUNCE_PERIODIC_HPP

#include <stdexcept>
#include <vector>

#include "delta/bounce/scene.hpp"
#include "delta/bounce/sim.hpp"
#include "delta/common/rng.hpp"

namespace delta::bounce {

// Shuttle between two concentric co-rotating regular n-gons. R_o and R_i are
// the effective radii seen by the ball center; the drawn polygons are grown
// (outer) or shrunk (inner) by the ball radius.
struct PeriodicSpec {
  int n = 4;
  double R_o = 200.0;
  double R_i = 100.0;
  double v = 100.0;
  int k = 1;
  double ball_radius = 10.0;

  double delta = 0.0;     // (R_o - R_i) cos(pi/n)
  double t_fly = 0.0;     // delta / v
  double omega = 0.0;     // k 2 pi v / (n delta)
  double T_bounce = 0.0;  // 2 t_fly
  double T_orient = 0.0;  // n delta / (|k| v); equals T_bounce when k = 0
};

class DegenerateGap : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Fills the derived fields. Throws std::invalid_argument on n < 3,
// R_o <= R_i, R_i <= 0 or v <= 0.
PeriodicSpec make_periodic_spec(int n, double R_o, double R_i, double v, int k, double ball_radius = 10.0);

struct PeriodicScene {
  Scene scene;
  PeriodicSpec spec;
};

// The ball starts a small fraction of t_fly after leaving the outer wall,
// moving inward along the normal of a seeded side. Throws DegenerateGap when
// the gap leaves no room for the ball or a rotating inner corner would clip
// the flight line.
PeriodicScene construct_periodic_scene(int n, double R_o, double R_i, double v, int k, Seed seed);

// n in {4, 6, 8}, |k| = 1, radii and speed drawn from a fixed box; draws
// that construct_periodic_scene rejects are redrawn (up to 50 times).
PeriodicScene sample_periodic_scene(Seed seed);

// Uniform grid of `count` points over (0, 2 T_orient], rounded to 0.01 s.
std::vector<double> periodic_timestamps(const PeriodicSpec& spec, int count = 8);

// max |pos(t + T_orient) - pos(t)| over `points` grid times in [0, T_orient).
double recurrence_error(const PeriodicScene& ps, const SimConfig& config, int points = 40);

// Mean spacing of consecutive wall/obstacle impacts over 2 T_orient.
double measured_half_period(const PeriodicScene& ps, const SimConfig& config);

}  // namespace delta::bounce

#endif  // DELTA_BOUNCE_PERIODIC_HPP
