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

#ifndef DELTA_BOUNCE_SIM_HPP
#define DELTA_BOUNCE_SIM_HPP

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "delta/bounce/scene.hpp"

namespace delta::bounce {

struct SimConfig {
  double dt = 1.0 / 240.0;
  // Bisection iterations per contact; 0 resolves contacts at step ends only.
  int max_substeps = 48;
  double restitution = 1.0;
  int max_events_per_step = 64;
};

inline const SimConfig kTruthConfig{1.0 / 240.0, 48};
inline const SimConfig kBaselineConfig{1.0 / 60.0, 48};

inline constexpr double kSanityThreshold = 15.0;

enum class SimErrorKind { InfeasibleScene, TunnelDetected };

class SimError : public std::runtime_error {
 public:
  SimError(SimErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  SimErrorKind kind() const { return kind_; }

 private:
  SimErrorKind kind_;
};

struct TrajectorySample {
  double t = 0.0;
  std::vector<Vec2> positions;
  std::vector<Vec2> velocities;
  friend bool operator==(const TrajectorySample&, const TrajectorySample&) = default;
};

enum class ContactKind { Wall, Obstacle, Ball };

inline constexpr std::size_t kNoBall = std::numeric_limits<std::size_t>::max();

struct CollisionEvent {
  double t = 0.0;
  std::size_t ball = 0;
  std::size_t other = kNoBall;  // second ball for ball-ball contacts
  ContactKind kind = ContactKind::Wall;
  double speed_before = 0.0;
  double speed_after = 0.0;
};

// Throws SimError(InfeasibleScene) unless every ball starts inside its
// container's incircle inset by its own radius, outside every obstacle and
// clear of the other balls in the same container.
void check_feasible(const Scene& scene);

// Fixed-step oracle. Steps lie on the global grid k * dt; a sample at time t
// copies the grid state at floor(t / dt) and advances the remainder, so the
// sample is the same whether it is taken alone or inside a longer run.
class Simulator {
 public:
  Simulator(const Scene& scene, const SimConfig& config);

  // Samples at non-decreasing times `times`.
  std::vector<TrajectorySample> run(const std::vector<double>& times);
  // Grid steps up to and including t_end.
  void run_until(double t_end);

  const std::vector<CollisionEvent>& events() const { return events_; }

 private:
  struct Body {
    Vec2 p;
    Vec2 v;
  };
  struct Contact {
    double g = -std::numeric_limits<double>::infinity();
    ContactKind kind = ContactKind::Wall;
    std::size_t ball = 0;
    std::size_t other = kNoBall;
    std::size_t polygon = 0;
    int face = 0;
  };

  void step_to(std::size_t k);
  void advance(std::vector<Body>& bodies, double t0, double t1, std::vector<CollisionEvent>* log) const;
  std::vector<Body> fly(const std::vector<Body>& bodies, double t0, double t1) const;
  void contacts(const std::vector<Body>& bodies, double t, std::vector<Contact>& out) const;
  Contact worst(const std::vector<Body>& bodies, double t) const;
  double closing(const std::vector<Body>& bodies, const Contact& c, double t) const;
  void resolve(std::vector<Body>& bodies, const Contact& c, double t, std::vector<CollisionEvent>* log) const;
  void clamp(std::vector<Body>& bodies, double t) const;

  Scene scene_;
  SimConfig config_;
  std::vector<double> radii_;
  double min_radius_ = 0.0;
  std::vector<Body> state_;
  std::size_t step_ = 0;
  std::vector<CollisionEvent> events_;
};

std::vector<TrajectorySample> simulate(const Scene& scene, const SimConfig& config,
                                       const std::vector<double>& times);
TrajectorySample state_at(const Scene& scene, const SimConfig& config, double t);

struct SanityResult {
  bool pass = false;
  double max_deviation = 0.0;
  std::string error;  // simulation error text when one config failed
};

// Max per-ball position deviation between the two configs at `timestamps`;
// passes iff it is below kSanityThreshold. Simulation errors fail the check.
SanityResult sanity_check(const Scene& scene, const std::vector<double>& timestamps,
                          const SimConfig& baseline, const SimConfig& truth);

}  // namespace delta::bounce

#endif  // DELTA_BOUNCE_SIM_HPP
