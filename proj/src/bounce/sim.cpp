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

#include "delta/bounce/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace delta::bounce {
namespace {

// Penetration below this (meters) counts as touching, not violating.
constexpr double kTol = 1e-9;
constexpr double kTouch = 1e-7;

struct Frame {
  Vec2 center;
  double orientation = 0.0;
  double apothem = 0.0;
  int sides = 0;

  // Face with the largest support u_k . d and that support value.
  std::pair<int, double> support(Vec2 d) const {
    int best = 0;
    double value = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < sides; ++k) {
      const double s = dot(normal(k), d);
      if (s > value) {
        value = s;
        best = k;
      }
    }
    return {best, value};
  }
  Vec2 normal(int k) const { return unit_at(orientation + (2 * k + 1) * std::numbers::pi / sides); }
};

Frame frame_of(const PolygonSpec& poly, double t) {
  return {poly.center_at(t), poly.orientation(t), apothem(poly.sides, poly.radius), poly.sides};
}

}  // namespace

void check_feasible(const Scene& scene) {
  const auto fail = [](const std::string& msg) { throw SimError(SimErrorKind::InfeasibleScene, msg); };
  if (scene.balls.empty()) fail("scene has no balls");
  for (std::size_t i = 0; i < scene.balls.size(); ++i) {
    const auto& b = scene.balls[i];
    const double r = b.circumradius();
    if (b.container >= scene.containers.size() || scene.containers[b.container].role != PolygonRole::Container)
      fail("ball " + std::to_string(i) + " has no container");
    const auto& c = scene.containers[b.container];
    if (norm(b.position - c.center_at(0.0)) > apothem(c.sides, c.radius) - r + kTol)
      fail("ball " + std::to_string(i) + " starts outside its container incircle");
    for (const auto& o : scene.containers) {
      if (o.role != PolygonRole::Obstacle) continue;
      const Frame f = frame_of(o, 0.0);
      if (f.support(b.position - f.center).second < f.apothem + r - kTol)
        fail("ball " + std::to_string(i) + " starts inside an obstacle");
    }
    for (std::size_t j = i + 1; j < scene.balls.size(); ++j) {
      const auto& o = scene.balls[j];
      if (o.container == b.container && norm(b.position - o.position) < r + o.circumradius() - kTol)
        fail("balls " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    }
  }
}

Simulator::Simulator(const Scene& scene, const SimConfig& config) : scene_(scene), config_(config) {
  if (!(config.dt > 0.0)) throw std::invalid_argument("SimConfig.dt must be positive");
  if (config.restitution != 1.0) throw std::invalid_argument("only restitution 1.0 is supported");
  check_feasible(scene_);
  min_radius_ = std::numeric_limits<double>::infinity();
  for (const auto& b : scene_.balls) {
    radii_.push_back(b.circumradius());
    min_radius_ = std::min(min_radius_, radii_.back());
    state_.push_back({b.position, b.velocity});
  }
}

std::vector<Simulator::Body> Simulator::fly(const std::vector<Body>& bodies, double t0, double t1) const {
  const Vec2 a = scene_.gravity.accel_at(0.5 * (t0 + t1));
  const double h = t1 - t0;
  std::vector<Body> out(bodies.size());
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    const auto k = free_flight(bodies[i].p, bodies[i].v, a, h);
    out[i] = {k.position, k.velocity};
  }
  return out;
}

void Simulator::contacts(const std::vector<Body>& bodies, double t, std::vector<Contact>& out) const {
  out.clear();
  for (std::size_t pi = 0; pi < scene_.containers.size(); ++pi) {
    const auto& poly = scene_.containers[pi];
    const Frame f = frame_of(poly, t);
    for (std::size_t i = 0; i < bodies.size(); ++i) {
      const bool inside = poly.role == PolygonRole::Container;
      if (inside && scene_.balls[i].container != pi) continue;
      const auto [face, s] = f.support(bodies[i].p - f.center);
      Contact c;
      c.kind = inside ? ContactKind::Wall : ContactKind::Obstacle;
      c.g = inside ? s - (f.apothem - radii_[i]) : (f.apothem + radii_[i]) - s;
      c.ball = i;
      c.polygon = pi;
      c.face = face;
      out.push_back(c);
    }
  }
  for (std::size_t i = 0; i < bodies.size(); ++i)
    for (std::size_t j = i + 1; j < bodies.size(); ++j) {
      if (scene_.balls[i].container != scene_.balls[j].container) continue;
      Contact c;
      c.kind = ContactKind::Ball;
      c.g = radii_[i] + radii_[j] - norm(bodies[i].p - bodies[j].p);
      c.ball = i;
      c.other = j;
      out.push_back(c);
    }
}

Simulator::Contact Simulator::worst(const std::vector<Body>& bodies, double t) const {
  std::vector<Contact> all;
  contacts(bodies, t, all);
  Contact best;
  for (const auto& c : all)
    if (c.g > best.g) best = c;
  return best;
}

double Simulator::closing(const std::vector<Body>& bodies, const Contact& c, double t) const {
  const Body& b = bodies[c.ball];
  if (c.kind == ContactKind::Ball) {
    const Vec2 d = b.p - bodies[c.other].p;
    const double len = norm(d);
    if (len == 0.0) return 0.0;
    return -dot(b.v - bodies[c.other].v, (1.0 / len) * d);
  }
  const auto& poly = scene_.containers[c.polygon];
  const Vec2 u = frame_of(poly, t).normal(c.face);
  const double r = radii_[c.ball];
  const Vec2 q = c.kind == ContactKind::Wall ? b.p + r * u : b.p - r * u;
  const double rel = dot(u, b.v - poly.surface_velocity(q, t));
  return c.kind == ContactKind::Wall ? rel : -rel;
}

void Simulator::resolve(std::vector<Body>& bodies, const Contact& c, double t,
                        std::vector<CollisionEvent>* log) const {
  Body& b = bodies[c.ball];
  const double before = norm(b.v);
  if (c.kind == ContactKind::Ball) {
    Body& o = bodies[c.other];
    const Vec2 d = b.p - o.p;
    const Vec2 n = (1.0 / norm(d)) * d;
    const double dv = dot(b.v - o.v, n);
    const double other_before = norm(o.v);
    b.v -= dv * n;
    o.v += dv * n;
    if (log) {
      log->push_back({t, c.ball, c.other, ContactKind::Ball, before, norm(b.v)});
      log->push_back({t, c.other, c.ball, ContactKind::Ball, other_before, norm(o.v)});
    }
    return;
  }
  const auto& poly = scene_.containers[c.polygon];
  const Vec2 u = frame_of(poly, t).normal(c.face);
  const double r = radii_[c.ball];
  if (c.kind == ContactKind::Wall)
    b.v = reflect(b.v, -u, poly.surface_velocity(b.p + r * u, t));
  else
    b.v = reflect(b.v, u, poly.surface_velocity(b.p - r * u, t));
  if (log) log->push_back({t, c.ball, kNoBall, c.kind, before, norm(b.v)});
}

void Simulator::clamp(std::vector<Body>& bodies, double t) const {
  std::vector<Contact> all;
  for (int pass = 0; pass < 4; ++pass) {
    contacts(bodies, t, all);
    bool moved = false;
    for (const auto& c : all) {
      if (c.g <= kTol) continue;
      if (c.g > radii_[c.ball])
        throw SimError(SimErrorKind::TunnelDetected,
                       "penetration " + std::to_string(c.g) + " m exceeds the ball radius at t=" + std::to_string(t));
      moved = true;
      Body& b = bodies[c.ball];
      if (c.kind == ContactKind::Ball) {
        Body& o = bodies[c.other];
        const Vec2 d = b.p - o.p;
        const Vec2 n = (1.0 / norm(d)) * d;
        b.p += (0.5 * c.g + kTol) * n;
        o.p -= (0.5 * c.g + kTol) * n;
      } else {
        const Vec2 u = frame_of(scene_.containers[c.polygon], t).normal(c.face);
        const double push = c.g + kTol;
        b.p += c.kind == ContactKind::Wall ? -push * u : push * u;
      }
    }
    if (!moved) return;
  }
}

void Simulator::advance(std::vector<Body>& bodies, double t0, double t1, std::vector<CollisionEvent>* log) const {
  if (!(t1 > t0)) return;
  std::vector<Contact> all;

  if (config_.max_substeps <= 0) {
    // Coarse mode: move the whole step, then bounce whatever ended up inside.
    bodies = fly(bodies, t0, t1);
    contacts(bodies, t1, all);
    for (const auto& c : all)
      if (c.g > kTol && closing(bodies, c, t1) > 0.0) resolve(bodies, c, t1, log);
    clamp(bodies, t1);
    return;
  }

  double tau = t0;
  int events = 0;
  while (tau < t1) {
    // Contacts already touching and still closing are resolved in place.
    for (int pass = 0; pass < 4; ++pass) {
      contacts(bodies, tau, all);
      bool any = false;
      for (const auto& c : all)
        if (c.g > -kTouch && closing(bodies, c, tau) > 1e-12) {
          resolve(bodies, c, tau, log);
          any = true;
          ++events;
        }
      if (!any) break;
    }
    if (events > config_.max_events_per_step) {
      bodies = fly(bodies, tau, t1);
      break;
    }

    // Scan the remaining interval finely enough that a ball cannot cross a
    // constraint and leave it again between two probes.
    double vmax = 0.0;
    for (const auto& b : bodies) vmax = std::max(vmax, norm(b.v));
    const double span = t1 - tau;
    const int probes = std::clamp(static_cast<int>(std::ceil(2.0 * vmax * span / (0.25 * min_radius_))), 1, 64);
    double lo = tau;
    double hi = tau;
    bool hit = false;
    for (int i = 1; i <= probes; ++i) {
      const double ti = i == probes ? t1 : tau + span * i / probes;
      if (worst(fly(bodies, tau, ti), ti).g > kTol) {
        hi = ti;
        hit = true;
        break;
      }
      lo = ti;
    }
    if (!hit) {
      bodies = fly(bodies, tau, t1);
      break;
    }
    for (int i = 0; i < config_.max_substeps; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (worst(fly(bodies, tau, mid), mid).g > kTol)
        hi = mid;
      else
        lo = mid;
    }

    const std::vector<Body> at_hi = fly(bodies, tau, hi);
    bodies = fly(bodies, tau, lo);
    tau = lo;
    contacts(at_hi, hi, all);
    bool any = false;
    for (const auto& c : all)
      if (c.g > kTol && closing(bodies, c, tau) > 0.0) {
        resolve(bodies, c, tau, log);
        any = true;
      }
    if (!any) {
      // Violated but not closing (e.g. a sweeping vertex); let the clamp handle it.
      bodies = at_hi;
      tau = hi;
    }
    if (++events > config_.max_events_per_step) {
      bodies = fly(bodies, tau, t1);
      break;
    }
  }
  clamp(bodies, t1);
}

void Simulator::step_to(std::size_t k) {
  while (step_ < k) {
    advance(state_, static_cast<double>(step_) * config_.dt, static_cast<double>(step_ + 1) * config_.dt, &events_);
    ++step_;
  }
}

void Simulator::run_until(double t_end) {
  step_to(static_cast<std::size_t>(std::floor(t_end / config_.dt)));
}

std::vector<TrajectorySample> Simulator::run(const std::vector<double>& times) {
  std::vector<TrajectorySample> out;
  out.reserve(times.size());
  double prev = 0.0;
  for (double t : times) {
    if (!(t >= 0.0)) throw std::invalid_argument("sample times must be >= 0");
    if (t < prev) throw std::invalid_argument("sample times must be non-decreasing");
    prev = t;
    auto k = static_cast<std::size_t>(std::floor(t / config_.dt));
    if (static_cast<double>(k) * config_.dt > t) --k;
    if (k < step_) throw std::logic_error("sample time precedes simulator state");
    step_to(k);
    std::vector<Body> copy = state_;
    advance(copy, static_cast<double>(k) * config_.dt, t, nullptr);
    TrajectorySample s;
    s.t = t;
    for (const auto& b : copy) {
      s.positions.push_back(b.p);
      s.velocities.push_back(b.v);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<TrajectorySample> simulate(const Scene& scene, const SimConfig& config, const std::vector<double>& times) {
  Simulator sim(scene, config);
  return sim.run(times);
}

TrajectorySample state_at(const Scene& scene, const SimConfig& config, double t) {
  return simulate(scene, config, {t}).front();
}

SanityResult sanity_check(const Scene& scene, const std::vector<double>& timestamps, const SimConfig& baseline,
                          const SimConfig& truth) {
  if (!(baseline.dt > truth.dt)) throw std::invalid_argument("sanity_check needs baseline.dt > truth.dt");
  SanityResult result;
  std::vector<double> times = timestamps;
  std::sort(times.begin(), times.end());
  try {
    const auto a = simulate(scene, baseline, times);
    const auto b = simulate(scene, truth, times);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a[i].positions.size(); ++j)
        result.max_deviation = std::max(result.max_deviation, norm(a[i].positions[j] - b[i].positions[j]));
    result.pass = result.max_deviation < kSanityThreshold;
  } catch (const SimError& e) {
    result.pass = false;
    result.max_deviation = std::numeric_limits<double>::infinity();
    result.error = e.what();
  }
  return result;
}

}  // namespace delta::bounce
