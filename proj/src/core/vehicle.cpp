// Copyright 2026 The rfidsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "core/error.hpp"

namespace rfidsim {

namespace {

constexpr double kSnapEps = 1e-9;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_dt(double dt) {
  if (!(dt > 0.0)) fail(ErrorKind::kDomain, "dt must be > 0");
}

// Moves pos toward target horizontally by at most max_step; returns the step taken.
double advance_horizontal(EnuPose& pose, Vec3 target, double max_step) {
  const double de = target.e - pose.east;
  const double dn = target.n - pose.north;
  const double dist = std::hypot(de, dn);
  if (dist <= kSnapEps) {
    pose.east = target.e;
    pose.north = target.n;
    return 0.0;
  }
  if (dist <= max_step) {
    pose.east = target.e;
    pose.north = target.n;
  } else {
    pose.east += de / dist * max_step;
    pose.north += dn / dist * max_step;
  }
  pose.yaw = std::atan2(dn, de);
  return std::min(dist, max_step);
}

void advance_vertical(EnuPose& pose, double target_up, const UavLimits& lim, double dt) {
  const double dz = target_up - pose.up;
  if (dz > 0.0) {
    pose.up += std::min(dz, lim.ascend_speed * dt);
  } else if (dz < 0.0) {
    pose.up -= std::min(-dz, lim.descend_speed * dt);
  }
  if (std::abs(target_up - pose.up) <= kSnapEps) pose.up = target_up;
}

}  // namespace

std::string_view to_string(VehicleType t) { return t == VehicleType::kUav ? "uav" : "ugv"; }

VehicleType vehicle_type_from_string(std::string_view s) {
  if (s == "uav") return VehicleType::kUav;
  if (s == "ugv") return VehicleType::kUgv;
  fail(ErrorKind::kParse, "unknown vehicle type: " + std::string(s));
}

double wrap_angle(double a) {
  a = std::fmod(a + std::numbers::pi, 2.0 * std::numbers::pi);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a - std::numbers::pi;
}

UavState step_uav(UavState s, const Setpoint& sp, double dt) {
  check_dt(dt);
  std::visit(Overloaded{
                 [&](const GotoSetpoint& g) {
                   s.circling = false;
                   advance_horizontal(s.pose, g.target, s.limits.cruise_speed * dt);
                   advance_vertical(s.pose, std::max(g.target.u, 0.0), s.limits, dt);
                 },
                 [&](const CircleSetpoint& c) {
                   if (!(c.radius_m > 0.0)) fail(ErrorKind::kDomain, "circle radius must be > 0");
                   if (!s.circling || !(s.circle_center == c.center) ||
                       s.circle_radius != c.radius_m) {
                     // The carrot starts on the circle straight ahead of the nose.
                     s.circling = true;
                     s.circle_center = c.center;
                     s.circle_radius = c.radius_m;
                     s.circle_bearing = s.pose.yaw;
                     s.circle_swept_rad = 0.0;
                   }
                   const double dtheta = s.limits.circle_speed / c.radius_m * dt;
                   s.circle_bearing = wrap_angle(s.circle_bearing + dtheta);
                   s.circle_swept_rad += dtheta;
                   const Vec3 carrot{c.center.e + c.radius_m * std::cos(s.circle_bearing),
                                     c.center.n + c.radius_m * std::sin(s.circle_bearing),
                                     c.center.u};
                   advance_horizontal(s.pose, carrot, s.limits.cruise_speed * dt);
                   advance_vertical(s.pose, std::max(c.center.u, 0.0), s.limits, dt);
                 },
                 [&](const HoldSetpoint&) { s.circling = false; },
             },
             sp);
  return s;
}

UgvState step_ugv(UgvState s, const Setpoint& sp, double dt) {
  check_dt(dt);
  const auto* g = std::get_if<GotoSetpoint>(&sp);
  if (g == nullptr) {
    // Ground vehicle has no circle primitive; anything but a goto stops it.
    s.speed_now = 0.0;
    return s;
  }
  const double tol = g->acceptance_m >= 0.0 ? g->acceptance_m : s.limits.arrival_tol;
  const double de = g->target.e - s.pose.east;
  const double dn = g->target.n - s.pose.north;
  const double dist = std::hypot(de, dn);
  if (dist <= std::max(tol, kSnapEps)) {
    s.speed_now = 0.0;
    s.clearing = false;
    return s;
  }
  const double step = s.limits.speed * dt;
  const double max_turn = s.limits.speed / s.limits.min_turn_radius * dt;
  const double err = wrap_angle(std::atan2(dn, de) - s.pose.yaw);

  // A target inside the turning circle on its own side cannot be reached by
  // turning toward it: drive straight until it is 3 R away, then turn in.
  const double r = s.limits.min_turn_radius;
  if (s.clearing && dist >= 3.0 * r) s.clearing = false;
  if (!s.clearing && std::abs(err) > max_turn) {
    const double side = err >= 0.0 ? 1.0 : -1.0;
    const double cx = s.pose.east - side * r * std::sin(s.pose.yaw);
    const double cy = s.pose.north + side * r * std::cos(s.pose.yaw);
    s.clearing = std::hypot(g->target.e - cx, g->target.n - cy) < r - 1e-6;
  }

  const double turn = s.clearing ? 0.0 : std::clamp(err, -max_turn, max_turn);
  s.pose.yaw = wrap_angle(s.pose.yaw + turn);
  if (std::abs(err - turn) < 1e-9 && dist <= step) {
    s.pose.east = g->target.e;
    s.pose.north = g->target.n;
    s.speed_now = dist / dt;
    return s;
  }
  s.pose.east += step * std::cos(s.pose.yaw);
  s.pose.north += step * std::sin(s.pose.yaw);
  s.speed_now = s.limits.speed;
  return s;
}

bool uav_reached(const UavState& s, const Setpoint& sp) {
  if (const auto* g = std::get_if<GotoSetpoint>(&sp)) {
    const double tol = std::max(g->acceptance_m, 0.0) + kSnapEps;
    return horizontal_distance(s.pose.position(), g->target) <= tol &&
           std::abs(s.pose.up - std::max(g->target.u, 0.0)) <= kSnapEps;
  }
  if (const auto* c = std::get_if<CircleSetpoint>(&sp)) {
    return s.circling && s.circle_swept_rad * 180.0 / std::numbers::pi >= c->arc_deg - 1e-9;
  }
  return true;
}

bool ugv_reached(const UgvState& s, const Setpoint& sp) {
  if (const auto* g = std::get_if<GotoSetpoint>(&sp)) {
    const double tol = g->acceptance_m >= 0.0 ? g->acceptance_m : s.limits.arrival_tol;
    return horizontal_distance(s.pose.position(), g->target) <= std::max(tol, kSnapEps);
  }
  return true;
}

}  // namespace rfidsim
