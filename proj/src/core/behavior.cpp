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

#include "core/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"

namespace rfidsim {

namespace {

constexpr double kTimeEps = 1e-6;

bool elapsed(double t, double limit) { return t >= limit - kTimeEps; }

void issue(SearchProgress& p, Maneuver m, Setpoint sp) {
  p.directive.maneuver = m;
  p.directive.setpoint = sp;
  ++p.directive.revision;
}

Vec3 at_alt(Vec3 p, double alt) { return {p.e, p.n, alt}; }

// Whether any read satisfies the current waypoint.
std::optional<Epc> matching_read(const SearchProgress& p, std::span<const Epc> reads) {
  if (p.current >= p.waypoints.size()) return std::nullopt;
  const auto& wp = p.waypoints[p.current];
  for (const auto& epc : reads) {
    if (wp.expected ? epc == *wp.expected : p.credited.count(epc) == 0) return epc;
  }
  return std::nullopt;
}

void enter_uav(UavSearchFsm& f, UavPhase phase) {
  auto& p = f.progress;
  const auto& bp = p.params;
  f.phase = phase;
  p.phase_elapsed_s = 0.0;
  switch (phase) {
    case UavPhase::kTakeoff:
      issue(p, Maneuver::kTakeoff, GotoSetpoint{at_alt(p.home, bp.cruise_alt_m), 0.0});
      break;
    case UavPhase::kCruise:
      p.found_current = false;
      issue(p, Maneuver::kNavTo,
            GotoSetpoint{at_alt(p.waypoints[p.current].position, bp.cruise_alt_m), 0.0});
      break;
    case UavPhase::kDescend:
      issue(p, Maneuver::kChangeAlt,
            GotoSetpoint{at_alt(p.waypoints[p.current].position, bp.search_alt_m), 0.0});
      break;
    case UavPhase::kCircle:
      issue(p, Maneuver::kCircle,
            CircleSetpoint{at_alt(p.waypoints[p.current].position, bp.search_alt_m),
                           bp.circle_radius_m, bp.circle_arc_deg});
      break;
    case UavPhase::kAscend:
      issue(p, Maneuver::kChangeAlt,
            GotoSetpoint{at_alt(p.waypoints[p.current].position, bp.cruise_alt_m), 0.0});
      break;
    case UavPhase::kLand: {
      const auto* g = std::get_if<GotoSetpoint>(&p.directive.setpoint);
      const Vec3 where = g ? g->target : p.home;
      issue(p, Maneuver::kLand, GotoSetpoint{at_alt(where, 0.0), 0.0});
      break;
    }
    case UavPhase::kHover:  // keeps the descent setpoint
    case UavPhase::kIdle:
    case UavPhase::kDone:
      break;
  }
}

void next_uav_waypoint(UavSearchFsm& f) {
  auto& p = f.progress;
  ++p.current;
  enter_uav(f, p.current < p.waypoints.size() ? UavPhase::kCruise : UavPhase::kLand);
}

void enter_ugv(UgvSearchFsm& f, UgvPhase phase, Rng* rng = nullptr) {
  auto& p = f.progress;
  const auto& bp = p.params;
  f.phase = phase;
  p.phase_elapsed_s = 0.0;
  switch (phase) {
    case UgvPhase::kDrive:
      p.found_current = false;
      issue(p, Maneuver::kNavTo, GotoSetpoint{p.waypoints[p.current].position, bp.arrival_tol_m});
      break;
    case UgvPhase::kRetryOut: {
      const double a = rng->uniform(0.0, 2.0 * std::numbers::pi);
      const Vec3 wp = p.waypoints[p.current].position;
      const Vec3 out{wp.e + bp.ugv_backoff_m * std::cos(a), wp.n + bp.ugv_backoff_m * std::sin(a),
                     wp.u};
      issue(p, Maneuver::kNavTo, GotoSetpoint{out, bp.ugv_retry_acceptance_m});
      break;
    }
    case UgvPhase::kRetryBack:
      issue(p, Maneuver::kNavTo, GotoSetpoint{p.waypoints[p.current].position, bp.arrival_tol_m});
      break;
    case UgvPhase::kStop: {
      const auto* g = std::get_if<GotoSetpoint>(&p.directive.setpoint);
      issue(p, Maneuver::kLand, GotoSetpoint{g ? g->target : p.home, -1.0});
      break;
    }
    case UgvPhase::kDwell:
    case UgvPhase::kIdle:
    case UgvPhase::kDone:
      break;
  }
}

void next_ugv_waypoint(UgvSearchFsm& f) {
  auto& p = f.progress;
  ++p.current;
  enter_ugv(f, p.current < p.waypoints.size() ? UgvPhase::kDrive : UgvPhase::kStop);
}

void credit(SearchProgress& p, const Epc& epc, std::vector<BehaviorEvent>& events) {
  p.found_current = true;
  p.credited.insert(epc);
  events.push_back({BehaviorEventKind::kTagFound, p.current, epc});
}

}  // namespace

void BehaviorParams::validate() const {
  for (double v : {cruise_alt_m, search_alt_m, hover_s, circle_radius_m, circle_arc_deg,
                   circle_speed_mps, arrival_tol_m, ugv_dwell_s, ugv_retry_budget_s, ugv_backoff_m,
                   ugv_retry_acceptance_m}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(ErrorKind::kConfig, "behavior parameters must all be positive");
    }
  }
}

double BehaviorParams::circle_duration_s() const {
  return circle_arc_deg * std::numbers::pi / 180.0 * circle_radius_m / circle_speed_mps;
}

std::string_view to_string(BehaviorEventKind k) {
  switch (k) {
    case BehaviorEventKind::kWaypointReached: return "waypoint_reached";
    case BehaviorEventKind::kTagFound: return "tag_found";
    case BehaviorEventKind::kSearchAbandoned: return "search_abandoned";
    case BehaviorEventKind::kMissionDone: return "mission_done";
  }
  return "unknown";
}

std::string_view to_string(UavPhase p) {
  switch (p) {
    case UavPhase::kIdle: return "idle";
    case UavPhase::kTakeoff: return "takeoff";
    case UavPhase::kCruise: return "cruise";
    case UavPhase::kDescend: return "descend";
    case UavPhase::kHover: return "hover";
    case UavPhase::kCircle: return "circle";
    case UavPhase::kAscend: return "ascend";
    case UavPhase::kLand: return "land";
    case UavPhase::kDone: return "done";
  }
  return "unknown";
}

std::string_view to_string(UgvPhase p) {
  switch (p) {
    case UgvPhase::kIdle: return "idle";
    case UgvPhase::kDrive: return "drive";
    case UgvPhase::kDwell: return "dwell";
    case UgvPhase::kRetryOut: return "retry_out";
    case UgvPhase::kRetryBack: return "retry_back";
    case UgvPhase::kStop: return "stop";
    case UgvPhase::kDone: return "done";
  }
  return "unknown";
}

UavSearchFsm make_uav_search(std::vector<Waypoint> waypoints, const BehaviorParams& params,
                             Vec3 home) {
  params.validate();
  UavSearchFsm f;
  f.progress.waypoints = std::move(waypoints);
  f.progress.params = params;
  f.progress.home = home;
  return f;
}

UgvSearchFsm make_ugv_search(std::vector<Waypoint> waypoints, const BehaviorParams& params,
                             Vec3 home) {
  params.validate();
  UgvSearchFsm f;
  f.progress.waypoints = std::move(waypoints);
  f.progress.params = params;
  f.progress.home = home;
  return f;
}

StepResult<UavSearchFsm> uav_search_step(UavSearchFsm f, const VehicleObservation& vehicle,
                                         std::span<const Epc> reads, double dt) {
  if (!(dt > 0.0)) fail(ErrorKind::kDomain, "dt must be > 0");
  std::vector<BehaviorEvent> events;
  auto& p = f.progress;
  const auto& bp = p.params;
  p.phase_elapsed_s += dt;

  switch (f.phase) {
    case UavPhase::kCruise:
    case UavPhase::kDescend:
    case UavPhase::kHover:
    case UavPhase::kCircle:
      if (auto epc = matching_read(p, reads)) {
        credit(p, *epc, events);
        // Already at cruise altitude while en route: move straight on.
        if (f.phase == UavPhase::kCruise) {
          next_uav_waypoint(f);
        } else {
          enter_uav(f, UavPhase::kAscend);
        }
        return {std::move(f), p.directive, std::move(events)};
      }
      break;
    default:
      break;
  }

  switch (f.phase) {
    case UavPhase::kIdle:
      enter_uav(f, UavPhase::kTakeoff);
      break;
    case UavPhase::kTakeoff:
      if (vehicle.setpoint_reached) {
        enter_uav(f, p.waypoints.empty() ? UavPhase::kLand : UavPhase::kCruise);
      }
      break;
    case UavPhase::kCruise:
      if (horizontal_distance(vehicle.measured.position(), p.waypoints[p.current].position) <=
          bp.arrival_tol_m) {
        events.push_back({BehaviorEventKind::kWaypointReached, p.current, std::nullopt});
        enter_uav(f, UavPhase::kDescend);
      }
      break;
    case UavPhase::kDescend:
      if (vehicle.setpoint_reached) enter_uav(f, UavPhase::kHover);
      break;
    case UavPhase::kHover:
      if (elapsed(p.phase_elapsed_s, bp.hover_s)) enter_uav(f, UavPhase::kCircle);
      break;
    case UavPhase::kCircle:
      if (elapsed(p.phase_elapsed_s, bp.circle_duration_s())) enter_uav(f, UavPhase::kAscend);
      break;
    case UavPhase::kAscend:
      if (vehicle.setpoint_reached) {
        if (!p.found_current) {
          events.push_back({BehaviorEventKind::kSearchAbandoned, p.current, std::nullopt});
        }
        next_uav_waypoint(f);
      }
      break;
    case UavPhase::kLand:
      if (vehicle.setpoint_reached) {
        f.phase = UavPhase::kDone;
        events.push_back({BehaviorEventKind::kMissionDone, p.current, std::nullopt});
      }
      break;
    case UavPhase::kDone:
      break;
  }
  return {std::move(f), p.directive, std::move(events)};
}

StepResult<UgvSearchFsm> ugv_search_step(UgvSearchFsm f, const VehicleObservation& vehicle,
                                         std::span<const Epc> reads, double dt, Rng& rng) {
  if (!(dt > 0.0)) fail(ErrorKind::kDomain, "dt must be > 0");
  std::vector<BehaviorEvent> events;
  auto& p = f.progress;
  const auto& bp = p.params;
  p.phase_elapsed_s += dt;
  const bool searching = f.phase == UgvPhase::kDwell || f.phase == UgvPhase::kRetryOut ||
                         f.phase == UgvPhase::kRetryBack;
  if (searching) f.retry_elapsed_s += f.phase == UgvPhase::kDwell ? 0.0 : dt;

  if (f.phase == UgvPhase::kDrive || searching) {
    if (auto epc = matching_read(p, reads)) {
      credit(p, *epc, events);
      next_ugv_waypoint(f);
      return {std::move(f), p.directive, std::move(events)};
    }
  }

  if ((f.phase == UgvPhase::kRetryOut || f.phase == UgvPhase::kRetryBack) &&
      elapsed(f.retry_elapsed_s, bp.ugv_retry_budget_s)) {
    events.push_back({BehaviorEventKind::kSearchAbandoned, p.current, std::nullopt});
    next_ugv_waypoint(f);
    return {std::move(f), p.directive, std::move(events)};
  }

  switch (f.phase) {
    case UgvPhase::kIdle:
      if (p.waypoints.empty()) {
        enter_ugv(f, UgvPhase::kStop);
      } else {
        enter_ugv(f, UgvPhase::kDrive);
      }
      break;
    case UgvPhase::kDrive:
      if (horizontal_distance(vehicle.measured.position(), p.waypoints[p.current].position) <=
          bp.arrival_tol_m) {
        events.push_back({BehaviorEventKind::kWaypointReached, p.current, std::nullopt});
        enter_ugv(f, UgvPhase::kDwell);
      }
      break;
    case UgvPhase::kDwell:
      if (elapsed(p.phase_elapsed_s, bp.ugv_dwell_s)) {
        f.retry_elapsed_s = 0.0;
        enter_ugv(f, UgvPhase::kRetryOut, &rng);
      }
      break;
    case UgvPhase::kRetryOut:
      if (vehicle.setpoint_reached) enter_ugv(f, UgvPhase::kRetryBack);
      break;
    case UgvPhase::kRetryBack:
      if (vehicle.setpoint_reached) enter_ugv(f, UgvPhase::kRetryOut, &rng);
      break;
    case UgvPhase::kStop:
      if (vehicle.setpoint_reached) {
        f.phase = UgvPhase::kDone;
        events.push_back({BehaviorEventKind::kMissionDone, p.current, std::nullopt});
      }
      break;
    case UgvPhase::kDone:
      break;
  }
  return {std::move(f), p.directive, std::move(events)};
}

double polygon_area(std::span<const Vec3> poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec3& p = poly[i];
    const Vec3& q = poly[(i + 1) % poly.size()];
    a += p.e * q.n - q.e * p.n;
  }
  return 0.5 * a;
}

bool point_in_polygon(Vec3 pt, std::span<const Vec3> poly) {
  constexpr double kEdgeEps = 1e-9;
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec3& a = poly[i];
    const Vec3& b = poly[j];
    // Points on an edge count as inside.
    const double cr = (b.e - a.e) * (pt.n - a.n) - (b.n - a.n) * (pt.e - a.e);
    if (std::abs(cr) <= kEdgeEps * std::max(1.0, std::hypot(b.e - a.e, b.n - a.n)) &&
        pt.e >= std::min(a.e, b.e) - kEdgeEps && pt.e <= std::max(a.e, b.e) + kEdgeEps &&
        pt.n >= std::min(a.n, b.n) - kEdgeEps && pt.n <= std::max(a.n, b.n) + kEdgeEps) {
      return true;
    }
    if ((a.n > pt.n) != (b.n > pt.n) &&
        pt.e < (b.e - a.e) * (pt.n - a.n) / (b.n - a.n) + a.e) {
      inside = !inside;
    }
  }
  return inside;
}

std::vector<Vec3> waypoints_from_area(std::span<const Vec3> poly, double spacing_m) {
  if (poly.size() < 3) fail(ErrorKind::kValidation, "search area needs at least 3 vertices");
  if (!(spacing_m > 0.0)) fail(ErrorKind::kValidation, "waypoint spacing must be > 0");
  const double area = polygon_area(poly);
  if (std::abs(area) < 1e-9) fail(ErrorKind::kValidation, "search area has zero area");

  double min_e = poly[0].e, max_e = poly[0].e, min_n = poly[0].n, max_n = poly[0].n;
  for (const auto& v : poly) {
    min_e = std::min(min_e, v.e);
    max_e = std::max(max_e, v.e);
    min_n = std::min(min_n, v.n);
    max_n = std::max(max_n, v.n);
  }
  const auto count = [&](double extent) {
    return static_cast<int>(std::floor(extent / spacing_m + 1e-9)) + 1;
  };
  const int cols = count(max_e - min_e);
  const int rows = count(max_n - min_n);

  if (cols == 1 && rows == 1) {
    // Degenerate grid: the area centroid.
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec3& p = poly[i];
      const Vec3& q = poly[(i + 1) % poly.size()];
      const double c = p.e * q.n - q.e * p.n;
      cx += (p.e + q.e) * c;
      cy += (p.n + q.n) * c;
    }
    return {Vec3{cx / (6.0 * area), cy / (6.0 * area), 0.0}};
  }

  const double off_e = (max_e - min_e - (cols - 1) * spacing_m) / 2.0;
  const double off_n = (max_n - min_n - (rows - 1) * spacing_m) / 2.0;
  std::vector<Vec3> out;
  for (int r = 0; r < rows; ++r) {
    for (int k = 0; k < cols; ++k) {
      const int c = r % 2 == 0 ? k : cols - 1 - k;
      const Vec3 p{min_e + off_e + c * spacing_m, min_n + off_n + r * spacing_m, 0.0};
      if (point_in_polygon(p, poly)) out.push_back(p);
    }
  }
  if (out.empty()) fail(ErrorKind::kValidation, "no grid point falls inside the search area");
  return out;
}

}  // namespace rfidsim
