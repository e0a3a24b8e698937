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

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "core/rng.hpp"
#include "core/tag_model.hpp"
#include "core/vehicle.hpp"

namespace rfidsim {

struct BehaviorParams {
  double cruise_alt_m = 3.5;
  double search_alt_m = 1.5;
  double hover_s = 15.0;
  double circle_radius_m = 2.0;
  double circle_arc_deg = 270.0;
  double circle_speed_mps = 0.5;
  double arrival_tol_m = 1.0;
  double ugv_dwell_s = 15.0;
  double ugv_retry_budget_s = 60.0;
  double ugv_backoff_m = 3.0;
  double ugv_retry_acceptance_m = 0.5;

  void validate() const;
  double circle_duration_s() const;
};

struct Waypoint {
  Vec3 position;
  std::optional<Epc> expected;
};

// High-level maneuver behind a directive; each maps onto one COMMAND.
enum class Maneuver : std::uint8_t {
  kNone,
  kTakeoff,
  kNavTo,
  kChangeAlt,
  kCircle,
  kLand,
};

// What the behavior wants the vehicle doing. A new revision means a new
// command must be sent; holds keep the previous revision.
struct Directive {
  Maneuver maneuver = Maneuver::kNone;
  Setpoint setpoint = HoldSetpoint{};
  std::uint32_t revision = 0;
};

struct VehicleObservation {
  EnuPose measured;               // GPS horizontal, barometric altitude
  bool setpoint_reached = false;  // autopilot reported completion of the last command
};

enum class BehaviorEventKind : std::uint8_t {
  kWaypointReached,
  kTagFound,
  kSearchAbandoned,
  kMissionDone,
};

std::string_view to_string(BehaviorEventKind k);

struct BehaviorEvent {
  BehaviorEventKind kind = BehaviorEventKind::kWaypointReached;
  std::size_t waypoint = 0;
  std::optional<Epc> epc;
};

enum class UavPhase : std::uint8_t {
  kIdle,
  kTakeoff,
  kCruise,
  kDescend,
  kHover,
  kCircle,
  kAscend,
  kLand,
  kDone,
};

enum class UgvPhase : std::uint8_t {
  kIdle,
  kDrive,
  kDwell,
  kRetryOut,
  kRetryBack,
  kStop,
  kDone,
};

std::string_view to_string(UavPhase p);
std::string_view to_string(UgvPhase p);

// State shared by both search charts.
struct SearchProgress {
  std::vector<Waypoint> waypoints;
  BehaviorParams params;
  Vec3 home;
  std::size_t current = 0;
  double phase_elapsed_s = 0.0;
  bool found_current = false;
  std::set<Epc> credited;
  Directive directive;
};

struct UavSearchFsm {
  UavPhase phase = UavPhase::kIdle;
  SearchProgress progress;
};

struct UgvSearchFsm {
  UgvPhase phase = UgvPhase::kIdle;
  SearchProgress progress;
  double retry_elapsed_s = 0.0;
};

template <class Fsm>
struct StepResult {
  Fsm fsm;
  Directive directive;
  std::vector<BehaviorEvent> events;
};

UavSearchFsm make_uav_search(std::vector<Waypoint> waypoints, const BehaviorParams& params,
                             Vec3 home);
UgvSearchFsm make_ugv_search(std::vector<Waypoint> waypoints, const BehaviorParams& params,
                             Vec3 home);

StepResult<UavSearchFsm> uav_search_step(UavSearchFsm fsm, const VehicleObservation& vehicle,
                                         std::span<const Epc> read_events, double dt);

StepResult<UgvSearchFsm> ugv_search_step(UgvSearchFsm fsm, const VehicleObservation& vehicle,
                                         std::span<const Epc> read_events, double dt, Rng& rng);

// Boustrophedon coverage of a simple polygon (east/north vertices, u ignored).
std::vector<Vec3> waypoints_from_area(std::span<const Vec3> polygon, double spacing_m);

double polygon_area(std::span<const Vec3> polygon);
bool point_in_polygon(Vec3 p, std::span<const Vec3> polygon);

}  // namespace rfidsim
