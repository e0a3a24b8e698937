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
#include <variant>

#include "core/world.hpp"

namespace rfidsim {

enum class VehicleType : std::uint8_t { kUav = 0, kUgv = 1 };

std::string_view to_string(VehicleType t);
VehicleType vehicle_type_from_string(std::string_view s);

struct UavLimits {
  double cruise_speed = 1.5;
  double descend_speed = 0.25;
  double ascend_speed = 2.5;
  double circle_speed = 0.5;  // tangential
};

struct UavState {
  EnuPose pose;
  UavLimits limits;
  // Circle tracking: a carrot point advancing along the circle.
  bool circling = false;
  Vec3 circle_center;
  double circle_radius = 0.0;
  double circle_bearing = 0.0;
  double circle_swept_rad = 0.0;
};

struct UgvLimits {
  double speed = 1.0;
  double min_turn_radius = 1.0;
  double arrival_tol = 0.3;
};

struct UgvState {
  EnuPose pose;
  UgvLimits limits;
  double speed_now = 0.0;
  // Driving straight to open distance to a target inside the turning circle.
  bool clearing = false;
};

struct GotoSetpoint {
  Vec3 target;
  // Arrival radius; negative means the vehicle default.
  double acceptance_m = -1.0;
};

struct CircleSetpoint {
  Vec3 center;  // u is the circle altitude
  double radius_m = 2.0;
  double arc_deg = 360.0;
};

struct HoldSetpoint {
  double duration_s = 0.0;
};

using Setpoint = std::variant<GotoSetpoint, CircleSetpoint, HoldSetpoint>;

UavState step_uav(UavState state, const Setpoint& sp, double dt);
UgvState step_ugv(UgvState state, const Setpoint& sp, double dt);

// Whether the state satisfies a goto/circle setpoint (holds always do).
bool uav_reached(const UavState& state, const Setpoint& sp);
bool ugv_reached(const UgvState& state, const Setpoint& sp);

double wrap_angle(double a);

}  // namespace rfidsim
