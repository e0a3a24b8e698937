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
#include <string>
#include <string_view>
#include <vector>

#include "core/behavior.hpp"
#include "core/inventory.hpp"
#include "core/mission_control.hpp"
#include "core/rf_link.hpp"
#include "core/tag_model.hpp"
#include "core/vehicle.hpp"
#include "core/world.hpp"

namespace rfidsim {

// A tag placed in the field. position.u is the mount height.
struct TagSpec {
  Epc epc;
  TagKind kind = TagKind::kIdOnly;
  Vec3 position;
  // Horizontal orientation of the tag dipole, degrees counter-clockwise from east.
  double dipole_yaw_deg = 0.0;
  bool whitelisted = true;
};

// Default mount height for a tag kind: sensor tags on stakes, ID tags on the ground.
double default_mount_height_m(TagKind kind);

enum class ScriptOp : std::uint8_t {
  kHoverRead,  // fly over a tag at cruise altitude, descend, wait for a sensor read
  kDriveRead,  // drive up to a tag, stop facing it, wait for a sensor read
  kPlaceTag,   // deposit a tag at a pose with the boom
  kGoto,
  kLand,
};

std::string_view to_string(ScriptOp op);

// One pilot action in a manual-script mission.
struct ScriptStep {
  ScriptOp op = ScriptOp::kGoto;
  std::optional<Epc> tag;     // hover_read / drive_read target
  Vec3 position;              // goto / place_tag target; u is the altitude
  double alt_m = 0.5;         // hover_read altitude
  double timeout_s = 30.0;    // read wait after arriving
  double standoff_m = 0.5;    // drive_read stopping distance
  std::optional<TagSpec> placed;  // place_tag payload
};

struct SimSettings {
  double tick_s = 0.1;
  int inventory_every_ticks = 2;
  int initial_q = 2;
  double transaction_s = 0.5;
  double read_holdoff_s = 1.0;
  double heartbeat_period_s = 1.0;
  double max_mission_s = 3600.0;
  double drop_prob = 0.0;
  // Manual-mode hover wobble: Ornstein-Uhlenbeck offset, stationary sigma.
  double hover_jitter_sigma_m = 0.15;
  double hover_jitter_tau_s = 2.0;
  double ugv_reader_height_m = 0.4;
  double place_tolerance_m = 0.5;

  void validate() const;
};

enum class WaypointSource : std::uint8_t { kTags, kExplicit, kArea };

struct ScenarioConfig {
  std::string name;
  std::string preset;
  VehicleType vehicle = VehicleType::kUav;
  MissionMode mode = MissionMode::kAutonomous;
  GeoPoint origin{40.0, -75.0, 0.0};
  std::vector<Vec3> field;
  Vec3 home;
  std::vector<TagSpec> tags;
  WaypointSource waypoint_source = WaypointSource::kTags;
  std::vector<Waypoint> waypoints;  // explicit source only
  double area_spacing_m = 10.0;     // area source only
  LinkConfig link = calibrated(LinkConfig{});
  GpsModel gps;
  BaroModel baro;
  BehaviorParams behavior;
  UavLimits uav;
  UgvLimits ugv;
  Environment environment;
  SensorCalibration calibration;
  ChargeConfig charge;
  SimSettings sim;
  std::vector<ScriptStep> script;
  std::uint64_t seed = 1;

  // Throws kConfig/kValidation on the first violated constraint.
  void validate() const;
};

// Mission plan the ground station receives for this scenario.
MissionRequest mission_request(const ScenarioConfig& cfg, std::uint64_t seed);

std::vector<std::string> preset_names();
// Throws kNotFound listing the known presets.
ScenarioConfig apply_preset(std::string_view name);

// Scenario files: an optional "preset" base overlaid with the file's fields.
ScenarioConfig scenario_from_json(std::string_view text);
std::string scenario_to_json(const ScenarioConfig& cfg);

}  // namespace rfidsim
