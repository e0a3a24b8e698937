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

#include "core/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "core/error.hpp"
#include "core/json_io.hpp"

namespace rfidsim {

namespace {

constexpr GeoPoint kDefaultOrigin{40.0, -75.0, 0.0};

std::vector<Vec3> square_field(double half) {
  return {{-half, -half, 0.0}, {half, -half, 0.0}, {half, half, 0.0}, {-half, half, 0.0}};
}

Epc preset_epc(int n) {
  char buf[25];
  std::snprintf(buf, sizeof buf, "300833b2ddd90140%08x", n);
  return Epc::from_hex(buf);
}

TagSpec tag_at(int n, TagKind kind, double e, double north, double yaw_deg,
               std::optional<double> mount = std::nullopt) {
  TagSpec t;
  t.epc = preset_epc(n);
  t.kind = kind;
  t.position = {e, north, mount.value_or(default_mount_height_m(kind))};
  t.dipole_yaw_deg = yaw_deg;
  return t;
}

ScenarioConfig base(std::string name, VehicleType vehicle, MissionMode mode) {
  ScenarioConfig c;
  c.name = name;
  c.preset = std::move(name);
  c.vehicle = vehicle;
  c.mode = mode;
  c.origin = kDefaultOrigin;
  c.field = square_field(20.0);
  c.home = {0.0, -18.0, 0.0};
  return c;
}

ScriptStep hover_read(const TagSpec& t, double alt) {
  ScriptStep s;
  s.op = ScriptOp::kHoverRead;
  s.tag = t.epc;
  s.alt_m = alt;
  return s;
}

ScriptStep drive_read(const TagSpec& t) {
  ScriptStep s;
  s.op = ScriptOp::kDriveRead;
  s.tag = t.epc;
  return s;
}

ScriptStep go(Vec3 p) {
  ScriptStep s;
  s.op = ScriptOp::kGoto;
  s.position = p;
  return s;
}

ScriptStep land() {
  ScriptStep s;
  s.op = ScriptOp::kLand;
  return s;
}

ScenarioConfig uav_id_field() {
  auto c = base("uav_id_field", VehicleType::kUav, MissionMode::kAutonomous);
  c.tags = {tag_at(1, TagKind::kIdOnly, -10, -10, 0), tag_at(2, TagKind::kIdOnly, 10, -10, 60),
            tag_at(3, TagKind::kIdOnly, 0, 0, 120), tag_at(4, TagKind::kIdOnly, -10, 10, 30),
            tag_at(5, TagKind::kIdOnly, 10, 10, 90)};
  return c;
}

ScenarioConfig uav_sensor_field() {
  auto c = base("uav_sensor_field", VehicleType::kUav, MissionMode::kManual);
  c.tags = {tag_at(11, TagKind::kHydroMoisture, -10, 0, 0),
            tag_at(12, TagKind::kHydroMoisture, 10, 0, 45),
            tag_at(13, TagKind::kHydroMoisture, 0, 12, 90)};
  c.environment.soil_moisture = {0.18, 0.004, 0.002};
  for (const auto& t : c.tags) c.script.push_back(hover_read(t, 0.5));
  c.script.push_back(land());
  return c;
}

ScenarioConfig ugv_field(std::string name, TagKind kind, int first_epc) {
  auto c = base(std::move(name), VehicleType::kUgv, MissionMode::kAutonomous);
  c.tags = {tag_at(first_epc, kind, -10, 0, 0), tag_at(first_epc + 1, kind, 10, 0, 45),
            tag_at(first_epc + 2, kind, 0, 12, 90)};
  for (const auto& t : c.tags) c.script.push_back(drive_read(t));
  c.script.push_back(land());
  return c;
}

ScenarioConfig tag_deploy_wall() {
  auto c = base("tag_deploy_wall", VehicleType::kUav, MissionMode::kManual);
  TagSpec placed = tag_at(31, TagKind::kTemperature, 0, 19.5, 0);
  c.script.push_back(go({0.0, 15.0, 3.5}));
  ScriptStep place;
  place.op = ScriptOp::kPlaceTag;
  place.position = {0.0, 19.5, 3.0};
  place.placed = placed;
  c.script.push_back(place);
  c.script.push_back(go({0.0, 12.0, 3.5}));
  ScriptStep reread;
  reread.op = ScriptOp::kHoverRead;
  reread.tag = placed.epc;
  reread.alt_m = 3.5;
  c.script.push_back(reread);
  c.script.push_back(land());
  return c;
}

ScenarioConfig water_quality() {
  auto c = base("water_quality", VehicleType::kUav, MissionMode::kManual);
  c.environment.water_conductivity_us_cm = 1500.0;
  c.tags = {tag_at(41, TagKind::kConductivity, 5, 5, 0, 0.0)};
  c.script = {hover_read(c.tags[0], 0.5), land()};
  return c;
}

ScenarioConfig infrastructure() {
  auto c = base("infrastructure", VehicleType::kUav, MissionMode::kManual);
  c.environment.soil_moisture = {0.12, 0.0, 0.0};
  c.tags = {tag_at(51, TagKind::kHydroMoisture, 0, 19.8, 90, 2.0)};
  c.script = {hover_read(c.tags[0], 2.5), land()};
  return c;
}

ScenarioConfig tree_canopy() {
  auto c = base("tree_canopy", VehicleType::kUav, MissionMode::kManual);
  c.environment.light_lux = 30000.0;
  c.tags = {tag_at(61, TagKind::kLight, -6, 8, 0, 3.0)};
  c.script = {hover_read(c.tags[0], 3.5), land()};
  return c;
}

const std::map<std::string, std::function<ScenarioConfig()>, std::less<>>& presets() {
  static const std::map<std::string, std::function<ScenarioConfig()>, std::less<>> kPresets = {
      {"uav_id_field", uav_id_field},
      {"uav_sensor_field", uav_sensor_field},
      {"ugv_sensor_field", [] { return ugv_field("ugv_sensor_field", TagKind::kHydroMoisture, 21); }},
      {"ugv_id_field", [] { return ugv_field("ugv_id_field", TagKind::kIdOnly, 24); }},
      {"tag_deploy_wall", tag_deploy_wall},
      {"water_quality", water_quality},
      {"infrastructure", infrastructure},
      {"tree_canopy", tree_canopy},
  };
  return kPresets;
}

// --- JSON ------------------------------------------------------------------

Vec3 vec_from_json(const Json& j, std::string_view what) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3) {
    fail(ErrorKind::kParse, std::string(what) + " must be [east, north] or [east, north, up]");
  }
  try {
    return {j[0].get<double>(), j[1].get<double>(), j.size() == 3 ? j[2].get<double>() : 0.0};
  } catch (const nlohmann::json::exception&) {
    fail(ErrorKind::kParse, std::string(what) + " must hold numbers");
  }
}

Json vec_to_json(Vec3 v, bool with_up) {
  return with_up ? Json::array({v.e, v.n, v.u}) : Json::array({v.e, v.n});
}

TagSpec tag_from_json(const Json& j) {
  check_keys(j, {"epc", "kind", "position", "mount_height_m", "dipole_yaw_deg", "whitelisted"},
             "tag");
  if (!j.contains("epc")) fail(ErrorKind::kParse, "tag needs an epc");
  TagSpec t;
  t.epc = j.at("epc").get<Epc>();
  read_opt(j, "kind", t.kind);
  if (j.contains("position")) t.position = vec_from_json(j.at("position"), "tag position");
  t.position.u = default_mount_height_m(t.kind);
  read_opt(j, "mount_height_m", t.position.u);
  read_opt(j, "dipole_yaw_deg", t.dipole_yaw_deg);
  read_opt(j, "whitelisted", t.whitelisted);
  return t;
}

Json tag_to_json(const TagSpec& t) {
  return Json{{"epc", t.epc},
              {"kind", t.kind},
              {"position", vec_to_json(t.position, false)},
              {"mount_height_m", t.position.u},
              {"dipole_yaw_deg", t.dipole_yaw_deg},
              {"whitelisted", t.whitelisted}};
}

ScriptStep step_from_json(const Json& j) {
  check_keys(j, {"op", "tag", "position", "alt_m", "timeout_s", "standoff_m"}, "script step");
  std::string op;
  read_opt(j, "op", op);
  ScriptStep s;
  bool known = false;
  for (auto o : {ScriptOp::kHoverRead, ScriptOp::kDriveRead, ScriptOp::kPlaceTag, ScriptOp::kGoto,
                 ScriptOp::kLand}) {
    if (to_string(o) == op) {
      s.op = o;
      known = true;
    }
  }
  if (!known) fail(ErrorKind::kParse, "unknown script op '" + op + "'");
  if (auto it = j.find("tag"); it != j.end()) {
    if (s.op == ScriptOp::kPlaceTag) {
      s.placed = tag_from_json(*it);
    } else {
      s.tag = it->get<Epc>();
    }
  }
  if (j.contains("position")) s.position = vec_from_json(j.at("position"), "step position");
  read_opt(j, "alt_m", s.alt_m);
  read_opt(j, "timeout_s", s.timeout_s);
  read_opt(j, "standoff_m", s.standoff_m);
  return s;
}

Json step_to_json(const ScriptStep& s) {
  Json j{{"op", std::string(to_string(s.op))}};
  switch (s.op) {
    case ScriptOp::kHoverRead:
      j["tag"] = *s.tag;
      j["alt_m"] = s.alt_m;
      j["timeout_s"] = s.timeout_s;
      break;
    case ScriptOp::kDriveRead:
      j["tag"] = *s.tag;
      j["standoff_m"] = s.standoff_m;
      j["timeout_s"] = s.timeout_s;
      break;
    case ScriptOp::kPlaceTag:
      j["tag"] = tag_to_json(*s.placed);
      j["position"] = vec_to_json(s.position, true);
      break;
    case ScriptOp::kGoto:
      j["position"] = vec_to_json(s.position, true);
      break;
    case ScriptOp::kLand:
      break;
  }
  return j;
}

void sim_from_json(const Json& j, SimSettings& s) {
  check_keys(j,
             {"tick_s", "inventory_every_ticks", "initial_q", "transaction_s", "read_holdoff_s",
              "heartbeat_period_s", "max_mission_s", "drop_prob", "hover_jitter_sigma_m",
              "hover_jitter_tau_s", "ugv_reader_height_m", "place_tolerance_m"},
             "sim");
  read_opt(j, "tick_s", s.tick_s);
  read_opt(j, "inventory_every_ticks", s.inventory_every_ticks);
  read_opt(j, "initial_q", s.initial_q);
  read_opt(j, "transaction_s", s.transaction_s);
  read_opt(j, "read_holdoff_s", s.read_holdoff_s);
  read_opt(j, "heartbeat_period_s", s.heartbeat_period_s);
  read_opt(j, "max_mission_s", s.max_mission_s);
  read_opt(j, "drop_prob", s.drop_prob);
  read_opt(j, "hover_jitter_sigma_m", s.hover_jitter_sigma_m);
  read_opt(j, "hover_jitter_tau_s", s.hover_jitter_tau_s);
  read_opt(j, "ugv_reader_height_m", s.ugv_reader_height_m);
  read_opt(j, "place_tolerance_m", s.place_tolerance_m);
}

Json sim_to_json(const SimSettings& s) {
  return Json{{"tick_s", s.tick_s},
              {"inventory_every_ticks", s.inventory_every_ticks},
              {"initial_q", s.initial_q},
              {"transaction_s", s.transaction_s},
              {"read_holdoff_s", s.read_holdoff_s},
              {"heartbeat_period_s", s.heartbeat_period_s},
              {"max_mission_s", s.max_mission_s},
              {"drop_prob", s.drop_prob},
              {"hover_jitter_sigma_m", s.hover_jitter_sigma_m},
              {"hover_jitter_tau_s", s.hover_jitter_tau_s},
              {"ugv_reader_height_m", s.ugv_reader_height_m},
              {"place_tolerance_m", s.place_tolerance_m}};
}

}  // namespace

double default_mount_height_m(TagKind kind) { return kind == TagKind::kIdOnly ? 0.0 : 0.4; }

std::string_view to_string(ScriptOp op) {
  switch (op) {
    case ScriptOp::kHoverRead: return "hover_read";
    case ScriptOp::kDriveRead: return "drive_read";
    case ScriptOp::kPlaceTag: return "place_tag";
    case ScriptOp::kGoto: return "goto";
    case ScriptOp::kLand: return "land";
  }
  return "unknown";
}

void SimSettings::validate() const {
  const auto need = [](bool ok, const char* what) {
    if (!ok) fail(ErrorKind::kConfig, what);
  };
  need(tick_s > 0.0 && tick_s <= 1.0, "sim.tick_s must be in (0, 1]");
  need(inventory_every_ticks >= 1, "sim.inventory_every_ticks must be >= 1");
  need(initial_q >= 0 && initial_q <= kMaxQ, "sim.initial_q must be in [0, 15]");
  need(transaction_s >= 0.0, "sim.transaction_s must be >= 0");
  need(read_holdoff_s >= 0.0, "sim.read_holdoff_s must be >= 0");
  need(heartbeat_period_s > 0.0, "sim.heartbeat_period_s must be > 0");
  need(max_mission_s > 0.0 && max_mission_s < 4.0e6, "sim.max_mission_s must be in (0, 4e6)");
  need(drop_prob >= 0.0 && drop_prob <= 1.0, "sim.drop_prob must be in [0, 1]");
  need(hover_jitter_sigma_m >= 0.0, "sim.hover_jitter_sigma_m must be >= 0");
  need(hover_jitter_tau_s > 0.0, "sim.hover_jitter_tau_s must be > 0");
  need(ugv_reader_height_m >= 0.0, "sim.ugv_reader_height_m must be >= 0");
  need(place_tolerance_m > 0.0, "sim.place_tolerance_m must be > 0");
}

void ScenarioConfig::validate() const {
  if (field.size() < 3 || std::abs(polygon_area(field)) < 1e-9) {
    fail(ErrorKind::kValidation, "field polygon needs at least 3 vertices and non-zero area");
  }
  rfidsim::validate(origin);
  link.validate();
  behavior.validate();
  calibration.validate();
  sim.validate();
  if (!(charge.charge_required_s > 0.0)) fail(ErrorKind::kConfig, "charge_required_s must be > 0");
  for (double s : {gps.bias_sigma_m, gps.noise_sigma_m, baro.bias_sigma_m, baro.noise_sigma_m}) {
    if (!(s >= 0.0)) fail(ErrorKind::kConfig, "GPS/baro sigmas must be >= 0");
  }
  for (double v : {uav.cruise_speed, uav.descend_speed, uav.ascend_speed, ugv.speed,
                   ugv.min_turn_radius}) {
    if (!(v > 0.0)) fail(ErrorKind::kConfig, "vehicle speeds and turn radius must be > 0");
  }
  if (!(ugv.arrival_tol >= 0.0)) fail(ErrorKind::kConfig, "ugv.arrival_tol must be >= 0");
  if (!point_in_polygon(home, field)) fail(ErrorKind::kValidation, "home lies outside the field");

  std::set<Epc> seen;
  const auto check_tag = [&](const TagSpec& t, bool check_position) {
    if (!seen.insert(t.epc).second) {
      fail(ErrorKind::kValidation, "duplicate EPC " + t.epc.to_hex());
    }
    if (!(t.position.u >= 0.0)) {
      fail(ErrorKind::kValidation, "tag " + t.epc.to_hex() + " has a negative mount height");
    }
    if (check_position && !point_in_polygon(t.position, field)) {
      fail(ErrorKind::kValidation, "tag " + t.epc.to_hex() + " lies outside the field");
    }
  };
  for (const auto& t : tags) check_tag(t, true);

  if (waypoint_source == WaypointSource::kExplicit && waypoints.empty()) {
    fail(ErrorKind::kValidation, "explicit waypoint list is empty");
  }
  if (waypoint_source == WaypointSource::kArea && !(area_spacing_m > 0.0)) {
    fail(ErrorKind::kValidation, "area spacing must be > 0");
  }

  if (mode != MissionMode::kManual) return;
  std::set<Epc> known;
  for (const auto& t : tags) known.insert(t.epc);
  for (const auto& s : script) {
    const bool uav_only = s.op == ScriptOp::kHoverRead || s.op == ScriptOp::kPlaceTag;
    if (uav_only && vehicle != VehicleType::kUav) {
      fail(ErrorKind::kValidation, std::string(to_string(s.op)) + " needs a UAV");
    }
    if (s.op == ScriptOp::kDriveRead && vehicle != VehicleType::kUgv) {
      fail(ErrorKind::kValidation, "drive_read needs a UGV");
    }
    if (s.op == ScriptOp::kHoverRead || s.op == ScriptOp::kDriveRead) {
      if (!s.tag || known.count(*s.tag) == 0) {
        fail(ErrorKind::kValidation, std::string(to_string(s.op)) + " names an unknown tag");
      }
      if (!(s.timeout_s > 0.0)) fail(ErrorKind::kValidation, "step timeout must be > 0");
      if (s.op == ScriptOp::kHoverRead && !(s.alt_m > 0.0)) {
        fail(ErrorKind::kValidation, "hover_read altitude must be > 0");
      }
      if (s.op == ScriptOp::kDriveRead && !(s.standoff_m >= 0.0)) {
        fail(ErrorKind::kValidation, "drive_read standoff must be >= 0");
      }
    }
    if (s.op == ScriptOp::kPlaceTag) {
      if (!s.placed) fail(ErrorKind::kValidation, "place_tag needs a tag");
      check_tag(*s.placed, false);
      if (!point_in_polygon(s.position, field)) {
        fail(ErrorKind::kValidation, "place_tag target lies outside the field");
      }
      known.insert(s.placed->epc);
    }
    if ((s.op == ScriptOp::kGoto || s.op == ScriptOp::kPlaceTag) &&
        !point_in_polygon(s.position, field)) {
      fail(ErrorKind::kValidation, "script target lies outside the field");
    }
  }
}

MissionRequest mission_request(const ScenarioConfig& cfg, std::uint64_t seed) {
  MissionRequest r;
  r.name = cfg.name;
  r.vehicle = cfg.vehicle;
  r.mode = cfg.mode;
  r.origin = cfg.origin;
  r.params = cfg.behavior;
  r.seed = seed;
  const auto geo = [&](Vec3 p) { return geodetic_from_enu(cfg.origin, EnuPose::at({p.e, p.n, 0.0})); };
  for (const auto& t : cfg.tags) {
    if (t.whitelisted) r.whitelist.push_back(t.epc);
  }
  for (const auto& s : cfg.script) {
    if (s.placed && s.placed->whitelisted) r.whitelist.push_back(s.placed->epc);
  }

  WaypointSource source = cfg.waypoint_source;
  if (cfg.mode == MissionMode::kManual) {
    // The pilot flies the script; the plan only marks the tags for display.
    for (const auto& t : cfg.tags) r.waypoints.push_back({geo(t.position), t.epc});
    for (const auto& s : cfg.script) {
      if (s.op == ScriptOp::kPlaceTag) r.waypoints.push_back({geo(s.position), s.placed->epc});
    }
    if (r.waypoints.empty()) r.waypoints.push_back({geo(cfg.home), std::nullopt});
    return r;
  }
  if (source == WaypointSource::kTags) {
    // Pre-recorded tag locations; with none recorded, cover the whole field.
    for (const auto& t : cfg.tags) {
      if (t.whitelisted) r.waypoints.push_back({geo(t.position), t.epc});
    }
    if (r.waypoints.empty()) source = WaypointSource::kArea;
  }
  if (source == WaypointSource::kExplicit) {
    for (const auto& w : cfg.waypoints) r.waypoints.push_back({geo(w.position), w.expected});
  }
  if (source == WaypointSource::kArea) {
    AreaPlan a;
    for (const auto& v : cfg.field) a.polygon.push_back(geo(v));
    a.spacing_m = cfg.area_spacing_m;
    r.area = a;
  }
  return r;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : presets()) out.push_back(name);
  return out;
}

ScenarioConfig apply_preset(std::string_view name) {
  const auto& all = presets();
  auto it = all.find(name);
  if (it == all.end()) {
    std::string known;
    for (const auto& [n, _] : all) known += (known.empty() ? "" : ", ") + n;
    fail(ErrorKind::kNotFound, "unknown preset '" + std::string(name) + "'; known: " + known);
  }
  return it->second();
}

ScenarioConfig scenario_from_json(std::string_view text) {
  const Json j = parse_json(text);
  check_keys(j,
             {"name", "preset", "vehicle", "mode", "origin", "field", "home", "tags", "waypoints",
              "link", "gps", "baro", "behavior", "uav", "ugv", "environment", "calibration",
              "charge", "sim", "script", "seed"},
             "scenario");
  ScenarioConfig c;
  c.field = square_field(20.0);
  if (auto it = j.find("preset"); it != j.end() && !it->is_null()) {
    c = apply_preset(it->get<std::string>());
  }
  read_opt(j, "name", c.name);
  read_opt(j, "vehicle", c.vehicle);
  read_opt(j, "mode", c.mode);
  read_opt(j, "origin", c.origin);
  if (auto it = j.find("field"); it != j.end()) {
    if (!it->is_array()) fail(ErrorKind::kParse, "field must be an array of [east, north]");
    c.field.clear();
    for (const auto& v : *it) c.field.push_back(vec_from_json(v, "field vertex"));
  }
  if (j.contains("home")) c.home = vec_from_json(j.at("home"), "home");
  c.home.u = 0.0;
  if (auto it = j.find("tags"); it != j.end()) {
    if (!it->is_array()) fail(ErrorKind::kParse, "tags must be an array");
    c.tags.clear();
    for (const auto& t : *it) c.tags.push_back(tag_from_json(t));
  }
  if (auto it = j.find("waypoints"); it != j.end()) {
    check_keys(*it, {"source", "points", "spacing_m"}, "waypoints");
    std::string src = "tags";
    read_opt(*it, "source", src);
    if (src == "tags") {
      c.waypoint_source = WaypointSource::kTags;
    } else if (src == "explicit") {
      c.waypoint_source = WaypointSource::kExplicit;
    } else if (src == "area") {
      c.waypoint_source = WaypointSource::kArea;
    } else {
      fail(ErrorKind::kParse, "waypoints.source must be tags, explicit or area");
    }
    read_opt(*it, "spacing_m", c.area_spacing_m);
    if (auto pts = it->find("points"); pts != it->end()) {
      c.waypoints.clear();
      for (const auto& p : *pts) {
        check_keys(p, {"position", "expected"}, "waypoint");
        Waypoint w;
        w.position = vec_from_json(p.at("position"), "waypoint position");
        w.position.u = 0.0;
        if (p.contains("expected")) w.expected = p.at("expected").get<Epc>();
        c.waypoints.push_back(w);
      }
    }
  }
  if (auto it = j.find("link"); it != j.end()) {
    LinkConfig link = c.link;
    from_json(*it, link);
    // Without an explicit excess loss the link is re-anchored to the 1.5 m sensor range.
    c.link = it->contains("excess_loss_db") ? link : calibrated(link);
  }
  read_opt(j, "gps", c.gps);
  read_opt(j, "baro", c.baro);
  read_opt(j, "behavior", c.behavior);
  if (auto it = j.find("uav"); it != j.end()) {
    check_keys(*it, {"cruise_speed", "descend_speed", "ascend_speed"}, "uav");
    read_opt(*it, "cruise_speed", c.uav.cruise_speed);
    read_opt(*it, "descend_speed", c.uav.descend_speed);
    read_opt(*it, "ascend_speed", c.uav.ascend_speed);
  }
  if (auto it = j.find("ugv"); it != j.end()) {
    check_keys(*it, {"speed", "min_turn_radius", "arrival_tol"}, "ugv");
    read_opt(*it, "speed", c.ugv.speed);
    read_opt(*it, "min_turn_radius", c.ugv.min_turn_radius);
    read_opt(*it, "arrival_tol", c.ugv.arrival_tol);
  }
  read_opt(j, "environment", c.environment);
  read_opt(j, "calibration", c.calibration);
  read_opt(j, "charge", c.charge);
  if (auto it = j.find("sim"); it != j.end()) sim_from_json(*it, c.sim);
  if (auto it = j.find("script"); it != j.end()) {
    if (!it->is_array()) fail(ErrorKind::kParse, "script must be an array");
    c.script.clear();
    for (const auto& s : *it) c.script.push_back(step_from_json(s));
  }
  read_opt(j, "seed", c.seed);
  c.validate();
  return c;
}

std::string scenario_to_json(const ScenarioConfig& c) {
  Json j;
  j["name"] = c.name;
  if (!c.preset.empty()) j["preset"] = c.preset;
  j["vehicle"] = c.vehicle;
  j["mode"] = c.mode;
  j["origin"] = c.origin;
  j["field"] = Json::array();
  for (const auto& v : c.field) j["field"].push_back(vec_to_json(v, false));
  j["home"] = vec_to_json(c.home, false);
  j["tags"] = Json::array();
  for (const auto& t : c.tags) j["tags"].push_back(tag_to_json(t));
  Json wp;
  switch (c.waypoint_source) {
    case WaypointSource::kTags: wp["source"] = "tags"; break;
    case WaypointSource::kExplicit: {
      wp["source"] = "explicit";
      wp["points"] = Json::array();
      for (const auto& w : c.waypoints) {
        Json p{{"position", vec_to_json(w.position, false)}};
        if (w.expected) p["expected"] = *w.expected;
        wp["points"].push_back(p);
      }
      break;
    }
    case WaypointSource::kArea:
      wp["source"] = "area";
      wp["spacing_m"] = c.area_spacing_m;
      break;
  }
  j["waypoints"] = wp;
  j["link"] = c.link;
  j["gps"] = c.gps;
  j["baro"] = c.baro;
  j["behavior"] = c.behavior;
  j["uav"] = {{"cruise_speed", c.uav.cruise_speed},
              {"descend_speed", c.uav.descend_speed},
              {"ascend_speed", c.uav.ascend_speed}};
  j["ugv"] = {{"speed", c.ugv.speed},
              {"min_turn_radius", c.ugv.min_turn_radius},
              {"arrival_tol", c.ugv.arrival_tol}};
  j["environment"] = c.environment;
  j["calibration"] = c.calibration;
  j["charge"] = c.charge;
  j["sim"] = sim_to_json(c.sim);
  j["script"] = Json::array();
  for (const auto& s : c.script) j["script"].push_back(step_to_json(s));
  j["seed"] = c.seed;
  return j.dump(2);
}

}  // namespace rfidsim
