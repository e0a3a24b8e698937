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

#include "core/json_io.hpp"

#include <algorithm>
#include <cstdio>

namespace rfidsim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_object(const Json& j, std::string_view context) {
  if (!j.is_object()) fail(ErrorKind::kParse, std::string(context) + " must be a JSON object");
}

std::string hex(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  char buf[3];
  for (auto b : bytes) {
    std::snprintf(buf, sizeof buf, "%02x", b);
    out += buf;
  }
  return out;
}

}  // namespace

void check_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                std::string_view context) {
  require_object(j, context);
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(ErrorKind::kParse, "unknown key '" + key + "' in " + std::string(context));
    }
  }
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("invalid JSON: ") + e.what());
  }
}

void to_json(Json& j, const Epc& e) { j = e.to_hex(); }
void from_json(const Json& j, Epc& e) {
  if (!j.is_string()) fail(ErrorKind::kParse, "EPC must be a hex string");
  e = Epc::from_hex(j.get<std::string>());
}

void to_json(Json& j, const GeoPoint& p) { j = Json{{"lat", p.lat}, {"lon", p.lon}, {"alt", p.alt}}; }
void from_json(const Json& j, GeoPoint& p) {
  check_keys(j, {"lat", "lon", "alt"}, "geo point");
  if (!j.contains("lat") || !j.contains("lon")) {
    fail(ErrorKind::kParse, "geo point needs lat and lon");
  }
  p = {};
  read_opt(j, "lat", p.lat);
  read_opt(j, "lon", p.lon);
  read_opt(j, "alt", p.alt);
  validate(p);
}

void to_json(Json& j, VehicleType t) { j = std::string(to_string(t)); }
void from_json(const Json& j, VehicleType& t) { t = vehicle_type_from_string(j.get<std::string>()); }
void to_json(Json& j, MissionMode m) { j = std::string(to_string(m)); }
void from_json(const Json& j, MissionMode& m) { m = mission_mode_from_string(j.get<std::string>()); }
void to_json(Json& j, MissionStatus s) { j = std::string(to_string(s)); }
void to_json(Json& j, TagKind k) { j = std::string(to_string(k)); }
void from_json(const Json& j, TagKind& k) { k = tag_kind_from_string(j.get<std::string>()); }

void to_json(Json& j, const BehaviorParams& p) {
  j = Json{{"cruise_alt_m", p.cruise_alt_m},
           {"search_alt_m", p.search_alt_m},
           {"hover_s", p.hover_s},
           {"circle_radius_m", p.circle_radius_m},
           {"circle_arc_deg", p.circle_arc_deg},
           {"circle_speed_mps", p.circle_speed_mps},
           {"arrival_tol_m", p.arrival_tol_m},
           {"ugv_dwell_s", p.ugv_dwell_s},
           {"ugv_retry_budget_s", p.ugv_retry_budget_s},
           {"ugv_backoff_m", p.ugv_backoff_m},
           {"ugv_retry_acceptance_m", p.ugv_retry_acceptance_m}};
}

void from_json(const Json& j, BehaviorParams& p) {
  check_keys(j,
             {"cruise_alt_m", "search_alt_m", "hover_s", "circle_radius_m", "circle_arc_deg",
              "circle_speed_mps", "arrival_tol_m", "ugv_dwell_s", "ugv_retry_budget_s",
              "ugv_backoff_m", "ugv_retry_acceptance_m"},
             "behavior");
  read_opt(j, "cruise_alt_m", p.cruise_alt_m);
  read_opt(j, "search_alt_m", p.search_alt_m);
  read_opt(j, "hover_s", p.hover_s);
  read_opt(j, "circle_radius_m", p.circle_radius_m);
  read_opt(j, "circle_arc_deg", p.circle_arc_deg);
  read_opt(j, "circle_speed_mps", p.circle_speed_mps);
  read_opt(j, "arrival_tol_m", p.arrival_tol_m);
  read_opt(j, "ugv_dwell_s", p.ugv_dwell_s);
  read_opt(j, "ugv_retry_budget_s", p.ugv_retry_budget_s);
  read_opt(j, "ugv_backoff_m", p.ugv_backoff_m);
  read_opt(j, "ugv_retry_acceptance_m", p.ugv_retry_acceptance_m);
}

void to_json(Json& j, const LinkConfig& c) {
  j = Json{{"tx_power_dbm", c.tx_power_dbm},
           {"frequency_hz", c.frequency_hz},
           {"reader_gain_dbi", c.reader_gain_dbi},
           {"patch_gain_db", c.patch_gain_db},
           {"tag_dipole_gain_dbi", c.tag_dipole_gain_dbi},
           {"polarization_mode",
            c.polarization_mode == PolarizationMode::kFixed ? "fixed" : "angle"},
           {"polarization_loss_db", c.polarization_loss_db},
           {"polarization_loss_cap_db", c.polarization_loss_cap_db},
           {"excess_loss_db", c.excess_loss_db},
           {"sensor_threshold_dbm", c.sensor_threshold_dbm},
           {"id_threshold_dbm", c.id_threshold_dbm},
           {"logistic_slope_db", c.logistic_slope_db},
           {"beam_exponent", c.beam_exponent},
           {"shadowing_sigma_db", c.shadowing_sigma_db}};
}

void from_json(const Json& j, LinkConfig& c) {
  check_keys(j,
             {"tx_power_dbm", "frequency_hz", "reader_gain_dbi", "patch_gain_db",
              "tag_dipole_gain_dbi", "polarization_mode", "polarization_loss_db",
              "polarization_loss_cap_db", "excess_loss_db", "sensor_threshold_dbm",
              "id_threshold_dbm", "logistic_slope_db", "beam_exponent", "shadowing_sigma_db"},
             "link");
  read_opt(j, "tx_power_dbm", c.tx_power_dbm);
  read_opt(j, "frequency_hz", c.frequency_hz);
  read_opt(j, "reader_gain_dbi", c.reader_gain_dbi);
  read_opt(j, "patch_gain_db", c.patch_gain_db);
  read_opt(j, "tag_dipole_gain_dbi", c.tag_dipole_gain_dbi);
  std::string mode;
  read_opt(j, "polarization_mode", mode);
  if (mode == "fixed") {
    c.polarization_mode = PolarizationMode::kFixed;
  } else if (mode == "angle") {
    c.polarization_mode = PolarizationMode::kAngle;
  } else if (!mode.empty()) {
    fail(ErrorKind::kParse, "polarization_mode must be 'fixed' or 'angle'");
  }
  read_opt(j, "polarization_loss_db", c.polarization_loss_db);
  read_opt(j, "polarization_loss_cap_db", c.polarization_loss_cap_db);
  read_opt(j, "excess_loss_db", c.excess_loss_db);
  read_opt(j, "sensor_threshold_dbm", c.sensor_threshold_dbm);
  read_opt(j, "id_threshold_dbm", c.id_threshold_dbm);
  read_opt(j, "logistic_slope_db", c.logistic_slope_db);
  read_opt(j, "beam_exponent", c.beam_exponent);
  read_opt(j, "shadowing_sigma_db", c.shadowing_sigma_db);
}

void to_json(Json& j, const GpsModel& m) {
  j = Json{{"bias_sigma_m", m.bias_sigma_m}, {"noise_sigma_m", m.noise_sigma_m}};
}
void from_json(const Json& j, GpsModel& m) {
  check_keys(j, {"bias_sigma_m", "noise_sigma_m"}, "gps");
  read_opt(j, "bias_sigma_m", m.bias_sigma_m);
  read_opt(j, "noise_sigma_m", m.noise_sigma_m);
}
void to_json(Json& j, const BaroModel& m) {
  j = Json{{"bias_sigma_m", m.bias_sigma_m}, {"noise_sigma_m", m.noise_sigma_m}};
}
void from_json(const Json& j, BaroModel& m) {
  check_keys(j, {"bias_sigma_m", "noise_sigma_m"}, "baro");
  read_opt(j, "bias_sigma_m", m.bias_sigma_m);
  read_opt(j, "noise_sigma_m", m.noise_sigma_m);
}

void to_json(Json& j, const Environment& e) {
  j = Json{{"soil_moisture",
            {{"base", e.soil_moisture.base},
             {"gradient_east", e.soil_moisture.gradient_east},
             {"gradient_north", e.soil_moisture.gradient_north}}},
           {"ambient_temp_c", e.ambient_temp_c},
           {"water_conductivity_us_cm", e.water_conductivity_us_cm},
           {"light_lux", e.light_lux}};
}

void from_json(const Json& j, Environment& e) {
  check_keys(j, {"soil_moisture", "ambient_temp_c", "water_conductivity_us_cm", "light_lux"},
             "environment");
  if (auto it = j.find("soil_moisture"); it != j.end()) {
    check_keys(*it, {"base", "gradient_east", "gradient_north"}, "soil_moisture");
    read_opt(*it, "base", e.soil_moisture.base);
    read_opt(*it, "gradient_east", e.soil_moisture.gradient_east);
    read_opt(*it, "gradient_north", e.soil_moisture.gradient_north);
  }
  read_opt(j, "ambient_temp_c", e.ambient_temp_c);
  read_opt(j, "water_conductivity_us_cm", e.water_conductivity_us_cm);
  read_opt(j, "light_lux", e.light_lux);
}

void to_json(Json& j, const SensorCalibration& c) {
  j = Json{{"r_dry_ohm", c.r_dry_ohm}, {"r_sat_ohm", c.r_sat_ohm}, {"theta_sat", c.theta_sat}};
}
void from_json(const Json& j, SensorCalibration& c) {
  check_keys(j, {"r_dry_ohm", "r_sat_ohm", "theta_sat"}, "calibration");
  read_opt(j, "r_dry_ohm", c.r_dry_ohm);
  read_opt(j, "r_sat_ohm", c.r_sat_ohm);
  read_opt(j, "theta_sat", c.theta_sat);
}

void to_json(Json& j, const ChargeConfig& c) { j = Json{{"charge_required_s", c.charge_required_s}}; }
void from_json(const Json& j, ChargeConfig& c) {
  check_keys(j, {"charge_required_s"}, "charge");
  read_opt(j, "charge_required_s", c.charge_required_s);
}

void to_json(Json& j, const MissionWaypoint& w) {
  j = Json{{"lat", w.position.lat}, {"lon", w.position.lon}, {"alt", w.position.alt}};
  if (w.expected) j["expected"] = *w.expected;
}

void from_json(const Json& j, MissionWaypoint& w) {
  check_keys(j, {"lat", "lon", "alt", "expected"}, "waypoint");
  Json geo = j;
  geo.erase("expected");
  w.position = geo.get<GeoPoint>();
  w.expected.reset();
  if (auto it = j.find("expected"); it != j.end() && !it->is_null()) w.expected = it->get<Epc>();
}

void from_json(const Json& j, MissionRequest& r) {
  check_keys(j,
             {"name", "vehicle", "mode", "origin", "waypoints", "area", "params", "whitelist",
              "seed"},
             "mission request");
  read_opt(j, "name", r.name);
  read_opt(j, "vehicle", r.vehicle);
  read_opt(j, "mode", r.mode);
  read_opt(j, "origin", r.origin);
  read_opt(j, "waypoints", r.waypoints);
  if (auto it = j.find("area"); it != j.end() && !it->is_null()) {
    check_keys(*it, {"polygon", "spacing_m"}, "area");
    AreaPlan a;
    read_opt(*it, "polygon", a.polygon);
    read_opt(*it, "spacing_m", a.spacing_m);
    r.area = a;
  }
  read_opt(j, "params", r.params);
  read_opt(j, "whitelist", r.whitelist);
  read_opt(j, "seed", r.seed);
}

void to_json(Json& j, const MissionRecord& r) {
  j = Json{{"id", r.id},
           {"name", r.name},
           {"vehicle", r.vehicle},
           {"mode", r.mode},
           {"origin", r.origin},
           {"waypoints", r.waypoints},
           {"params", r.params},
           {"whitelist", r.whitelist},
           {"seed", r.seed},
           {"status", r.status}};
}

void from_json(const Json& j, MissionRecord& r) {
  check_keys(j,
             {"id", "name", "vehicle", "mode", "origin", "waypoints", "params", "whitelist",
              "seed", "status"},
             "mission record");
  read_opt(j, "id", r.id);
  read_opt(j, "name", r.name);
  read_opt(j, "vehicle", r.vehicle);
  read_opt(j, "mode", r.mode);
  read_opt(j, "origin", r.origin);
  read_opt(j, "waypoints", r.waypoints);
  read_opt(j, "params", r.params);
  std::vector<Epc> wl;
  read_opt(j, "whitelist", wl);
  r.whitelist = {wl.begin(), wl.end()};
  read_opt(j, "seed", r.seed);
  std::string status = "planned";
  read_opt(j, "status", status);
  bool known = false;
  for (auto s : {MissionStatus::kPlanned, MissionStatus::kRunning, MissionStatus::kDone,
                 MissionStatus::kAborted}) {
    if (to_string(s) == status) {
      r.status = s;
      known = true;
    }
  }
  if (!known) fail(ErrorKind::kParse, "unknown mission status: " + status);
}

void to_json(Json& j, const TagObservation& o) {
  j = Json{{"mission", o.mission},
           {"epc", o.epc},
           {"sensor_kind", o.sensor_kind},
           {"sensor_value_milli", o.sensor_value_milli},
           {"rssi_dbm", o.rssi_dbm_x10 / 10.0},
           {"position", o.vehicle_position},
           {"time_ms", o.time_ms}};
}

void to_json(Json& j, const TimedBehaviorEvent& e) {
  j = Json{{"kind", std::string(to_string(e.kind))}, {"waypoint", e.waypoint}, {"time_ms", e.time_ms}};
  if (e.epc) j["epc"] = *e.epc;
}

void to_json(Json& j, const MissionView& v) {
  j = Json{{"id", v.id},
           {"status", v.status},
           {"phase", v.phase},
           {"path", v.path},
           {"observations", v.observations},
           {"behavior_events", v.behavior_events},
           {"telemetry_frames", v.telemetry_frames},
           {"commands_sent", v.commands_sent},
           {"seq_gaps", v.seq_gaps},
           {"last_time_ms", v.last_time_ms}};
}

Json frame_to_json(std::span<const std::uint8_t> bytes) {
  const auto d = decode_frame(bytes);
  if (!d.ok()) {
    return Json{{"error", std::string(to_string(d.error()))}, {"raw", hex(bytes)}};
  }
  const Frame& f = d.frame();
  Json j{{"msg", std::string(message_name(f.msg))}, {"seq", f.seq}};
  std::visit(Overloaded{
                 [&](const Heartbeat& h) {
                   j["vehicle_type"] = h.vehicle_type;
                   j["fsm_state"] = h.fsm_state;
                 },
                 [&](const GpsPosition& g) {
                   j["lat"] = from_1e7(g.lat_1e7);
                   j["lon"] = from_1e7(g.lon_1e7);
                   j["alt"] = g.alt_mm / 1000.0;
                   j["time_ms"] = g.time_ms;
                 },
                 [&](const TagRead& t) {
                   j["epc"] = Epc(t.epc);
                   j["rssi_dbm"] = t.rssi_dbm_x10 / 10.0;
                   j["sensor_kind"] = static_cast<TagKind>(t.sensor_kind);
                   j["sensor_value_milli"] = t.sensor_value_milli;
                   j["time_ms"] = t.time_ms;
                 },
                 [&](const Command& c) {
                   j["cmd"] = std::string(to_string(c.cmd));
                   j["lat"] = from_1e7(c.lat_1e7);
                   j["lon"] = from_1e7(c.lon_1e7);
                   j["alt"] = c.alt_mm / 1000.0;
                   j["param_cm"] = c.param_cm;
                 },
                 [&](const Ack& a) {
                   j["seq_acked"] = a.seq_acked;
                   static constexpr const char* kResults[] = {"accepted", "completed", "rejected"};
                   j["result"] = a.result < 3 ? kResults[a.result] : "unknown";
                 },
             },
             f.msg);
  return j;
}

Json log_record_to_json(std::size_t index, const LogRecord& rec) {
  Json j = frame_to_json(rec.frame);
  j["index"] = index;
  j["recv_ms"] = rec.recv_ms;
  const bool uplink = j.value("msg", "") == "COMMAND";
  j["direction"] = uplink ? "uplink" : "downlink";
  return j;
}

}  // namespace rfidsim
