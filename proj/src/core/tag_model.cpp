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

#include "core/tag_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "core/error.hpp"

namespace rfidsim {

Epc Epc::from_hex(std::string_view hex) {
  if (hex.size() != 24) fail(ErrorKind::kParse, "EPC must be 24 hex digits: " + std::string(hex));
  auto nibble = [&](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    const char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (l >= 'a' && l <= 'f') return static_cast<std::uint8_t>(l - 'a' + 10);
    fail(ErrorKind::kParse, "EPC contains a non-hex digit: " + std::string(hex));
  };
  Bytes b{};
  for (std::size_t i = 0; i < b.size(); ++i) {
    b[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return Epc(b);
}

std::string Epc::to_hex() const {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  std::string s;
  s.reserve(24);
  for (auto v : bytes_) {
    s.push_back(kDigits[v >> 4]);
    s.push_back(kDigits[v & 0xF]);
  }
  return s;
}

std::string_view to_string(TagKind kind) {
  switch (kind) {
    case TagKind::kIdOnly: return "id_only";
    case TagKind::kHydroMoisture: return "hydro_moisture";
    case TagKind::kConductivity: return "conductivity";
    case TagKind::kLight: return "light";
    case TagKind::kTemperature: return "temperature";
  }
  return "unknown";
}

TagKind tag_kind_from_string(std::string_view s) {
  for (auto k : {TagKind::kIdOnly, TagKind::kHydroMoisture, TagKind::kConductivity,
                 TagKind::kLight, TagKind::kTemperature}) {
    if (to_string(k) == s) return k;
  }
  fail(ErrorKind::kParse, "unknown tag kind: " + std::string(s));
}

void SensorCalibration::validate() const {
  if (!(r_sat_ohm > 0.0) || !(r_dry_ohm > r_sat_ohm) || !(theta_sat > 0.0)) {
    fail(ErrorKind::kConfig, "sensor calibration needs r_dry > r_sat > 0 and theta_sat > 0");
  }
}

double MoistureField::at(double east, double north, double theta_sat) const {
  return std::clamp(base + gradient_east * east + gradient_north * north, 0.0, theta_sat);
}

double moisture_to_resistance(double theta, const SensorCalibration& cal) {
  cal.validate();
  if (!(theta >= 0.0 && theta <= cal.theta_sat)) {
    fail(ErrorKind::kDomain, "moisture outside [0, theta_sat]");
  }
  if (theta == cal.theta_sat) return cal.r_sat_ohm;
  return cal.r_dry_ohm * std::pow(cal.r_sat_ohm / cal.r_dry_ohm, theta / cal.theta_sat);
}

double resistance_to_moisture(double ohms, const SensorCalibration& cal) {
  cal.validate();
  if (!(ohms >= cal.r_sat_ohm && ohms <= cal.r_dry_ohm)) {
    fail(ErrorKind::kDomain, "resistance outside [r_sat, r_dry]");
  }
  return cal.theta_sat * std::log(ohms / cal.r_dry_ohm) / std::log(cal.r_sat_ohm / cal.r_dry_ohm);
}

SensorValue sense(const Tag& tag, const Environment& env, const SensorCalibration& cal) {
  auto milli = [](double v) { return static_cast<std::int64_t>(std::llround(v * 1000.0)); };
  SensorValue out;
  out.kind = tag.kind;
  switch (tag.kind) {
    case TagKind::kIdOnly:
      fail(ErrorKind::kUnsupported, "ID-only tag " + tag.epc.to_hex() + " has no sensor");
    case TagKind::kHydroMoisture: {
      const double theta =
          env.soil_moisture.at(tag.pose.position.east, tag.pose.position.north, cal.theta_sat);
      out.value_milli = milli(moisture_to_resistance(theta, cal));
      out.unit = "ohm";
      out.temperature_milli_c = milli(env.ambient_temp_c);
      break;
    }
    case TagKind::kConductivity:
      out.value_milli = milli(env.water_conductivity_us_cm);
      out.unit = "uS/cm";
      break;
    case TagKind::kLight:
      out.value_milli = milli(env.light_lux);
      out.unit = "lux";
      break;
    case TagKind::kTemperature:
      out.value_milli = milli(env.ambient_temp_c);
      out.unit = "degC";
      break;
  }
  return out;
}

Tag powered_state_update(Tag tag, double received_dbm, double dt_s, const LinkConfig& link,
                         const ChargeConfig& charge) {
  if (!(dt_s > 0.0)) fail(ErrorKind::kDomain, "dt must be > 0");
  if (received_dbm >= link.sensor_threshold_dbm) {
    // Snap to the requirement so that N steps of dt reach it despite rounding.
    const double next = tag.charge_s + dt_s;
    tag.charge_s = next >= charge.charge_required_s - 1e-9 ? charge.charge_required_s : next;
  } else {
    tag.charge_s = 0.0;
  }
  return tag;
}

}  // namespace rfidsim
