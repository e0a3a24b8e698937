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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "core/rf_link.hpp"

namespace rfidsim {

// 12-byte EPC identity.
class Epc {
 public:
  using Bytes = std::array<std::uint8_t, 12>;

  Epc() = default;
  explicit Epc(const Bytes& b) : bytes_(b) {}

  // 24 hex digits, case-insensitive. Throws kParse otherwise.
  static Epc from_hex(std::string_view hex);
  std::string to_hex() const;

  const Bytes& bytes() const { return bytes_; }

  friend auto operator<=>(const Epc&, const Epc&) = default;

 private:
  Bytes bytes_{};
};

// Wire values are fixed; see docs/protocol.md.
enum class TagKind : std::uint8_t {
  kIdOnly = 0,
  kHydroMoisture = 1,
  kConductivity = 2,
  kLight = 3,
  kTemperature = 4,
};

std::string_view to_string(TagKind kind);
TagKind tag_kind_from_string(std::string_view s);

struct Tag {
  Epc epc;
  TagKind kind = TagKind::kIdOnly;
  AntennaPose pose;
  double mount_height_m = 0.0;
  double charge_s = 0.0;
  bool whitelisted = true;
};

struct SensorCalibration {
  double r_dry_ohm = 50000.0;
  double r_sat_ohm = 500.0;
  double theta_sat = 0.45;

  void validate() const;
};

// Volumetric soil moisture as a clamped planar field.
struct MoistureField {
  double base = 0.2;
  double gradient_east = 0.0;   // per meter
  double gradient_north = 0.0;  // per meter

  double at(double east, double north, double theta_sat) const;
};

struct Environment {
  MoistureField soil_moisture;
  double ambient_temp_c = 22.0;
  double water_conductivity_us_cm = 500.0;
  double light_lux = 20000.0;
};

struct SensorValue {
  TagKind kind = TagKind::kIdOnly;
  std::int64_t value_milli = 0;
  std::string_view unit;
  // Hydro tags also report the companion chip's temperature.
  std::optional<std::int64_t> temperature_milli_c;
};

struct ChargeConfig {
  double charge_required_s = 1.0;
};

// r_dry * (r_sat / r_dry)^(theta / theta_sat). Throws kDomain outside [0, theta_sat].
double moisture_to_resistance(double theta, const SensorCalibration& cal);
double resistance_to_moisture(double ohms, const SensorCalibration& cal);

// Throws kUnsupported for ID-only tags.
SensorValue sense(const Tag& tag, const Environment& env, const SensorCalibration& cal);

// Fully passive: any interval below the sensor threshold drops accumulated charge.
Tag powered_state_update(Tag tag, double received_dbm, double dt_s, const LinkConfig& link,
                         const ChargeConfig& charge);

inline bool sensor_ready(const Tag& tag, const ChargeConfig& charge) {
  return tag.kind != TagKind::kIdOnly && tag.charge_s >= charge.charge_required_s;
}

// Singulation threshold for a tag kind: sensor tags need the higher level.
inline double participation_threshold_dbm(TagKind kind, const LinkConfig& link) {
  return kind == TagKind::kIdOnly ? link.id_threshold_dbm : link.sensor_threshold_dbm;
}

}  // namespace rfidsim
