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

#include <initializer_list>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "core/behavior.hpp"
#include "core/error.hpp"
#include "core/mission_control.hpp"
#include "core/rf_link.hpp"
#include "core/tag_model.hpp"
#include "core/telemetry.hpp"
#include "core/world.hpp"

namespace rfidsim {

using Json = nlohmann::json;

// Throws kParse naming the first key of j not in allowed.
void check_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                std::string_view context);

// Overwrites out with j[key] when present; kParse on a type mismatch.
template <class T>
void read_opt(const Json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  try {
    out = it->template get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("field '") + key + "': " + e.what());
  }
}

// Parses text, mapping library errors onto kParse.
Json parse_json(std::string_view text);

void to_json(Json& j, const Epc& e);
void from_json(const Json& j, Epc& e);
void to_json(Json& j, const GeoPoint& p);
void from_json(const Json& j, GeoPoint& p);
void to_json(Json& j, VehicleType t);
void from_json(const Json& j, VehicleType& t);
void to_json(Json& j, MissionMode m);
void from_json(const Json& j, MissionMode& m);
void to_json(Json& j, MissionStatus s);
void to_json(Json& j, TagKind k);
void from_json(const Json& j, TagKind& k);

void to_json(Json& j, const BehaviorParams& p);
void from_json(const Json& j, BehaviorParams& p);
void to_json(Json& j, const LinkConfig& c);
void from_json(const Json& j, LinkConfig& c);
void to_json(Json& j, const GpsModel& m);
void from_json(const Json& j, GpsModel& m);
void to_json(Json& j, const BaroModel& m);
void from_json(const Json& j, BaroModel& m);
void to_json(Json& j, const Environment& e);
void from_json(const Json& j, Environment& e);
void to_json(Json& j, const SensorCalibration& c);
void from_json(const Json& j, SensorCalibration& c);
void to_json(Json& j, const ChargeConfig& c);
void from_json(const Json& j, ChargeConfig& c);

void to_json(Json& j, const MissionWaypoint& w);
void from_json(const Json& j, MissionWaypoint& w);
void from_json(const Json& j, MissionRequest& r);
void to_json(Json& j, const MissionRecord& r);
void from_json(const Json& j, MissionRecord& r);
void to_json(Json& j, const TagObservation& o);
void to_json(Json& j, const TimedBehaviorEvent& e);
void to_json(Json& j, const MissionView& v);

// Structured rendering of one wire frame (decode errors included).
Json frame_to_json(std::span<const std::uint8_t> frame);
// One line of a mission event stream.
Json log_record_to_json(std::size_t index, const LogRecord& rec);

}  // namespace rfidsim
