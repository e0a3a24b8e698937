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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "core/behavior.hpp"
#include "core/rng.hpp"
#include "core/telemetry.hpp"
#include "core/world.hpp"

namespace rfidsim {

using MissionId = std::uint64_t;

enum class MissionStatus : std::uint8_t { kPlanned, kRunning, kDone, kAborted };
enum class MissionMode : std::uint8_t { kAutonomous, kManual };

std::string_view to_string(MissionStatus s);
std::string_view to_string(MissionMode m);
MissionMode mission_mode_from_string(std::string_view s);

struct MissionWaypoint {
  GeoPoint position;
  std::optional<Epc> expected;
  friend bool operator==(const MissionWaypoint&, const MissionWaypoint&) = default;
};

struct AreaPlan {
  std::vector<GeoPoint> polygon;
  double spacing_m = 10.0;
};

struct MissionRequest {
  std::string name;
  VehicleType vehicle = VehicleType::kUav;
  MissionMode mode = MissionMode::kAutonomous;
  GeoPoint origin;
  std::vector<MissionWaypoint> waypoints;
  std::optional<AreaPlan> area;
  BehaviorParams params;
  // Known tags beyond the waypoint targets.
  std::vector<Epc> whitelist;
  std::uint64_t seed = 0;
};

struct MissionRecord {
  MissionId id = 0;
  std::string name;
  VehicleType vehicle = VehicleType::kUav;
  MissionMode mode = MissionMode::kAutonomous;
  GeoPoint origin;
  std::vector<MissionWaypoint> waypoints;
  BehaviorParams params;
  std::set<Epc> whitelist;
  std::uint64_t seed = 0;
  MissionStatus status = MissionStatus::kPlanned;
};

struct TagObservation {
  MissionId mission = 0;
  Epc epc;
  std::uint8_t sensor_kind = 0;
  std::int32_t sensor_value_milli = 0;
  std::int16_t rssi_dbm_x10 = 0;
  GeoPoint vehicle_position;
  std::uint32_t time_ms = 0;
  friend bool operator==(const TagObservation&, const TagObservation&) = default;
};

struct TimedBehaviorEvent {
  BehaviorEventKind kind = BehaviorEventKind::kWaypointReached;
  std::size_t waypoint = 0;
  std::optional<Epc> epc;
  std::uint32_t time_ms = 0;
  friend bool operator==(const TimedBehaviorEvent&, const TimedBehaviorEvent&) = default;
};

// Persisted log record: receive timestamp plus one wire frame.
struct LogRecord {
  std::uint64_t recv_ms = 0;
  Bytes frame;
  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

Bytes serialize_log(std::span<const LogRecord> records);
// Throws kParse on a malformed log.
std::vector<LogRecord> parse_log(std::span<const std::uint8_t> bytes);

// Derived state of one mission; a pure function of its record and log.
struct MissionView {
  MissionId id = 0;
  MissionStatus status = MissionStatus::kPlanned;
  std::string phase;
  std::vector<GeoPoint> path;
  std::vector<TagObservation> observations;
  std::vector<TimedBehaviorEvent> behavior_events;
  std::uint32_t telemetry_frames = 0;
  std::uint32_t commands_sent = 0;
  std::uint32_t seq_gaps = 0;
  std::uint32_t last_time_ms = 0;
  friend bool operator==(const MissionView&, const MissionView&) = default;
};

struct AuditEntry {
  MissionId mission = 0;
  std::string message;
};

// Outcome of the most recent command as reported by the vehicle.
struct CommandStatus {
  std::optional<std::uint32_t> seq;
  bool accepted = false;
  bool completed = false;
  bool rejected = false;
};

// Ground control: mission store, GCS-side mission FSM and the event log.
// All public members are thread-safe.
class MissionControl {
 public:
  MissionControl() = default;
  // Persists records and logs under data_dir.
  explicit MissionControl(std::filesystem::path data_dir);

  MissionRecord create_mission(const MissionRequest& request);
  void start_mission(MissionId id);
  void abort_mission(MissionId id, const std::string& reason);

  // Persists the frame, then steps the mission FSM; returns encoded COMMAND
  // frames to transmit. Frames for unknown missions are audited and ignored.
  std::vector<Bytes> record_telemetry(MissionId id, std::uint64_t recv_ms,
                                      std::span<const std::uint8_t> frame);

  // Manual-mode command from a pilot or UI; returns the encoded uplink frame.
  Bytes submit_manual_command(MissionId id, std::uint64_t recv_ms, const Command& cmd);

  MissionRecord record(MissionId id) const;
  MissionStatus status(MissionId id) const;
  // Observations from index `from` on.
  std::vector<TagObservation> observations(MissionId id, std::size_t from) const;
  MissionView query_mission(MissionId id) const;
  std::vector<MissionRecord> list_missions() const;
  std::vector<LogRecord> log(MissionId id) const;
  CommandStatus last_command(MissionId id) const;
  std::vector<AuditEntry> audit() const;

  // Blocks until the mission log grows past `from` records, the mission
  // leaves the running state, or the timeout expires. Returns new records.
  std::vector<LogRecord> wait_for_records(MissionId id, std::size_t from,
                                          std::chrono::milliseconds timeout) const;

  // Rebuilds mission state from a log; also checks that replayed commands
  // equal the logged ones (throws kState on divergence).
  static MissionView replay(const MissionRecord& record, std::span<const LogRecord> log);

 private:
  struct Mission;

  Mission& find(MissionId id);
  const Mission& find(MissionId id) const;
  void append(Mission& m, std::uint64_t recv_ms, Bytes frame);
  std::vector<Bytes> mission_fsm_step(Mission& m, std::uint64_t recv_ms, const Frame& frame);
  void persist_record(const Mission& m) const;

  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::map<MissionId, std::shared_ptr<Mission>> missions_;
  std::vector<AuditEntry> audit_;
  MissionId next_id_ = 1;
  std::optional<std::filesystem::path> data_dir_;
};

// Fixed-point wire conversions.
std::int32_t to_1e7(double deg);
double from_1e7(std::int32_t v);
// Wire altitudes are heights above the mission origin.
GeoPoint geo_from_wire(const GeoPoint& origin, std::int32_t lat, std::int32_t lon, std::int32_t alt_mm);

}  // namespace rfidsim
