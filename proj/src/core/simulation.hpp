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
#include <deque>
#include <optional>
#include <vector>

#include "core/mission_control.hpp"
#include "core/scenario.hpp"

namespace rfidsim {

// Lifecycle of the command the onboard autopilot is executing.
enum class AutopilotState : std::uint8_t { kIdle = 0, kExecuting = 1, kHolding = 2, kLanded = 3 };

// The world plus the onboard stack (autopilot, reader, radio) of one vehicle,
// attached to a running mission of a MissionControl. Commands reach the vehicle
// through the mission log, so autonomous and manual missions share one path.
class Simulation {
 public:
  Simulation(const ScenarioConfig& cfg, std::uint64_t seed, MissionControl& mc, MissionId mission);

  // Advances one tick. Returns false once the mission is over; a mission that
  // exceeds the configured time limit is aborted.
  bool step();

  std::uint64_t time_ms() const { return tick_ * tick_ms_; }
  const std::vector<Tag>& tags() const { return tags_; }
  EnuPose true_pose() const;
  AutopilotState autopilot_state() const { return ap_state_; }
  // Tag index created by the most recent completed PLACE_TAG, if any.
  std::optional<std::size_t> last_placed() const { return last_placed_; }

 private:
  struct Active {
    Command cmd;
    std::uint32_t seq = 0;
    Setpoint setpoint;
    bool completed = false;
  };

  void receive_uplink();
  void accept(const Command& cmd, std::uint32_t seq);
  void move_vehicle();
  void run_reader();
  void report_read(std::size_t tag, const TagReadRecord& rec);
  void transmit(const Message& msg);
  AntennaPose reader_pose() const;
  Vec3 nav_offset() const;

  ScenarioConfig cfg_;
  MissionControl& mc_;
  MissionId mission_;
  std::uint64_t tick_ = 0;
  std::uint64_t tick_ms_ = 100;

  Rng gps_rng_;
  Rng baro_rng_;
  Rng inventory_rng_;
  Rng sensor_rng_;
  Rng shadow_rng_;
  Rng channel_rng_;
  Rng jitter_rng_;
  GpsSensor gps_;
  BaroSensor baro_;

  UavState uav_;
  UgvState ugv_;
  std::optional<Active> active_;
  AutopilotState ap_state_ = AutopilotState::kIdle;
  Vec3 jitter_;

  std::vector<Tag> tags_;
  std::vector<double> received_;
  std::vector<double> last_id_report_s_;
  std::vector<double> last_sensor_report_s_;
  int q_ = 2;
  struct Transaction {
    std::size_t tag = 0;
    std::uint64_t done_tick = 0;
  };
  std::optional<Transaction> transaction_;
  std::deque<TagSpec> boom_;
  std::optional<std::size_t> last_placed_;

  std::vector<Message> pending_reads_;
  std::vector<Message> pending_acks_;
  std::size_t log_cursor_ = 0;
  std::uint32_t downlink_seq_ = 0;
  bool finished_ = false;
};

}  // namespace rfidsim
