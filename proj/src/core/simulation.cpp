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

#include "core/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"

namespace rfidsim {

namespace {

Tag make_tag(const TagSpec& s) {
  Tag t;
  t.epc = s.epc;
  t.kind = s.kind;
  t.mount_height_m = s.position.u;
  t.whitelisted = s.whitelisted;
  t.pose.position = EnuPose::at(s.position);
  t.pose.boresight = {0.0, 0.0, 1.0};
  const double yaw = s.dipole_yaw_deg * std::numbers::pi / 180.0;
  t.pose.polarization = {std::cos(yaw), std::sin(yaw), 0.0};
  return t;
}

std::uint64_t ticks_for(double seconds, double tick_s) {
  return static_cast<std::uint64_t>(std::llround(seconds / tick_s));
}

std::int16_t rssi_x10(double dbm) {
  return static_cast<std::int16_t>(std::clamp(std::lround(dbm * 10.0), -32768L, 32767L));
}

std::int32_t clamp_i32(std::int64_t v) {
  return static_cast<std::int32_t>(std::clamp<std::int64_t>(v, INT32_MIN, INT32_MAX));
}

}  // namespace

Simulation::Simulation(const ScenarioConfig& cfg, std::uint64_t seed, MissionControl& mc,
                       MissionId mission)
    : cfg_(cfg),
      mc_(mc),
      mission_(mission),
      gps_rng_(Rng::stream(seed, "gps")),
      baro_rng_(Rng::stream(seed, "baro")),
      inventory_rng_(Rng::stream(seed, "inventory")),
      sensor_rng_(Rng::stream(seed, "sensor")),
      shadow_rng_(Rng::stream(seed, "shadowing")),
      channel_rng_(Rng::stream(seed, "channel")),
      jitter_rng_(Rng::stream(seed, "jitter")),
      gps_(cfg.gps, gps_rng_),
      baro_(cfg.baro, baro_rng_) {
  cfg_.validate();
  const double tick_ms = cfg_.sim.tick_s * 1000.0;
  if (std::abs(tick_ms - std::round(tick_ms)) > 1e-9) {
    fail(ErrorKind::kConfig, "sim.tick_s must be a whole number of milliseconds");
  }
  tick_ms_ = static_cast<std::uint64_t>(std::llround(tick_ms));
  const EnuPose start{cfg_.home.e, cfg_.home.n, 0.0, std::numbers::pi / 2.0};
  uav_.pose = start;
  uav_.limits = cfg_.uav;
  uav_.limits.circle_speed = cfg_.behavior.circle_speed_mps;
  ugv_.pose = start;
  ugv_.limits = cfg_.ugv;
  for (const auto& t : cfg_.tags) tags_.push_back(make_tag(t));
  for (const auto& s : cfg_.script) {
    if (s.op == ScriptOp::kPlaceTag) boom_.push_back(*s.placed);
  }
  received_.assign(tags_.size(), -200.0);
  last_id_report_s_.assign(tags_.size(), -1e300);
  last_sensor_report_s_.assign(tags_.size(), -1e300);
  q_ = cfg_.sim.initial_q;
}

EnuPose Simulation::true_pose() const {
  return cfg_.vehicle == VehicleType::kUav ? uav_.pose : ugv_.pose;
}

Vec3 Simulation::nav_offset() const {
  // A pilot flying by eye corrects for the navigation error; the autopilot cannot.
  if (cfg_.mode == MissionMode::kManual) return {};
  return {gps_.bias_east(), gps_.bias_north(),
          cfg_.vehicle == VehicleType::kUav ? baro_.bias() : 0.0};
}

AntennaPose Simulation::reader_pose() const {
  AntennaPose a;
  const EnuPose p = true_pose();
  if (cfg_.vehicle == VehicleType::kUav) {
    a.position = {p.east + jitter_.e, p.north + jitter_.n, p.up, p.yaw};
    a.boresight = {0.0, 0.0, -1.0};
    a.polarization = {std::cos(p.yaw), std::sin(p.yaw), 0.0};
  } else {
    a.position = {p.east, p.north, cfg_.sim.ugv_reader_height_m, p.yaw};
    a.boresight = {std::cos(p.yaw), std::sin(p.yaw), 0.0};
    a.polarization = {-std::sin(p.yaw), std::cos(p.yaw), 0.0};
  }
  return a;
}

void Simulation::transmit(const Message& msg) {
  Bytes frame = encode_frame(msg, downlink_seq_++);
  if (cfg_.sim.drop_prob > 0.0 && channel_rng_.bernoulli(cfg_.sim.drop_prob)) return;
  mc_.record_telemetry(mission_, time_ms(), frame);
}

void Simulation::receive_uplink() {
  const auto records = mc_.wait_for_records(mission_, log_cursor_, std::chrono::milliseconds(0));
  log_cursor_ += records.size();
  for (const auto& r : records) {
    const auto d = decode_frame(r.frame);
    if (!d.ok()) continue;
    const auto* cmd = std::get_if<Command>(&d.frame().msg);
    if (cmd == nullptr) continue;
    if (cfg_.sim.drop_prob > 0.0 && channel_rng_.bernoulli(cfg_.sim.drop_prob)) continue;
    accept(*cmd, d.frame().seq);
  }
}

void Simulation::accept(const Command& cmd, std::uint32_t seq) {
  const auto reject = [&] {
    pending_acks_.push_back(Ack{seq, static_cast<std::uint8_t>(AckResult::kRejected)});
  };
  const GeoPoint goal = geo_from_wire(cfg_.origin, cmd.lat_1e7, cmd.lon_1e7, cmd.alt_mm);
  const Vec3 est = enu_from_geodetic(cfg_.origin, goal).position();
  const Vec3 target = est - nav_offset();
  const double param_m = cmd.param_cm / 100.0;
  Setpoint sp;
  if (cfg_.vehicle == VehicleType::kUav) {
    switch (cmd.cmd) {
      case CommandCode::kTakeoff: {
        // Vertical climb from where the vehicle stands; lat/lon are ignored.
        const Vec3 here = uav_.pose.position();
        sp = GotoSetpoint{{here.e, here.n, target.u}, param_m};
        break;
      }
      case CommandCode::kNavTo:
      case CommandCode::kHoverAt:
        sp = GotoSetpoint{target, param_m};
        break;
      case CommandCode::kChangeAlt: {
        // Altitude only: keeps the horizontal goal of a goto in progress,
        // otherwise holds the current position. lat/lon are ignored.
        Vec3 goal = uav_.pose.position();
        if (active_) {
          if (const auto* g = std::get_if<GotoSetpoint>(&active_->setpoint)) goal = g->target;
        }
        sp = GotoSetpoint{{goal.e, goal.n, target.u}, param_m};
        break;
      }
      case CommandCode::kCircle:
        if (!(param_m > 0.0)) return reject();
        sp = CircleSetpoint{target, param_m, 360.0};
        break;
      case CommandCode::kLand: {
        // Zero lat and lon mean "land where you are".
        Vec3 spot = target;
        if (cmd.lat_1e7 == 0 && cmd.lon_1e7 == 0) spot = uav_.pose.position();
        sp = GotoSetpoint{{spot.e, spot.n, 0.0}, param_m};
        break;
      }
      case CommandCode::kPlaceTag:
        if (boom_.empty()) return reject();
        sp = GotoSetpoint{target, 0.0};
        break;
    }
  } else {
    switch (cmd.cmd) {
      case CommandCode::kNavTo:
      case CommandCode::kHoverAt:
        sp = GotoSetpoint{{target.e, target.n, 0.0}, param_m > 0.0 ? param_m : -1.0};
        break;
      case CommandCode::kLand:
        sp = HoldSetpoint{};
        break;
      default:
        return reject();
    }
  }
  if (cfg_.vehicle == VehicleType::kUav && ap_state_ == AutopilotState::kLanded &&
      cmd.cmd != CommandCode::kTakeoff) {
    return reject();
  }
  active_ = Active{cmd, seq, sp, false};
  ap_state_ = AutopilotState::kExecuting;
  pending_acks_.push_back(Ack{seq, static_cast<std::uint8_t>(AckResult::kAccepted)});
}

void Simulation::move_vehicle() {
  const double dt = cfg_.sim.tick_s;
  if (!active_) return;
  bool reached = false;
  if (cfg_.vehicle == VehicleType::kUav) {
    uav_ = step_uav(uav_, active_->setpoint, dt);
    if (active_->cmd.cmd == CommandCode::kPlaceTag) {
      const auto& g = std::get<GotoSetpoint>(active_->setpoint);
      reached = norm(uav_.pose.position() - g.target) <= cfg_.sim.place_tolerance_m;
    } else {
      reached = uav_reached(uav_, active_->setpoint);
    }
  } else {
    ugv_ = step_ugv(ugv_, active_->setpoint, dt);
    reached = ugv_reached(ugv_, active_->setpoint);
  }

  if (cfg_.mode == MissionMode::kManual && cfg_.vehicle == VehicleType::kUav &&
      uav_.pose.up > 0.0 && cfg_.sim.hover_jitter_sigma_m > 0.0) {
    // Ornstein-Uhlenbeck wobble with the configured stationary sigma.
    const double a = std::exp(-dt / cfg_.sim.hover_jitter_tau_s);
    const double s = cfg_.sim.hover_jitter_sigma_m * std::sqrt(1.0 - a * a);
    jitter_.e = a * jitter_.e + jitter_rng_.normal(0.0, s);
    jitter_.n = a * jitter_.n + jitter_rng_.normal(0.0, s);
  } else {
    jitter_ = {};
  }

  if (reached && !active_->completed) {
    active_->completed = true;
    if (active_->cmd.cmd == CommandCode::kPlaceTag) {
      TagSpec spec = boom_.front();
      boom_.pop_front();
      spec.position = uav_.pose.position();
      tags_.push_back(make_tag(spec));
      received_.push_back(-200.0);
      last_id_report_s_.push_back(-1e300);
      last_sensor_report_s_.push_back(-1e300);
      last_placed_ = tags_.size() - 1;
    }
    const bool landed = active_->cmd.cmd == CommandCode::kLand;
    ap_state_ = landed ? AutopilotState::kLanded : AutopilotState::kHolding;
    pending_acks_.push_back(Ack{active_->seq, static_cast<std::uint8_t>(AckResult::kCompleted)});
    if (landed) active_.reset();
  }
}

void Simulation::report_read(std::size_t idx, const TagReadRecord& rec) {
  const Tag& tag = tags_[idx];
  TagRead m;
  m.epc = tag.epc.bytes();
  m.rssi_dbm_x10 = rssi_x10(rec.rssi_dbm);
  m.time_ms = rec.timestamp_ms;
  if (rec.sensor) {
    m.sensor_kind = static_cast<std::uint8_t>(rec.sensor->kind);
    m.sensor_value_milli = clamp_i32(rec.sensor->value_milli);
  }
  pending_reads_.push_back(m);
  if (rec.sensor && rec.sensor->temperature_milli_c) {
    // The companion chip reports temperature in a frame of its own.
    m.sensor_kind = static_cast<std::uint8_t>(TagKind::kTemperature);
    m.sensor_value_milli = clamp_i32(*rec.sensor->temperature_milli_c);
    pending_reads_.push_back(m);
  }
  const double now_s = static_cast<double>(time_ms()) / 1000.0;
  (rec.sensor ? last_sensor_report_s_ : last_id_report_s_)[idx] = now_s;
}

void Simulation::run_reader() {
  const double dt = cfg_.sim.tick_s;
  const double now_s = static_cast<double>(time_ms()) / 1000.0;
  const auto now_ms = static_cast<std::uint32_t>(time_ms());
  const AntennaPose reader = reader_pose();
  const LinkConfig& link = cfg_.link;
  for (std::size_t i = 0; i < tags_.size(); ++i) {
    double p = received_power_dbm(reader, tags_[i].pose, link);
    if (link.shadowing_sigma_db > 0.0) p += shadow_rng_.normal(0.0, link.shadowing_sigma_db);
    received_[i] = p;
    if (tags_[i].kind != TagKind::kIdOnly) {
      tags_[i] = powered_state_update(tags_[i], p, dt, link, cfg_.charge);
    }
  }

  const auto holdoff_ok = [&](const std::vector<double>& last, std::size_t i) {
    return now_s - last[i] >= cfg_.sim.read_holdoff_s - 1e-9;
  };
  if (tick_ % static_cast<std::uint64_t>(cfg_.sim.inventory_every_ticks) == 0) {
    const InventoryRound round = run_inventory_round(tags_, received_, link, q_, inventory_rng_);
    q_ = adjust_q(q_, round.collisions(), round.idles());
    for (std::size_t idx : round.singulated) {
      // Every singulation is reported by identity; sensor tags additionally
      // get a memory transaction once charged.
      if (holdoff_ok(last_id_report_s_, idx)) {
        TagReadRecord rec;
        rec.epc = tags_[idx].epc;
        rec.rssi_dbm = received_[idx];
        rec.timestamp_ms = now_ms;
        report_read(idx, rec);
      }
      if (tags_[idx].kind != TagKind::kIdOnly && !transaction_ &&
          holdoff_ok(last_sensor_report_s_, idx) && sensor_ready(tags_[idx], cfg_.charge)) {
        transaction_ = Transaction{idx, tick_ + ticks_for(cfg_.sim.transaction_s, dt)};
      }
    }
  }

  if (transaction_ && tick_ >= transaction_->done_tick) {
    const std::size_t idx = transaction_->tag;
    transaction_.reset();
    const SensorReadContext ctx{link, cfg_.charge, cfg_.environment, cfg_.calibration};
    const auto result = read_sensor(tags_[idx].epc, tags_, received_, ctx, sensor_rng_, now_ms);
    if (const auto* rec = std::get_if<TagReadRecord>(&result)) report_read(idx, *rec);
  }
}

bool Simulation::step() {
  if (finished_) return false;
  ++tick_;
  receive_uplink();
  move_vehicle();
  run_reader();

  for (const auto& m : pending_reads_) transmit(m);
  for (const auto& m : pending_acks_) transmit(m);
  pending_reads_.clear();
  pending_acks_.clear();
  const std::uint64_t hb_ticks =
      std::max<std::uint64_t>(1, ticks_for(cfg_.sim.heartbeat_period_s, cfg_.sim.tick_s));
  if (tick_ % hb_ticks == 0) {
    transmit(Heartbeat{static_cast<std::uint8_t>(cfg_.vehicle), static_cast<std::uint8_t>(ap_state_)});
  }
  const EnuPose truth = true_pose();
  EnuPose measured = gps_.sample(truth, gps_rng_);
  measured.up = cfg_.vehicle == VehicleType::kUav ? baro_.sample(truth.up, baro_rng_) : 0.0;
  const GeoPoint g = geodetic_from_enu(cfg_.origin, measured);
  transmit(GpsPosition{to_1e7(g.lat), to_1e7(g.lon),
                       static_cast<std::int32_t>(std::lround(measured.up * 1000.0)),
                       static_cast<std::uint32_t>(time_ms())});

  const MissionStatus status = mc_.status(mission_);
  if (status == MissionStatus::kDone || status == MissionStatus::kAborted) {
    finished_ = true;
  } else if (static_cast<double>(time_ms()) >= cfg_.sim.max_mission_s * 1000.0) {
    mc_.abort_mission(mission_, "mission time limit reached");
    finished_ = true;
  }
  return !finished_;
}

}  // namespace rfidsim
