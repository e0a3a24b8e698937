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

#include "core/mission_control.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "core/error.hpp"
#include "core/json_io.hpp"

namespace rfidsim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void put_u64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

Vec3 enu_of(const GeoPoint& origin, const GeoPoint& p) {
  return enu_from_geodetic(origin, p).position();
}

std::uint16_t to_cm(double m) {
  return static_cast<std::uint16_t>(std::clamp(std::lround(m * 100.0), 0L, 65535L));
}

Command command_for(const Directive& d, const GeoPoint& origin) {
  Command c;
  Vec3 target;
  double param_m = 0.0;
  if (const auto* g = std::get_if<GotoSetpoint>(&d.setpoint)) {
    target = g->target;
    param_m = std::max(g->acceptance_m, 0.0);
  } else if (const auto* ci = std::get_if<CircleSetpoint>(&d.setpoint)) {
    target = ci->center;
    param_m = ci->radius_m;
  }
  switch (d.maneuver) {
    case Maneuver::kTakeoff: c.cmd = CommandCode::kTakeoff; break;
    case Maneuver::kNavTo: c.cmd = CommandCode::kNavTo; break;
    case Maneuver::kChangeAlt: c.cmd = CommandCode::kChangeAlt; break;
    case Maneuver::kCircle: c.cmd = CommandCode::kCircle; break;
    case Maneuver::kLand: c.cmd = CommandCode::kLand; break;
    case Maneuver::kNone: fail(ErrorKind::kState, "no command for an empty directive");
  }
  const GeoPoint g = geodetic_from_enu(origin, EnuPose::at(target));
  c.lat_1e7 = to_1e7(g.lat);
  c.lon_1e7 = to_1e7(g.lon);
  c.alt_mm = static_cast<std::int32_t>(std::lround(target.u * 1000.0));
  c.param_cm = to_cm(param_m);
  return c;
}

}  // namespace

std::string_view to_string(MissionStatus s) {
  switch (s) {
    case MissionStatus::kPlanned: return "planned";
    case MissionStatus::kRunning: return "running";
    case MissionStatus::kDone: return "done";
    case MissionStatus::kAborted: return "aborted";
  }
  return "unknown";
}

std::string_view to_string(MissionMode m) {
  return m == MissionMode::kAutonomous ? "autonomous" : "manual";
}

MissionMode mission_mode_from_string(std::string_view s) {
  if (s == "autonomous") return MissionMode::kAutonomous;
  if (s == "manual" || s == "manual-script") return MissionMode::kManual;
  fail(ErrorKind::kParse, "unknown mission mode: " + std::string(s));
}

std::int32_t to_1e7(double deg) { return static_cast<std::int32_t>(std::llround(deg * 1e7)); }
double from_1e7(std::int32_t v) { return static_cast<double>(v) / 1e7; }

GeoPoint geo_from_wire(const GeoPoint& origin, std::int32_t lat, std::int32_t lon,
                       std::int32_t alt_mm) {
  return {from_1e7(lat), from_1e7(lon), origin.alt + static_cast<double>(alt_mm) / 1000.0};
}

Bytes serialize_log(std::span<const LogRecord> records) {
  Bytes out;
  for (const auto& r : records) {
    put_u64(out, r.recv_ms);
    out.insert(out.end(), r.frame.begin(), r.frame.end());
  }
  return out;
}

std::vector<LogRecord> parse_log(std::span<const std::uint8_t> bytes) {
  std::vector<LogRecord> out;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 8 + kFrameOverhead) fail(ErrorKind::kParse, "log truncated");
    std::uint64_t ts = 0;
    for (int i = 0; i < 8; ++i) ts |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
    pos += 8;
    if (bytes[pos] != kFrameSync) fail(ErrorKind::kParse, "log record lacks frame sync");
    const std::size_t total = kFrameOverhead + bytes[pos + 1];
    if (bytes.size() - pos < total) fail(ErrorKind::kParse, "log frame truncated");
    out.push_back({ts, Bytes(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                             bytes.begin() + static_cast<std::ptrdiff_t>(pos + total))});
    pos += total;
  }
  return out;
}

struct MissionControl::Mission {
  explicit Mission(MissionRecord r) : record(std::move(r)), rng(Rng::stream(record.seed, "gcs")) {
    view.id = record.id;
    view.status = record.status;
    view.phase = "idle";
  }

  MissionRecord record;
  MissionView view;
  std::vector<LogRecord> log;
  std::variant<std::monostate, UavSearchFsm, UgvSearchFsm> fsm;
  Rng rng;
  std::vector<Epc> pending_reads;
  CommandStatus last_cmd;
  std::uint32_t uplink_seq = 0;
  std::optional<std::uint32_t> last_downlink_seq;
  std::optional<std::uint32_t> last_gps_ms;
  std::uint32_t last_revision = 0;
  std::optional<GeoPoint> last_position;
  std::unique_ptr<std::ofstream> log_file;
};

MissionControl::MissionControl(std::filesystem::path data_dir) : data_dir_(std::move(data_dir)) {
  std::error_code ec;
  std::filesystem::create_directories(*data_dir_, ec);
  if (ec) fail(ErrorKind::kIo, "cannot create data directory " + data_dir_->string());
}

MissionControl::Mission& MissionControl::find(MissionId id) {
  auto it = missions_.find(id);
  if (it == missions_.end()) fail(ErrorKind::kNotFound, "unknown mission " + std::to_string(id));
  return *it->second;
}

const MissionControl::Mission& MissionControl::find(MissionId id) const {
  auto it = missions_.find(id);
  if (it == missions_.end()) fail(ErrorKind::kNotFound, "unknown mission " + std::to_string(id));
  return *it->second;
}

void MissionControl::persist_record(const Mission& m) const {
  if (!data_dir_) return;
  const auto path = *data_dir_ / ("mission-" + std::to_string(m.record.id) + ".json");
  std::ofstream f(path, std::ios::trunc);
  if (!f) fail(ErrorKind::kIo, "cannot write " + path.string());
  f << nlohmann::json(m.record).dump(2) << '\n';
}

MissionRecord MissionControl::create_mission(const MissionRequest& req) {
  validate(req.origin);
  req.params.validate();
  MissionRecord rec;
  rec.name = req.name;
  rec.vehicle = req.vehicle;
  rec.mode = req.mode;
  rec.origin = req.origin;
  rec.params = req.params;
  rec.seed = req.seed;
  rec.waypoints = req.waypoints;
  if (req.area) {
    if (!req.waypoints.empty()) {
      fail(ErrorKind::kValidation, "give either waypoints or an area, not both");
    }
    std::vector<Vec3> poly;
    for (const auto& g : req.area->polygon) poly.push_back(enu_of(req.origin, g));
    for (const auto& p : waypoints_from_area(poly, req.area->spacing_m)) {
      rec.waypoints.push_back({geodetic_from_enu(req.origin, EnuPose::at(p)), std::nullopt});
    }
  }
  if (rec.waypoints.empty()) fail(ErrorKind::kValidation, "mission plan has no waypoints");
  for (const auto& wp : rec.waypoints) {
    validate(wp.position);
    if (wp.expected) rec.whitelist.insert(*wp.expected);
  }
  rec.whitelist.insert(req.whitelist.begin(), req.whitelist.end());

  std::lock_guard lock(mu_);
  rec.id = next_id_++;
  auto m = std::make_shared<Mission>(rec);
  if (data_dir_) {
    const auto path = *data_dir_ / ("mission-" + std::to_string(rec.id) + ".log");
    m->log_file = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*m->log_file) fail(ErrorKind::kIo, "cannot open " + path.string());
  }
  persist_record(*m);
  missions_.emplace(rec.id, std::move(m));
  return rec;
}

void MissionControl::start_mission(MissionId id) {
  std::lock_guard lock(mu_);
  auto& m = find(id);
  if (m.record.status != MissionStatus::kPlanned) {
    fail(ErrorKind::kState, "mission " + std::to_string(id) + " is not in the planned state");
  }
  m.record.status = MissionStatus::kRunning;
  m.view.status = MissionStatus::kRunning;
  persist_record(m);
  cv_.notify_all();
}

void MissionControl::abort_mission(MissionId id, const std::string& reason) {
  std::lock_guard lock(mu_);
  auto& m = find(id);
  if (m.record.status == MissionStatus::kDone || m.record.status == MissionStatus::kAborted) return;
  m.record.status = MissionStatus::kAborted;
  m.view.status = MissionStatus::kAborted;
  audit_.push_back({id, "aborted: " + reason});
  persist_record(m);
  cv_.notify_all();
}

void MissionControl::append(Mission& m, std::uint64_t recv_ms, Bytes frame) {
  if (m.log_file) {
    Bytes rec;
    put_u64(rec, recv_ms);
    rec.insert(rec.end(), frame.begin(), frame.end());
    m.log_file->write(reinterpret_cast<const char*>(rec.data()),
                      static_cast<std::streamsize>(rec.size()));
    m.log_file->flush();
  }
  m.log.push_back({recv_ms, std::move(frame)});
}

std::vector<Bytes> MissionControl::record_telemetry(MissionId id, std::uint64_t recv_ms,
                                                    std::span<const std::uint8_t> bytes) {
  std::lock_guard lock(mu_);
  auto it = missions_.find(id);
  if (it == missions_.end()) {
    audit_.push_back({id, "telemetry for unknown mission ignored"});
    return {};
  }
  Mission& m = *it->second;

  // Write-ahead: the raw frame is on the log before anything acts on it.
  append(m, recv_ms, Bytes(bytes.begin(), bytes.end()));
  cv_.notify_all();

  const auto decoded = decode_frame(bytes);
  if (!decoded.ok()) {
    audit_.push_back({id, "undecodable telemetry: " + std::string(to_string(decoded.error()))});
    return {};
  }
  const Frame& frame = decoded.frame();
  if (std::holds_alternative<Command>(frame.msg)) {
    audit_.push_back({id, "COMMAND frame on the downlink ignored"});
    return {};
  }

  auto& v = m.view;
  ++v.telemetry_frames;
  if (m.last_downlink_seq && frame.seq != *m.last_downlink_seq + 1) ++v.seq_gaps;
  m.last_downlink_seq = frame.seq;

  std::visit(Overloaded{
                 [&](const GpsPosition& g) {
                   const GeoPoint p = geo_from_wire(m.record.origin, g.lat_1e7, g.lon_1e7, g.alt_mm);
                   v.path.push_back(p);
                   m.last_position = p;
                   v.last_time_ms = g.time_ms;
                 },
                 [&](const TagRead& t) {
                   const Epc epc(t.epc);
                   if (m.record.whitelist.count(epc) == 0) {
                     audit_.push_back({id, "TAG_READ for non-whitelisted EPC " + epc.to_hex()});
                     return;
                   }
                   TagObservation o;
                   o.mission = id;
                   o.epc = epc;
                   o.sensor_kind = t.sensor_kind;
                   o.sensor_value_milli = t.sensor_value_milli;
                   o.rssi_dbm_x10 = t.rssi_dbm_x10;
                   o.vehicle_position = m.last_position.value_or(m.record.origin);
                   o.time_ms = t.time_ms;
                   v.observations.push_back(o);
                   m.pending_reads.push_back(epc);
                 },
                 [&](const Ack& a) {
                   if (m.last_cmd.seq && a.seq_acked == *m.last_cmd.seq) {
                     switch (static_cast<AckResult>(a.result)) {
                       case AckResult::kAccepted: m.last_cmd.accepted = true; break;
                       case AckResult::kCompleted: m.last_cmd.completed = true; break;
                       case AckResult::kRejected: m.last_cmd.rejected = true; break;
                     }
                   }
                 },
                 [](const auto&) {},
             },
             frame.msg);

  if (m.record.status != MissionStatus::kRunning) return {};
  auto out = mission_fsm_step(m, recv_ms, frame);
  cv_.notify_all();
  return out;
}

std::vector<Bytes> MissionControl::mission_fsm_step(Mission& m, std::uint64_t recv_ms,
                                                    const Frame& frame) {
  if (m.record.mode == MissionMode::kManual) {
    // The pilot drives; the mission ends once a LAND completes.
    const auto* ack = std::get_if<Ack>(&frame.msg);
    if (ack && m.last_cmd.completed && m.last_cmd.seq == ack->seq_acked) {
      const auto& last = m.log;
      for (auto it = last.rbegin(); it != last.rend(); ++it) {
        const auto d = decode_frame(it->frame);
        if (!d.ok()) continue;
        const auto* cmd = std::get_if<Command>(&d.frame().msg);
        if (cmd && d.frame().seq == ack->seq_acked) {
          if (cmd->cmd == CommandCode::kLand) {
            m.record.status = MissionStatus::kDone;
            m.view.status = MissionStatus::kDone;
            persist_record(m);
          }
          break;
        }
      }
    }
    return {};
  }

  const auto* gps = std::get_if<GpsPosition>(&frame.msg);
  if (gps == nullptr) return {};

  const GeoPoint here = geo_from_wire(m.record.origin, gps->lat_1e7, gps->lon_1e7, gps->alt_mm);
  VehicleObservation obs;
  obs.measured = enu_from_geodetic(m.record.origin, here);
  obs.setpoint_reached = m.last_cmd.completed;
  double dt = 0.1;
  if (m.last_gps_ms) dt = std::max(1, static_cast<int>(gps->time_ms - *m.last_gps_ms)) / 1000.0;
  m.last_gps_ms = gps->time_ms;

  if (std::holds_alternative<std::monostate>(m.fsm)) {
    std::vector<Waypoint> wps;
    for (const auto& w : m.record.waypoints) {
      wps.push_back({enu_of(m.record.origin, w.position), w.expected});
    }
    const Vec3 home{obs.measured.east, obs.measured.north, 0.0};
    if (m.record.vehicle == VehicleType::kUav) {
      m.fsm = make_uav_search(std::move(wps), m.record.params, home);
    } else {
      m.fsm = make_ugv_search(std::move(wps), m.record.params, home);
    }
  }

  const auto reads = std::move(m.pending_reads);
  m.pending_reads.clear();
  Directive directive;
  std::vector<BehaviorEvent> events;
  bool done = false;
  if (auto* uav = std::get_if<UavSearchFsm>(&m.fsm)) {
    auto r = uav_search_step(std::move(*uav), obs, reads, dt);
    *uav = std::move(r.fsm);
    directive = r.directive;
    events = std::move(r.events);
    m.view.phase = std::string(to_string(uav->phase));
    done = uav->phase == UavPhase::kDone;
  } else if (auto* ugv = std::get_if<UgvSearchFsm>(&m.fsm)) {
    auto r = ugv_search_step(std::move(*ugv), obs, reads, dt, m.rng);
    *ugv = std::move(r.fsm);
    directive = r.directive;
    events = std::move(r.events);
    m.view.phase = std::string(to_string(ugv->phase));
    done = ugv->phase == UgvPhase::kDone;
  }
  for (const auto& e : events) {
    m.view.behavior_events.push_back({e.kind, e.waypoint, e.epc, gps->time_ms});
  }

  std::vector<Bytes> out;
  if (directive.maneuver != Maneuver::kNone && directive.revision != m.last_revision) {
    m.last_revision = directive.revision;
    const Command cmd = command_for(directive, m.record.origin);
    const std::uint32_t seq = m.uplink_seq++;
    Bytes bytes = encode_frame(cmd, seq);
    append(m, recv_ms, bytes);
    ++m.view.commands_sent;
    m.last_cmd = CommandStatus{seq, false, false, false};
    out.push_back(std::move(bytes));
  }
  if (done) {
    m.record.status = MissionStatus::kDone;
    m.view.status = MissionStatus::kDone;
    persist_record(m);
  }
  return out;
}

Bytes MissionControl::submit_manual_command(MissionId id, std::uint64_t recv_ms, const Command& cmd) {
  std::lock_guard lock(mu_);
  auto& m = find(id);
  if (m.record.mode != MissionMode::kManual) {
    fail(ErrorKind::kState, "mission " + std::to_string(id) + " is not in manual mode");
  }
  if (m.record.status != MissionStatus::kRunning) {
    fail(ErrorKind::kState, "mission " + std::to_string(id) + " is not running");
  }
  const std::uint32_t seq = m.uplink_seq++;
  Bytes bytes = encode_frame(cmd, seq);
  append(m, recv_ms, bytes);
  ++m.view.commands_sent;
  m.last_cmd = CommandStatus{seq, false, false, false};
  cv_.notify_all();
  return bytes;
}

MissionRecord MissionControl::record(MissionId id) const {
  std::lock_guard lock(mu_);
  return find(id).record;
}

MissionStatus MissionControl::status(MissionId id) const {
  std::lock_guard lock(mu_);
  return find(id).record.status;
}

std::vector<TagObservation> MissionControl::observations(MissionId id, std::size_t from) const {
  std::lock_guard lock(mu_);
  const auto& obs = find(id).view.observations;
  if (from >= obs.size()) return {};
  return {obs.begin() + static_cast<std::ptrdiff_t>(from), obs.end()};
}

MissionView MissionControl::query_mission(MissionId id) const {
  std::lock_guard lock(mu_);
  return find(id).view;
}

std::vector<MissionRecord> MissionControl::list_missions() const {
  std::lock_guard lock(mu_);
  std::vector<MissionRecord> out;
  for (const auto& [id, m] : missions_) out.push_back(m->record);
  return out;
}

std::vector<LogRecord> MissionControl::log(MissionId id) const {
  std::lock_guard lock(mu_);
  return find(id).log;
}

CommandStatus MissionControl::last_command(MissionId id) const {
  std::lock_guard lock(mu_);
  return find(id).last_cmd;
}

std::vector<AuditEntry> MissionControl::audit() const {
  std::lock_guard lock(mu_);
  return audit_;
}

std::vector<LogRecord> MissionControl::wait_for_records(MissionId id, std::size_t from,
                                                        std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  const auto& m = find(id);
  cv_.wait_for(lock, timeout, [&] {
    return m.log.size() > from || m.record.status == MissionStatus::kDone ||
           m.record.status == MissionStatus::kAborted;
  });
  if (from >= m.log.size()) return {};
  return {m.log.begin() + static_cast<std::ptrdiff_t>(from), m.log.end()};
}

MissionView MissionControl::replay(const MissionRecord& record, std::span<const LogRecord> log) {
  MissionControl mc;
  MissionRecord fresh = record;
  fresh.status = MissionStatus::kPlanned;
  {
    auto m = std::make_shared<Mission>(fresh);
    mc.missions_.emplace(fresh.id, std::move(m));
    mc.next_id_ = fresh.id + 1;
  }
  mc.start_mission(fresh.id);
  for (const auto& rec : log) {
    const auto d = decode_frame(rec.frame);
    const bool is_command = d.ok() && std::holds_alternative<Command>(d.frame().msg);
    if (!is_command) {
      mc.record_telemetry(fresh.id, rec.recv_ms, rec.frame);
    } else if (record.mode == MissionMode::kManual) {
      mc.submit_manual_command(fresh.id, rec.recv_ms, std::get<Command>(d.frame().msg));
    }
  }
  // Aborts come from the operator or a time limit, not from the log.
  if (record.status == MissionStatus::kAborted) mc.abort_mission(fresh.id, "replayed abort");
  const auto& m = mc.find(fresh.id);
  if (m.log.size() != log.size() || !std::equal(m.log.begin(), m.log.end(), log.begin())) {
    fail(ErrorKind::kState, "replayed log diverges from the recorded log");
  }
  return m.view;
}

}  // namespace rfidsim
