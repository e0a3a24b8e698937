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

#include "core/simrunner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "core/error.hpp"
#include "core/json_io.hpp"
#include "core/simulation.hpp"

namespace rfidsim {

namespace {

constexpr std::uint64_t kStepTimeoutMs = 600'000;
// A driver pulls up close to the stake rather than stopping at the autopilot default.
constexpr std::uint16_t kDriveAcceptanceCm = 10;

// Scripted human pilot for manual missions. Sees the true scene, talks to the
// vehicle only through ground-control manual commands.
class Pilot {
 public:
  Pilot(const ScenarioConfig& cfg, MissionControl& mc, MissionId id, const Simulation& sim)
      : cfg_(cfg), mc_(mc), id_(id), sim_(sim), plan_(cfg.script) {
    if (plan_.empty() || plan_.back().op != ScriptOp::kLand) {
      ScriptStep land;
      land.op = ScriptOp::kLand;
      plan_.push_back(land);
    }
    airborne_ = cfg.vehicle != VehicleType::kUav;
  }

  void act() {
    if (mc_.status(id_) != MissionStatus::kRunning) return;
    now_ = sim_.time_ms();
    const CommandStatus cs = mc_.last_command(id_);
    const bool done = pending_ && cs.seq == pending_ && cs.completed;
    const bool rejected = pending_ && cs.seq == pending_ && cs.rejected;

    if (!airborne_) {
      if (!pending_) {
        const EnuPose p = sim_.true_pose();
        send(CommandCode::kTakeoff, {p.east, p.north, cfg_.behavior.cruise_alt_m});
      } else if (done) {
        airborne_ = true;
        pending_.reset();
      }
      return;
    }
    if (index_ >= plan_.size()) return;
    const ScriptStep& step = plan_[index_];
    if (!started_) return begin(step);

    StepOutcome& out = outcomes_.back();
    scan_reads(step, out);
    if (rejected || now_ - stage_ms_ > kStepTimeoutMs) return finish(false);

    switch (stage_) {
      case Stage::kTransit:
        if (done) {
          const Vec3 p = tag_position(*step.tag);
          send(CommandCode::kHoverAt, {p.e, p.n, step.alt_m});
          stage_ = Stage::kArrive;
        }
        break;
      case Stage::kArrive:
        if (done) {
          out.arrived_ms = now_;
          stage_ = Stage::kWaitRead;
          stage_ms_ = now_;
        }
        if (stage_ != Stage::kWaitRead) break;
        [[fallthrough]];
      case Stage::kWaitRead:
        if (out.read_ms) return finish(true);
        if (now_ - *out.arrived_ms >= static_cast<std::uint64_t>(step.timeout_s * 1000.0)) {
          return finish(false);
        }
        break;
      case Stage::kWaitDone:
        if (done) finish(true);
        break;
    }
  }

  // A LAND whose completion ended the mission is never observed by act().
  void settle(MissionStatus final_status) {
    if (started_ && plan_[index_].op == ScriptOp::kLand && final_status == MissionStatus::kDone) {
      finish(true);
    }
  }

  std::vector<StepOutcome> take_outcomes() { return std::move(outcomes_); }

 private:
  enum class Stage { kTransit, kArrive, kWaitRead, kWaitDone };

  Vec3 tag_position(const Epc& epc) const {
    for (const auto& t : sim_.tags()) {
      if (t.epc == epc) return t.pose.position.position();
    }
    fail(ErrorKind::kState, "pilot cannot see tag " + epc.to_hex());
  }

  void send(CommandCode code, Vec3 target, std::uint16_t param_cm = 0) {
    const GeoPoint g = geodetic_from_enu(cfg_.origin, EnuPose::at(target));
    Command c;
    c.cmd = code;
    c.lat_1e7 = to_1e7(g.lat);
    c.lon_1e7 = to_1e7(g.lon);
    c.alt_mm = static_cast<std::int32_t>(std::lround(target.u * 1000.0));
    c.param_cm = param_cm;
    const Bytes frame = mc_.submit_manual_command(id_, now_, c);
    pending_ = decode_frame(frame).frame().seq;
  }

  void begin(const ScriptStep& step) {
    started_ = true;
    stage_ms_ = now_;
    StepOutcome out;
    out.op = step.op;
    out.tag = step.op == ScriptOp::kPlaceTag ? std::optional<Epc>(step.placed->epc) : step.tag;
    out.start_ms = now_;
    outcomes_.push_back(out);
    obs_cursor_ += mc_.observations(id_, obs_cursor_).size();

    switch (step.op) {
      case ScriptOp::kHoverRead: {
        const Vec3 p = tag_position(*step.tag);
        send(CommandCode::kHoverAt, {p.e, p.n, std::max(cfg_.behavior.cruise_alt_m, step.alt_m)});
        stage_ = Stage::kTransit;
        break;
      }
      case ScriptOp::kDriveRead: {
        const Vec3 tag = tag_position(*step.tag);
        const EnuPose here = sim_.true_pose();
        const double de = tag.e - here.east;
        const double dn = tag.n - here.north;
        const double d = std::hypot(de, dn);
        Vec3 stop{tag.e, tag.n, 0.0};
        if (d > step.standoff_m && d > 0.0) {
          stop = {tag.e - de / d * step.standoff_m, tag.n - dn / d * step.standoff_m, 0.0};
        }
        send(CommandCode::kHoverAt, stop, kDriveAcceptanceCm);
        stage_ = Stage::kArrive;
        break;
      }
      case ScriptOp::kPlaceTag:
        send(CommandCode::kPlaceTag, step.position);
        stage_ = Stage::kWaitDone;
        break;
      case ScriptOp::kGoto:
        send(CommandCode::kHoverAt, step.position);
        stage_ = Stage::kWaitDone;
        break;
      case ScriptOp::kLand: {
        const EnuPose p = sim_.true_pose();
        send(CommandCode::kLand, {p.east, p.north, 0.0});
        stage_ = Stage::kWaitDone;
        break;
      }
    }
  }

  void scan_reads(const ScriptStep& step, StepOutcome& out) {
    const auto fresh = mc_.observations(id_, obs_cursor_);
    obs_cursor_ += fresh.size();
    if (!out.tag || out.read_ms) return;
    if (step.op != ScriptOp::kHoverRead && step.op != ScriptOp::kDriveRead) return;
    TagKind kind = TagKind::kIdOnly;
    for (const auto& t : sim_.tags()) {
      if (t.epc == *out.tag) kind = t.kind;
    }
    for (const auto& o : fresh) {
      if (o.epc == *out.tag && o.sensor_kind == static_cast<std::uint8_t>(kind)) {
        out.read_ms = o.time_ms;
        out.sensor_value_milli = o.sensor_value_milli;
        return;
      }
    }
  }

  void finish(bool ok) {
    outcomes_.back().ok = ok;
    ++index_;
    started_ = false;
    pending_.reset();
  }

  const ScenarioConfig& cfg_;
  MissionControl& mc_;
  MissionId id_;
  const Simulation& sim_;
  std::vector<ScriptStep> plan_;
  std::vector<StepOutcome> outcomes_;
  bool airborne_ = false;
  std::size_t index_ = 0;
  bool started_ = false;
  Stage stage_ = Stage::kWaitDone;
  std::uint64_t now_ = 0;
  std::uint64_t stage_ms_ = 0;
  std::optional<std::uint32_t> pending_;
  std::size_t obs_cursor_ = 0;
};

std::vector<TagSpec> all_tags(const ScenarioConfig& cfg) {
  std::vector<TagSpec> out = cfg.tags;
  for (const auto& s : cfg.script) {
    if (s.op == ScriptOp::kPlaceTag && cfg.mode == MissionMode::kManual) out.push_back(*s.placed);
  }
  return out;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  // Linear interpolation between closest ranks.
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Json outcome_json(const TagOutcome& t) {
  Json j{{"epc", t.epc}, {"kind", t.kind}, {"detected", t.detected}};
  j["time_to_read_s"] = t.time_to_read_s ? Json(*t.time_to_read_s) : Json(nullptr);
  j["sensor_value"] = t.sensor_value ? Json(*t.sensor_value) : Json(nullptr);
  if (t.kind != TagKind::kIdOnly) j["sensor_unit"] = std::string(sensor_unit(t.kind));
  return j;
}

Json interval_json(const Interval& i) { return Json::array({i.lo, i.hi}); }

}  // namespace

std::string_view sensor_unit(TagKind kind) {
  switch (kind) {
    case TagKind::kIdOnly: return "";
    case TagKind::kHydroMoisture: return "ohm";
    case TagKind::kConductivity: return "uS/cm";
    case TagKind::kLight: return "lux";
    case TagKind::kTemperature: return "degC";
  }
  return "";
}

std::vector<TagOutcome> outcomes_from_log(std::span<const TagSpec> tags,
                                          std::span<const LogRecord> log) {
  std::vector<TagOutcome> out;
  std::map<Epc, std::size_t> index;
  for (const auto& t : tags) {
    index[t.epc] = out.size();
    out.push_back({t.epc, t.kind, false, std::nullopt, std::nullopt});
  }
  for (const auto& rec : log) {
    const auto d = decode_frame(rec.frame);
    if (!d.ok()) continue;
    const auto* read = std::get_if<TagRead>(&d.frame().msg);
    if (read == nullptr) continue;
    auto it = index.find(Epc(read->epc));
    if (it == index.end()) continue;
    TagOutcome& o = out[it->second];
    if (!o.detected) {
      o.detected = true;
      o.time_to_read_s = read->time_ms / 1000.0;
    }
    if (!o.sensor_value && o.kind != TagKind::kIdOnly &&
        read->sensor_kind == static_cast<std::uint8_t>(o.kind)) {
      o.sensor_value = read->sensor_value_milli / 1000.0;
    }
  }
  return out;
}

RunReport run_scenario(const ScenarioConfig& cfg, std::uint64_t seed,
                       const std::optional<std::filesystem::path>& log_path) {
  cfg.validate();
  if (cfg.mode == MissionMode::kManual && cfg.script.empty()) {
    fail(ErrorKind::kValidation, "a manual-script run needs a script");
  }
  MissionControl mc;
  const MissionRecord rec = mc.create_mission(mission_request(cfg, seed));
  mc.start_mission(rec.id);
  Simulation sim(cfg, seed, mc, rec.id);
  std::optional<Pilot> pilot;
  if (cfg.mode == MissionMode::kManual) pilot.emplace(cfg, mc, rec.id, sim);
  do {
    if (pilot) pilot->act();
  } while (sim.step());

  RunReport r;
  r.scenario = cfg.name;
  r.seed = seed;
  r.record = mc.record(rec.id);
  r.view = mc.query_mission(rec.id);
  r.mission_time_s = static_cast<double>(sim.time_ms()) / 1000.0;
  r.log = mc.log(rec.id);
  const auto tags = all_tags(cfg);
  r.tags = outcomes_from_log(tags, r.log);
  r.detected = static_cast<int>(std::count_if(r.tags.begin(), r.tags.end(),
                                              [](const TagOutcome& t) { return t.detected; }));
  if (pilot) {
    pilot->settle(r.record.status);
    r.steps = pilot->take_outcomes();
  }
  if (log_path) {
    const Bytes bytes = serialize_log(r.log);
    std::ofstream f(*log_path, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorKind::kIo, "cannot write " + log_path->string());
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  return r;
}

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

MonteCarloSummary monte_carlo(const ScenarioConfig& cfg, std::uint64_t runs,
                              std::uint64_t base_seed, unsigned threads) {
  if (runs == 0) fail(ErrorKind::kValidation, "Monte Carlo needs at least one run");
  cfg.validate();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, runs));

  MonteCarloSummary s;
  s.scenario = cfg.name;
  s.runs = runs;
  s.base_seed = base_seed;
  s.per_run.resize(runs);
  std::atomic<std::uint64_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t i = next++; i < runs; i = next++) {
          const RunReport r = run_scenario(cfg, base_seed + i);
          s.per_run[i] = {r.seed, r.mission_time_s, r.record.status, r.tags};
        }
      } catch (...) {
        errors[w] = std::current_exception();
        next = runs;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<double> ttr;
  double total_time = 0.0;
  for (const auto& run : s.per_run) {
    total_time += run.mission_time_s;
    if (run.status == MissionStatus::kAborted) ++s.aborted;
    if (s.per_tag.empty()) {
      for (const auto& t : run.tags) s.per_tag.push_back({t.epc, 0, 0.0, {}});
    }
    for (std::size_t k = 0; k < run.tags.size(); ++k) {
      ++s.trials;
      if (!run.tags[k].detected) continue;
      ++s.detections;
      ++s.per_tag[k].detections;
      ttr.push_back(*run.tags[k].time_to_read_s);
    }
  }
  s.detection_rate = s.trials ? static_cast<double>(s.detections) / static_cast<double>(s.trials) : 0.0;
  s.ci = wilson_interval(s.detections, s.trials);
  for (auto& t : s.per_tag) {
    t.rate = static_cast<double>(t.detections) / static_cast<double>(runs);
    t.ci = wilson_interval(t.detections, runs);
  }
  s.mean_mission_time_s = total_time / static_cast<double>(runs);
  if (!ttr.empty()) {
    double sum = 0.0;
    for (double v : ttr) sum += v;
    s.ttr_mean_s = sum / static_cast<double>(ttr.size());
    s.ttr_median_s = quantile(ttr, 0.5);
    s.ttr_p90_s = quantile(ttr, 0.9);
    s.ttr_max_s = *std::max_element(ttr.begin(), ttr.end());
  }
  return s;
}

std::string monte_carlo_csv(const MonteCarloSummary& s) {
  std::ostringstream out;
  out << "run_id,tag_epc,detected,time_to_read_s,sensor_value\n";
  for (std::size_t i = 0; i < s.per_run.size(); ++i) {
    for (const auto& t : s.per_run[i].tags) {
      out << i << ',' << t.epc.to_hex() << ',' << (t.detected ? 1 : 0) << ','
          << (t.time_to_read_s ? format_double(*t.time_to_read_s) : "") << ','
          << (t.sensor_value ? format_double(*t.sensor_value) : "") << '\n';
    }
  }
  return out.str();
}

std::string report_to_json(const RunReport& r) {
  Json j;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  j["mission_id"] = r.record.id;
  j["status"] = r.record.status;
  j["mission_time_s"] = r.mission_time_s;
  j["detected"] = r.detected;
  j["tag_count"] = r.tags.size();
  j["tags"] = Json::array();
  for (const auto& t : r.tags) j["tags"].push_back(outcome_json(t));
  j["steps"] = Json::array();
  for (const auto& s : r.steps) {
    Json step{{"op", std::string(to_string(s.op))}, {"ok", s.ok}};
    if (s.tag) step["tag"] = *s.tag;
    if (s.start_ms) step["start_ms"] = *s.start_ms;
    if (s.arrived_ms) step["arrived_ms"] = *s.arrived_ms;
    if (s.read_ms) step["read_ms"] = *s.read_ms;
    if (s.sensor_value_milli) step["sensor_value_milli"] = *s.sensor_value_milli;
    j["steps"].push_back(step);
  }
  j["telemetry_frames"] = r.view.telemetry_frames;
  j["commands_sent"] = r.view.commands_sent;
  j["log_records"] = r.log.size();
  return j.dump(2);
}

std::string summary_to_json(const MonteCarloSummary& s) {
  Json j;
  j["scenario"] = s.scenario;
  j["runs"] = s.runs;
  j["base_seed"] = s.base_seed;
  j["trials"] = s.trials;
  j["detections"] = s.detections;
  j["detection_rate"] = s.detection_rate;
  j["detection_rate_ci95"] = interval_json(s.ci);
  j["per_tag"] = Json::array();
  for (const auto& t : s.per_tag) {
    j["per_tag"].push_back(Json{{"epc", t.epc},
                                {"detections", t.detections},
                                {"rate", t.rate},
                                {"ci95", interval_json(t.ci)}});
  }
  j["aborted_runs"] = s.aborted;
  j["mean_mission_time_s"] = s.mean_mission_time_s;
  j["time_to_read_s"] = {{"mean", s.ttr_mean_s},
                         {"median", s.ttr_median_s},
                         {"p90", s.ttr_p90_s},
                         {"max", s.ttr_max_s}};
  return j.dump(2);
}

}  // namespace rfidsim
