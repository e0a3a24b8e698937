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

#include "rfidsim/rfidsim.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <iterator>
#include <limits>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/json_io.hpp"
#include "core/rf_link.hpp"
#include "core/scenario.hpp"
#include "core/service.hpp"
#include "core/simrunner.hpp"

struct rfidsim_scenario {
  rfidsim::ScenarioConfig cfg;
};

struct rfidsim_report {
  rfidsim::RunReport report;
};

struct rfidsim_server {
  std::unique_ptr<rfidsim::Service> service;
};

namespace {

thread_local std::string g_last_error;

rfidsim_status status_of(rfidsim::ErrorKind k) {
  using rfidsim::ErrorKind;
  switch (k) {
    case ErrorKind::kDomain: return RFIDSIM_E_DOMAIN;
    case ErrorKind::kConfig: return RFIDSIM_E_CONFIG;
    case ErrorKind::kValidation: return RFIDSIM_E_VALIDATION;
    case ErrorKind::kUnsupported: return RFIDSIM_E_UNSUPPORTED;
    case ErrorKind::kNotFound: return RFIDSIM_E_NOT_FOUND;
    case ErrorKind::kIo: return RFIDSIM_E_IO;
    case ErrorKind::kParse: return RFIDSIM_E_PARSE;
    case ErrorKind::kState: return RFIDSIM_E_STATE;
  }
  return RFIDSIM_E_INTERNAL;
}

rfidsim_status set_error(rfidsim_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
rfidsim_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return RFIDSIM_OK;
  } catch (const rfidsim::Error& e) {
    return set_error(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(RFIDSIM_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(RFIDSIM_E_INTERNAL, e.what());
  }
}

#define RFIDSIM_REQUIRE(p)                                                        \
  do {                                                                            \
    if (!(p)) return set_error(RFIDSIM_E_INVALID_ARGUMENT, #p " must not be null"); \
  } while (0)

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) rfidsim::fail(rfidsim::ErrorKind::kIo, std::string("cannot open ") + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string>& presets() {
  static const std::vector<std::string> names = rfidsim::preset_names();
  return names;
}

// Reader and tag facing each other on boresight with aligned polarization.
double boresight_dbm(const rfidsim::LinkConfig& link, double d) {
  rfidsim::AntennaPose reader;
  reader.position = {0.0, 0.0, d, 0.0};
  reader.boresight = {0.0, 0.0, -1.0};
  reader.polarization = {1.0, 0.0, 0.0};
  rfidsim::AntennaPose tag;
  tag.position = {0.0, 0.0, 0.0, 0.0};
  tag.boresight = {0.0, 0.0, 1.0};
  tag.polarization = {1.0, 0.0, 0.0};
  return rfidsim::received_power_dbm(reader, tag, link);
}

}  // namespace

extern "C" {

const char* rfidsim_version(void) { return RFIDSIM_VERSION_STRING; }

const char* rfidsim_status_name(rfidsim_status status) {
  switch (status) {
    case RFIDSIM_OK: return "ok";
    case RFIDSIM_E_INVALID_ARGUMENT: return "invalid_argument";
    case RFIDSIM_E_PARSE: return "parse";
    case RFIDSIM_E_CONFIG: return "config";
    case RFIDSIM_E_VALIDATION: return "validation";
    case RFIDSIM_E_NOT_FOUND: return "not_found";
    case RFIDSIM_E_IO: return "io";
    case RFIDSIM_E_STATE: return "state";
    case RFIDSIM_E_DOMAIN: return "domain";
    case RFIDSIM_E_UNSUPPORTED: return "unsupported";
    case RFIDSIM_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* rfidsim_last_error(void) { return g_last_error.c_str(); }

void rfidsim_string_free(char* s) { std::free(s); }

size_t rfidsim_preset_count(void) { return presets().size(); }

const char* rfidsim_preset_name(size_t index) {
  return index < presets().size() ? presets()[index].c_str() : nullptr;
}

rfidsim_status rfidsim_scenario_from_preset(const char* name, rfidsim_scenario** out) {
  RFIDSIM_REQUIRE(name);
  RFIDSIM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new rfidsim_scenario{rfidsim::apply_preset(name)}; });
}

rfidsim_status rfidsim_scenario_from_json(const char* json, rfidsim_scenario** out) {
  RFIDSIM_REQUIRE(json);
  RFIDSIM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new rfidsim_scenario{rfidsim::scenario_from_json(json)}; });
}

rfidsim_status rfidsim_scenario_from_file(const char* path, rfidsim_scenario** out) {
  RFIDSIM_REQUIRE(path);
  RFIDSIM_REQUIRE(out);
  *out = nullptr;
  return guarded(
      [&] { *out = new rfidsim_scenario{rfidsim::scenario_from_json(read_file(path))}; });
}

rfidsim_status rfidsim_scenario_set_mode(rfidsim_scenario* scenario, const char* mode) {
  RFIDSIM_REQUIRE(scenario);
  RFIDSIM_REQUIRE(mode);
  return guarded([&] {
    rfidsim::ScenarioConfig cfg = scenario->cfg;
    cfg.mode = rfidsim::mission_mode_from_string(mode);
    cfg.validate();
    scenario->cfg = std::move(cfg);
  });
}

uint64_t rfidsim_scenario_seed(const rfidsim_scenario* scenario) {
  return scenario ? scenario->cfg.seed : 0;
}

rfidsim_status rfidsim_scenario_to_json(const rfidsim_scenario* scenario, char** out) {
  RFIDSIM_REQUIRE(scenario);
  RFIDSIM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = dup_string(rfidsim::scenario_to_json(scenario->cfg)); });
}

void rfidsim_scenario_free(rfidsim_scenario* scenario) { delete scenario; }

rfidsim_status rfidsim_link_received_dbm(const rfidsim_scenario* scenario, double distance_m,
                                         double* out_dbm) {
  RFIDSIM_REQUIRE(scenario);
  RFIDSIM_REQUIRE(out_dbm);
  if (!(distance_m > 0.0) || !std::isfinite(distance_m)) {
    return set_error(RFIDSIM_E_DOMAIN, "distance must be positive and finite");
  }
  return guarded([&] { *out_dbm = boresight_dbm(scenario->cfg.link, distance_m); });
}

rfidsim_status rfidsim_link_ranges(const rfidsim_scenario* scenario, double* sensor_range_m,
                                   double* id_range_m) {
  RFIDSIM_REQUIRE(scenario);
  RFIDSIM_REQUIRE(sensor_range_m);
  RFIDSIM_REQUIRE(id_range_m);
  return guarded([&] {
    const auto& link = scenario->cfg.link;
    *sensor_range_m = rfidsim::boresight_read_range_m(link.sensor_threshold_dbm, link);
    *id_range_m = rfidsim::boresight_read_range_m(link.id_threshold_dbm, link);
  });
}

rfidsim_status rfidsim_run(const rfidsim_scenario* scenario, uint64_t seed, const char* log_path,
                           rfidsim_report** out) {
  RFIDSIM_REQUIRE(scenario);
  RFIDSIM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    std::optional<std::filesystem::path> path;
    if (log_path) path = log_path;
    *out = new rfidsim_report{rfidsim::run_scenario(scenario->cfg, seed, path)};
  });
}

size_t rfidsim_report_tag_count(const rfidsim_report* report) {
  return report ? report->report.tags.size() : 0;
}

size_t rfidsim_report_detected_count(const rfidsim_report* report) {
  return report ? static_cast<size_t>(report->report.detected) : 0;
}

double rfidsim_report_mission_time_s(const rfidsim_report* report) {
  return report ? report->report.mission_time_s : std::numeric_limits<double>::quiet_NaN();
}

const char* rfidsim_report_status(const rfidsim_report* report) {
  if (!report) return "";
  return rfidsim::to_string(report->report.view.status).data();
}

rfidsim_status rfidsim_report_tag(const rfidsim_report* report, size_t index,
                                  rfidsim_tag_outcome* out) {
  RFIDSIM_REQUIRE(report);
  RFIDSIM_REQUIRE(out);
  const auto& tags = report->report.tags;
  if (index >= tags.size()) return set_error(RFIDSIM_E_INVALID_ARGUMENT, "tag index out of range");
  const auto& t = tags[index];
  const std::string hex = t.epc.to_hex();
  std::memset(out->epc, 0, sizeof out->epc);
  std::memcpy(out->epc, hex.data(), std::min(hex.size(), sizeof out->epc - 1));
  out->kind = rfidsim::to_string(t.kind).data();
  out->detected = t.detected ? 1 : 0;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out->time_to_read_s = t.time_to_read_s.value_or(nan);
  out->sensor_value = t.sensor_value.value_or(nan);
  g_last_error.clear();
  return RFIDSIM_OK;
}

rfidsim_status rfidsim_report_to_json(const rfidsim_report* report, char** out) {
  RFIDSIM_REQUIRE(report);
  RFIDSIM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = dup_string(rfidsim::report_to_json(report->report)); });
}

rfidsim_status rfidsim_report_log(const rfidsim_report* report, char** bytes, size_t* len) {
  RFIDSIM_REQUIRE(report);
  RFIDSIM_REQUIRE(bytes);
  RFIDSIM_REQUIRE(len);
  *bytes = nullptr;
  *len = 0;
  return guarded([&] {
    const auto data = rfidsim::serialize_log(report->report.log);
    *bytes = dup_string(std::string(data.begin(), data.end()));
    *len = data.size();
  });
}

void rfidsim_report_free(rfidsim_report* report) { delete report; }

rfidsim_status rfidsim_montecarlo(const rfidsim_scenario* scenario, uint64_t runs,
                                  uint64_t base_seed, unsigned threads, const char* csv_path,
                                  char** summary_json) {
  RFIDSIM_REQUIRE(scenario);
  if (summary_json) *summary_json = nullptr;
  return guarded([&] {
    const auto summary = rfidsim::monte_carlo(scenario->cfg, runs, base_seed, threads);
    if (csv_path) {
      std::ofstream out(csv_path, std::ios::binary);
      if (!out) rfidsim::fail(rfidsim::ErrorKind::kIo, std::string("cannot write ") + csv_path);
      out << rfidsim::monte_carlo_csv(summary);
      if (!out) rfidsim::fail(rfidsim::ErrorKind::kIo, std::string("write failed: ") + csv_path);
    }
    if (summary_json) *summary_json = dup_string(rfidsim::summary_to_json(summary));
  });
}

rfidsim_status rfidsim_log_dump(const char* log_path, char** ndjson) {
  RFIDSIM_REQUIRE(log_path);
  RFIDSIM_REQUIRE(ndjson);
  *ndjson = nullptr;
  return guarded([&] {
    const std::string raw = read_file(log_path);
    const auto* p = reinterpret_cast<const std::uint8_t*>(raw.data());
    const auto records = rfidsim::parse_log({p, raw.size()});
    std::string text;
    for (std::size_t i = 0; i < records.size(); ++i) {
      text += rfidsim::log_record_to_json(i, records[i]).dump();
      text += '\n';
    }
    *ndjson = dup_string(text);
  });
}

rfidsim_status rfidsim_server_start(const rfidsim_scenario* world, const char* host, int port,
                                    const char* data_dir, double speed, rfidsim_server** out) {
  RFIDSIM_REQUIRE(world);
  RFIDSIM_REQUIRE(out);
  *out = nullptr;
  if (port < 0 || port > 65535) return set_error(RFIDSIM_E_DOMAIN, "port out of range");
  if (!(speed >= 0.0) || !std::isfinite(speed)) {
    return set_error(RFIDSIM_E_DOMAIN, "speed must be finite and non-negative");
  }
  return guarded([&] {
    rfidsim::ServiceOptions opts;
    if (host) opts.host = host;
    opts.port = port;
    if (data_dir) opts.data_dir = data_dir;
    opts.speed = speed;
    auto server = std::make_unique<rfidsim_server>();
    server->service = std::make_unique<rfidsim::Service>(world->cfg, opts);
    server->service->start();
    *out = server.release();
  });
}

int rfidsim_server_port(const rfidsim_server* server) {
  return server ? server->service->port() : -1;
}

void rfidsim_server_wait(rfidsim_server* server) {
  if (server) server->service->wait();
}

void rfidsim_server_stop(rfidsim_server* server) {
  if (server) server->service->stop();
}

void rfidsim_server_free(rfidsim_server* server) { delete server; }

}  // extern "C"
