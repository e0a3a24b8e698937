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

// Command-line front end; uses only the public C interface.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rfidsim/rfidsim.h"

namespace {

struct Failure {
  int code;
};

void check(rfidsim_status s, const char* what) {
  if (s == RFIDSIM_OK) return;
  std::cerr << "rfidsim: " << what << ": " << rfidsim_status_name(s) << ": "
            << rfidsim_last_error() << "\n";
  throw Failure{2};
}

struct ScenarioDeleter {
  void operator()(rfidsim_scenario* s) const { rfidsim_scenario_free(s); }
};
using ScenarioPtr = std::unique_ptr<rfidsim_scenario, ScenarioDeleter>;

struct StringDeleter {
  void operator()(char* s) const { rfidsim_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct ScenarioArgs {
  std::string file;
  std::string preset;
  std::string mode;

  void add_to(CLI::App* cmd) {
    auto* f = cmd->add_option("--scenario", file, "scenario JSON file")->check(CLI::ExistingFile);
    auto* p = cmd->add_option("--preset", preset, "built-in preset name");
    f->excludes(p);
    cmd->add_option("--mode", mode, "override mission mode")
        ->check(CLI::IsMember({"autonomous", "manual", "manual-script"}));
  }

  ScenarioPtr load() const {
    rfidsim_scenario* raw = nullptr;
    if (!file.empty()) {
      check(rfidsim_scenario_from_file(file.c_str(), &raw), "loading scenario");
    } else if (!preset.empty()) {
      check(rfidsim_scenario_from_preset(preset.c_str(), &raw), "loading preset");
    } else {
      std::cerr << "rfidsim: one of --scenario or --preset is required\n";
      throw Failure{2};
    }
    ScenarioPtr s(raw);
    if (!mode.empty()) check(rfidsim_scenario_set_mode(s.get(), mode.c_str()), "setting mode");
    return s;
  }
};

std::string fmt_opt(double v, int prec) {
  if (std::isnan(v)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

int cmd_run(const ScenarioArgs& sa, std::optional<std::uint64_t> seed_opt,
            const std::string& log, bool json) {
  auto s = sa.load();
  const std::uint64_t seed = seed_opt.value_or(rfidsim_scenario_seed(s.get()));
  rfidsim_report* raw = nullptr;
  check(rfidsim_run(s.get(), seed, log.empty() ? nullptr : log.c_str(), &raw), "run");
  std::unique_ptr<rfidsim_report, void (*)(rfidsim_report*)> r(raw, rfidsim_report_free);
  if (json) {
    char* text = nullptr;
    check(rfidsim_report_to_json(r.get(), &text), "report");
    OwnedString owned(text);
    std::cout << text << "\n";
    return 0;
  }
  std::printf("seed %llu  status %s  mission %.1f s  detected %zu/%zu\n",
              static_cast<unsigned long long>(seed), rfidsim_report_status(r.get()),
              rfidsim_report_mission_time_s(r.get()), rfidsim_report_detected_count(r.get()),
              rfidsim_report_tag_count(r.get()));
  std::printf("%-24s  %-14s  %-8s  %-10s  %s\n", "epc", "kind", "detected", "read_s", "sensor");
  for (size_t i = 0; i < rfidsim_report_tag_count(r.get()); ++i) {
    rfidsim_tag_outcome t;
    check(rfidsim_report_tag(r.get(), i, &t), "report");
    std::printf("%-24s  %-14s  %-8s  %-10s  %s\n", t.epc, t.kind, t.detected ? "yes" : "no",
                fmt_opt(t.time_to_read_s, 1).c_str(), fmt_opt(t.sensor_value, 3).c_str());
  }
  return 0;
}

int cmd_montecarlo(const ScenarioArgs& sa, std::uint64_t runs, std::uint64_t base,
                   unsigned threads, const std::string& out, const std::string& summary_path) {
  auto s = sa.load();
  char* summary = nullptr;
  check(rfidsim_montecarlo(s.get(), runs, base, threads, out.empty() ? nullptr : out.c_str(),
                           &summary),
        "montecarlo");
  OwnedString owned(summary);
  if (summary_path.empty()) {
    std::cout << summary << "\n";
  } else {
    std::FILE* f = std::fopen(summary_path.c_str(), "wb");
    if (!f || std::fputs(summary, f) < 0) {
      std::cerr << "rfidsim: cannot write " << summary_path << "\n";
      if (f) std::fclose(f);
      return 2;
    }
    std::fclose(f);
  }
  return 0;
}

int cmd_presets() {
  for (size_t i = 0; i < rfidsim_preset_count(); ++i) std::cout << rfidsim_preset_name(i) << "\n";
  return 0;
}

int cmd_serve(const ScenarioArgs& sa, const std::string& host, int port,
              const std::string& data_dir, double speed) {
  auto s = sa.load();
  rfidsim_server* server = nullptr;
  check(rfidsim_server_start(s.get(), host.c_str(), port,
                             data_dir.empty() ? nullptr : data_dir.c_str(), speed, &server),
        "serve");
  std::cout << "listening on http://" << host << ":" << rfidsim_server_port(server) << std::endl;
  rfidsim_server_wait(server);
  rfidsim_server_free(server);
  return 0;
}

int cmd_show(const ScenarioArgs& sa) {
  auto s = sa.load();
  char* text = nullptr;
  check(rfidsim_scenario_to_json(s.get(), &text), "show");
  OwnedString owned(text);
  std::cout << text << "\n";
  return 0;
}

int cmd_log(const std::string& path) {
  char* text = nullptr;
  check(rfidsim_log_dump(path.c_str(), &text), "log");
  OwnedString owned(text);
  std::cout << text;
  return 0;
}

int cmd_link(const ScenarioArgs& sa, double distance) {
  auto s = sa.load();
  double sensor = 0.0, id = 0.0;
  check(rfidsim_link_ranges(s.get(), &sensor, &id), "link");
  std::printf("sensor range %.3f m\nid range     %.3f m\n", sensor, id);
  if (distance > 0.0) {
    double dbm = 0.0;
    check(rfidsim_link_received_dbm(s.get(), distance, &dbm), "link");
    std::printf("boresight power at %.3f m: %.2f dBm\n", distance, dbm);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV/UGV RFID field-survey simulator"};
  app.set_version_flag("--version", std::string(rfidsim_version()));
  app.require_subcommand(1);

  ScenarioArgs run_sa;
  std::optional<std::uint64_t> seed;
  std::string log_path;
  bool json = false;
  auto* run = app.add_subcommand("run", "run one mission");
  run_sa.add_to(run);
  run->add_option("--seed", seed, "random seed (default: the scenario's)");
  run->add_option("--log", log_path, "write the binary mission log here");
  run->add_flag("--json", json, "print the full report as JSON");

  ScenarioArgs mc_sa;
  std::uint64_t runs = 100;
  std::uint64_t base = 1;
  unsigned threads = 0;
  std::string out, summary;
  auto* mc = app.add_subcommand("montecarlo", "run a seed sweep");
  mc_sa.add_to(mc);
  mc->add_option("--runs", runs, "number of runs")->check(CLI::PositiveNumber);
  mc->add_option("--base-seed", base, "first seed");
  mc->add_option("--threads", threads, "worker threads (0: all cores)");
  mc->add_option("--out", out, "per-tag CSV output");
  mc->add_option("--summary", summary, "write the JSON summary here instead of stdout");

  auto* presets = app.add_subcommand("presets", "list built-in scenarios");

  ScenarioArgs serve_sa;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir;
  double speed = 1.0;
  auto* serve = app.add_subcommand("serve", "run the mission-control HTTP service");
  serve_sa.add_to(serve);
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port (0: any free port)")->check(CLI::Range(0, 65535));
  serve->add_option("--data-dir", data_dir, "persist missions and logs here");
  serve->add_option("--speed", speed, "simulated seconds per second (0: unthrottled)")
      ->check(CLI::NonNegativeNumber);

  ScenarioArgs show_sa;
  auto* show = app.add_subcommand("show", "print a scenario fully resolved, as JSON");
  show_sa.add_to(show);

  std::string dump_path;
  auto* log = app.add_subcommand("log", "decode a binary mission log to NDJSON");
  log->add_option("path", dump_path, "log file")->required()->check(CLI::ExistingFile);

  ScenarioArgs link_sa;
  double distance = 0.0;
  auto* link = app.add_subcommand("link", "boresight link budget of a scenario");
  link_sa.add_to(link);
  link->add_option("--distance", distance, "also print received power at this distance (m)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_sa, seed, log_path, json);
    if (*mc) return cmd_montecarlo(mc_sa, runs, base, threads, out, summary);
    if (*presets) return cmd_presets();
    if (*serve) {
      if (serve_sa.file.empty() && serve_sa.preset.empty()) serve_sa.preset = "uav_id_field";
      return cmd_serve(serve_sa, host, port, data_dir, speed);
    }
    if (*show) return cmd_show(show_sa);
    if (*log) return cmd_log(dump_path);
    if (*link) {
      if (link_sa.file.empty() && link_sa.preset.empty()) link_sa.preset = "uav_id_field";
      return cmd_link(link_sa, distance);
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return 0;
}
