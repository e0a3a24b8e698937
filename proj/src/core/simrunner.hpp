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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "core/mission_control.hpp"
#include "core/scenario.hpp"

namespace rfidsim {

struct TagOutcome {
  Epc epc;
  TagKind kind = TagKind::kIdOnly;
  bool detected = false;
  std::optional<double> time_to_read_s;
  // First reading of the tag's own sensor, in display units.
  std::optional<double> sensor_value;

  friend bool operator==(const TagOutcome&, const TagOutcome&) = default;
};

// What the pilot achieved on one script step (manual missions).
struct StepOutcome {
  ScriptOp op = ScriptOp::kGoto;
  std::optional<Epc> tag;
  bool ok = false;
  std::optional<std::uint64_t> start_ms;    // step began
  std::optional<std::uint64_t> arrived_ms;  // hover/stop point reached
  std::optional<std::uint64_t> read_ms;     // first sensor read during the step
  std::optional<std::int32_t> sensor_value_milli;
};

struct RunReport {
  std::string scenario;
  std::uint64_t seed = 0;
  MissionRecord record;
  MissionView view;
  double mission_time_s = 0.0;
  std::vector<TagOutcome> tags;
  int detected = 0;
  std::vector<StepOutcome> steps;
  std::vector<LogRecord> log;
};

// Display unit of a tag kind's sensor value.
std::string_view sensor_unit(TagKind kind);

// Detection outcomes derived solely from the TAG_READ frames in a mission log.
std::vector<TagOutcome> outcomes_from_log(std::span<const TagSpec> tags,
                                          std::span<const LogRecord> log);

// Deterministic in (cfg, seed). Writes the event log when log_path is given.
RunReport run_scenario(const ScenarioConfig& cfg, std::uint64_t seed,
                       const std::optional<std::filesystem::path>& log_path = std::nullopt);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// 95% Wilson score interval for k successes in n trials.
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);

struct TagRate {
  Epc epc;
  std::uint64_t detections = 0;
  double rate = 0.0;
  Interval ci;
};

struct RunSummary {
  std::uint64_t seed = 0;
  double mission_time_s = 0.0;
  MissionStatus status = MissionStatus::kPlanned;
  std::vector<TagOutcome> tags;
};

struct MonteCarloSummary {
  std::string scenario;
  std::uint64_t runs = 0;
  std::uint64_t base_seed = 0;
  std::uint64_t trials = 0;  // runs x tags
  std::uint64_t detections = 0;
  double detection_rate = 0.0;
  Interval ci;
  std::vector<TagRate> per_tag;
  std::uint64_t aborted = 0;
  double mean_mission_time_s = 0.0;
  // Time-to-read over detected tags.
  double ttr_mean_s = 0.0;
  double ttr_median_s = 0.0;
  double ttr_p90_s = 0.0;
  double ttr_max_s = 0.0;
  std::vector<RunSummary> per_run;
};

// Runs seeds base_seed .. base_seed+runs-1; threads = 0 picks the hardware count.
MonteCarloSummary monte_carlo(const ScenarioConfig& cfg, std::uint64_t runs,
                              std::uint64_t base_seed, unsigned threads = 0);

// Columns: run_id, tag_epc, detected, time_to_read_s, sensor_value.
std::string monte_carlo_csv(const MonteCarloSummary& s);

std::string report_to_json(const RunReport& r);
std::string summary_to_json(const MonteCarloSummary& s);

}  // namespace rfidsim
