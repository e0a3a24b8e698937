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


#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/simrunner.hpp"

using namespace rfidsim;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

TEST_SUITE("simrunner") {

TEST_CASE("wilson interval matches tabulated values") {
  const auto a = wilson_interval(5, 10);
  CHECK(a.lo == doctest::Approx(0.2366).epsilon(1e-3));
  CHECK(a.hi == doctest::Approx(0.7634).epsilon(1e-3));
  const auto b = wilson_interval(0, 10);
  CHECK(b.lo == doctest::Approx(0.0));
  CHECK(b.hi == doctest::Approx(0.2775).epsilon(1e-3));
  const auto c = wilson_interval(10, 10);
  CHECK(c.lo == doctest::Approx(0.7225).epsilon(1e-3));
  CHECK(c.hi == doctest::Approx(1.0));
  const auto d = wilson_interval(81, 263);
  CHECK(d.lo == doctest::Approx(0.2553).epsilon(2e-3));
  CHECK(d.hi == doctest::Approx(0.3662).epsilon(2e-3));
}

TEST_CASE("wilson interval covers about 95% of binomial draws") {
  Rng rng = Rng::stream(5, "wilson");
  for (double p : {0.2, 0.5, 0.9}) {
    int covered = 0;
    const int trials = 4000;
    for (int t = 0; t < trials; ++t) {
      std::uint64_t k = 0;
      for (int i = 0; i < 100; ++i) k += rng.uniform() < p ? 1 : 0;
      const auto ci = wilson_interval(k, 100);
      covered += (ci.lo <= p && p <= ci.hi) ? 1 : 0;
      CHECK(ci.lo <= static_cast<double>(k) / 100.0);
      CHECK(ci.hi >= static_cast<double>(k) / 100.0);
    }
    const double cov = static_cast<double>(covered) / trials;
    CAPTURE(p);
    CHECK(cov > 0.92);
    CHECK(cov < 0.98);
  }
}

TEST_CASE("runs are deterministic in the seed") {
  const auto cfg = apply_preset("ugv_sensor_field");
  const auto a = run_scenario(cfg, 3);
  const auto b = run_scenario(cfg, 3);
  const auto c = run_scenario(cfg, 4);
  CHECK(serialize_log(a.log) == serialize_log(b.log));
  CHECK(a.tags == b.tags);
  CHECK(serialize_log(a.log) != serialize_log(c.log));
}

TEST_CASE("report outcomes come from the log") {
  const auto cfg = apply_preset("uav_sensor_field");
  const auto r = run_scenario(cfg, 1);
  CHECK(r.tags == outcomes_from_log(cfg.tags, r.log));
  REQUIRE(r.tags.size() == cfg.tags.size());
  int detected = 0;
  for (std::size_t i = 0; i < r.tags.size(); ++i) {
    const auto& t = r.tags[i];
    CHECK(t.epc == cfg.tags[i].epc);
    CHECK(t.kind == cfg.tags[i].kind);
    CHECK(t.detected == t.time_to_read_s.has_value());
    if (t.time_to_read_s) {
      CHECK(*t.time_to_read_s >= 0.0);
      CHECK(*t.time_to_read_s <= r.mission_time_s);
    }
    detected += t.detected ? 1 : 0;
  }
  CHECK(detected == r.detected);
}

TEST_CASE("log file equals the in-memory log") {
  const auto path = std::filesystem::temp_directory_path() /
                    ("rfidsim-run-" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()) + ".log");
  const auto r = run_scenario(apply_preset("uav_id_field"), 2, path);
  std::ifstream f(path, std::ios::binary);
  const Bytes bytes{std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
  CHECK(bytes == serialize_log(r.log));
  std::filesystem::remove(path);
}

TEST_CASE("outcomes do not depend on the origin altitude") {
  for (const char* name : {"uav_id_field", "uav_sensor_field"}) {
    CAPTURE(name);
    auto cfg = apply_preset(name);
    const auto low = run_scenario(cfg, 5);
    cfg.origin.alt = 350.0;
    const auto high = run_scenario(cfg, 5);
    CHECK(low.tags == high.tags);
    CHECK(low.mission_time_s == high.mission_time_s);
  }
}

TEST_CASE("manual runs need a script") {
  auto cfg = apply_preset("uav_id_field");
  cfg.mode = MissionMode::kManual;
  cfg.script.clear();
  try {
    run_scenario(cfg, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kValidation);
  }
}

TEST_CASE("monte carlo is independent of the thread count") {
  const auto cfg = apply_preset("ugv_id_field");
  const auto one = monte_carlo(cfg, 6, 10, 1);
  const auto many = monte_carlo(cfg, 6, 10, 4);
  CHECK(monte_carlo_csv(one) == monte_carlo_csv(many));
  CHECK(summary_to_json(one) == summary_to_json(many));
  REQUIRE(one.per_run.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(one.per_run[i].seed == 10 + i);
    CHECK(one.per_run[i].tags == run_scenario(cfg, 10 + i).tags);
  }
}

TEST_CASE("monte carlo bookkeeping") {
  const auto cfg = apply_preset("uav_id_field");
  const auto s = monte_carlo(cfg, 5, 1, 0);
  CHECK(s.runs == 5);
  CHECK(s.trials == 5 * cfg.tags.size());
  CHECK(s.detections <= s.trials);
  std::uint64_t sum = 0;
  for (const auto& t : s.per_tag) {
    sum += t.detections;
    CHECK(t.rate == doctest::Approx(static_cast<double>(t.detections) / 5.0));
    CHECK(t.ci.lo <= t.rate);
    CHECK(t.ci.hi >= t.rate);
  }
  CHECK(sum == s.detections);
  CHECK(s.detection_rate == doctest::Approx(static_cast<double>(s.detections) / s.trials));
  CHECK(s.ttr_median_s <= s.ttr_p90_s);
  CHECK(s.ttr_p90_s <= s.ttr_max_s);
  CHECK_THROWS_AS(monte_carlo(cfg, 0, 1, 1), Error);
}

TEST_CASE("monte carlo csv layout") {
  const auto cfg = apply_preset("uav_sensor_field");
  const auto s = monte_carlo(cfg, 3, 1, 0);
  const auto lines = split(monte_carlo_csv(s), '\n');
  REQUIRE(lines.size() == 1 + 3 * cfg.tags.size() + 1);
  CHECK(lines.front() == "run_id,tag_epc,detected,time_to_read_s,sensor_value");
  CHECK(lines.back().empty());
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    const auto cols = split(lines[i], ',');
    REQUIRE(cols.size() == 5);
    CHECK(std::stoul(cols[0]) == (i - 1) / cfg.tags.size());
    CHECK(cols[1].size() == 24);
    CHECK((cols[2] == "0" || cols[2] == "1"));
    CHECK((cols[2] == "1") == !cols[3].empty());
    if (!cols[4].empty()) CHECK(cols[2] == "1");
  }
}

}  // TEST_SUITE
