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

#include <fstream>
#include <iterator>
#include <string>

#include "core/error.hpp"
#include "core/json_io.hpp"
#include "core/scenario.hpp"

using namespace rfidsim;

namespace {

template <class F>
std::optional<ErrorKind> kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("every preset validates") {
  const auto names = preset_names();
  CHECK(names.size() == 8);
  for (const auto& n : names) {
    CAPTURE(n);
    const auto c = apply_preset(n);
    CHECK(c.preset == n);
    CHECK_NOTHROW(c.validate());
  }
  CHECK(kind_of([] { apply_preset("nope"); }) == ErrorKind::kNotFound);
}

TEST_CASE("json roundtrip is a fixed point") {
  for (const auto& n : preset_names()) {
    CAPTURE(n);
    const std::string a = scenario_to_json(apply_preset(n));
    const std::string b = scenario_to_json(scenario_from_json(a));
    CHECK(a == b);
  }
}

TEST_CASE("shipped scenario files match the presets") {
  for (const auto& n : preset_names()) {
    CAPTURE(n);
    const auto text = read_file(std::string(RFIDSIM_SOURCE_DIR) + "/scenarios/" + n + ".json");
    CHECK(scenario_to_json(scenario_from_json(text)) == scenario_to_json(apply_preset(n)));
  }
}

TEST_CASE("preset overlay") {
  const auto c = scenario_from_json(R"({"preset": "uav_id_field", "seed": 99, "name": "x",
                                        "behavior": {"hover_s": 5.0}})");
  CHECK(c.seed == 99);
  CHECK(c.name == "x");
  CHECK(c.behavior.hover_s == 5.0);
  const auto base = apply_preset("uav_id_field");
  CHECK(c.tags.size() == base.tags.size());
  CHECK(c.behavior.circle_radius_m == base.behavior.circle_radius_m);
}

TEST_CASE("parse errors") {
  CHECK(kind_of([] { scenario_from_json("{"); }) == ErrorKind::kParse);
  CHECK(kind_of([] { scenario_from_json(R"({"bogus": 1})"); }) == ErrorKind::kParse);
  CHECK(kind_of([] { scenario_from_json(R"({"preset": "uav_id_field", "seed": "x"})"); }) ==
        ErrorKind::kParse);
  CHECK(kind_of([] { scenario_from_json(R"({"preset": "uav_id_field", "uav": {"warp": 9}})"); }) ==
        ErrorKind::kParse);
  CHECK(kind_of([] {
          scenario_from_json(R"({"preset": "uav_id_field", "waypoints": {"source": "spiral"}})");
        }) == ErrorKind::kParse);
  CHECK(kind_of([] { scenario_from_json(R"({"preset": "uav_id_field", "tags": [{"kind": "id"}]})"); }) ==
        ErrorKind::kParse);
  CHECK(kind_of([] { scenario_from_json(R"({"preset": "missing"})"); }) == ErrorKind::kNotFound);
}

TEST_CASE("validation errors") {
  auto base = apply_preset("uav_id_field");

  auto c = base;
  c.field.resize(2);
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::kValidation);

  c = base;
  c.home = {500.0, 0.0, 0.0};
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::kValidation);

  c = base;
  c.tags.push_back(c.tags.front());
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::kValidation);

  c = base;
  c.tags.front().position = {500.0, 0.0, 0.0};
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::kValidation);

  c = base;
  c.uav.cruise_speed = 0.0;
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::kConfig);

  c = base;
  c.waypoint_source = WaypointSource::kExplicit;
  c.waypoints.clear();
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::kValidation);

  // Scripts are checked for manual missions only.
  base.mode = MissionMode::kManual;
  c = base;
  ScriptStep drive;
  drive.op = ScriptOp::kDriveRead;
  drive.tag = c.tags.front().epc;
  c.script.push_back(drive);
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::kValidation);

  c = base;
  ScriptStep hover;
  hover.op = ScriptOp::kHoverRead;
  hover.tag = Epc::from_hex("FFFFFFFFFFFFFFFFFFFFFFFF");
  c.script.push_back(hover);
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::kValidation);
}

TEST_CASE("a link block without excess loss is recalibrated") {
  const auto c = scenario_from_json(R"({"preset": "uav_id_field", "link": {"tx_power_dbm": 27.0}})");
  CHECK(c.link.tx_power_dbm == 27.0);
  CHECK(boresight_read_range_m(c.link.sensor_threshold_dbm, c.link) == doctest::Approx(1.5));
  const auto fixed =
      scenario_from_json(R"({"preset": "uav_id_field", "link": {"excess_loss_db": 0.0}})");
  CHECK(fixed.link.excess_loss_db == 0.0);
}

TEST_CASE("mission request follows the tags") {
  const auto c = apply_preset("uav_id_field");
  const auto r = mission_request(c, 3);
  CHECK(r.seed == 3);
  CHECK(r.vehicle == c.vehicle);
  REQUIRE(r.waypoints.size() == c.tags.size());
  for (std::size_t i = 0; i < r.waypoints.size(); ++i) {
    CHECK(r.waypoints[i].expected == c.tags[i].epc);
    const auto p = enu_from_geodetic(c.origin, r.waypoints[i].position).position();
    CHECK(p.e == doctest::Approx(c.tags[i].position.e).epsilon(1e-6).scale(1.0));
    CHECK(p.n == doctest::Approx(c.tags[i].position.n).epsilon(1e-6).scale(1.0));
  }
}

}  // TEST_SUITE
