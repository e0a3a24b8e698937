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

#include <cmath>
#include <set>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/tag_model.hpp"

using namespace rfidsim;

TEST_SUITE("tag_model") {

TEST_CASE("epc hex round trip") {
  const Epc e = Epc::from_hex("300833b2ddd9014000000001");
  CHECK(e.to_hex() == "300833B2DDD9014000000001");
  CHECK(e.bytes()[0] == 0x30);
  CHECK(e.bytes()[11] == 0x01);
  CHECK(Epc::from_hex(e.to_hex()) == e);
  CHECK_THROWS_AS(Epc::from_hex("300833b2"), Error);
  CHECK_THROWS_AS(Epc::from_hex("300833b2ddd901400000000g"), Error);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    Epc::Bytes b;
    for (auto& x : b) x = static_cast<std::uint8_t>(rng.below(256));
    CHECK(Epc::from_hex(Epc(b).to_hex()) == Epc(b));
  }
}

TEST_CASE("moisture law endpoints and closed form") {
  const SensorCalibration cal;
  CHECK(moisture_to_resistance(0.0, cal) == doctest::Approx(cal.r_dry_ohm));
  CHECK(moisture_to_resistance(cal.theta_sat, cal) == doctest::Approx(cal.r_sat_ohm));
  // Geometric midpoint at half saturation.
  CHECK(moisture_to_resistance(cal.theta_sat / 2, cal) ==
        doctest::Approx(std::sqrt(cal.r_dry_ohm * cal.r_sat_ohm)));
  CHECK_THROWS_AS(moisture_to_resistance(-0.01, cal), Error);
  CHECK_THROWS_AS(moisture_to_resistance(cal.theta_sat + 0.01, cal), Error);
  CHECK_THROWS_AS(resistance_to_moisture(cal.r_dry_ohm * 2, cal), Error);
}

TEST_CASE("moisture law is a strictly decreasing bijection") {
  const SensorCalibration cal;
  double prev = INFINITY;
  for (int i = 0; i <= 10000; ++i) {
    const double theta = cal.theta_sat * i / 10000.0;
    const double r = moisture_to_resistance(theta, cal);
    CHECK(r < prev);
    prev = r;
    CHECK(std::abs(resistance_to_moisture(r, cal) - theta) < 1e-9);
  }
}

TEST_CASE("bad calibration rejected") {
  SensorCalibration cal;
  cal.r_sat_ohm = cal.r_dry_ohm;
  CHECK_THROWS_AS(cal.validate(), Error);
}

TEST_CASE("moisture field is clamped") {
  MoistureField f{0.2, 0.01, 0.0};
  CHECK(f.at(10.0, 0.0, 0.45) == doctest::Approx(0.3));
  CHECK(f.at(100.0, 0.0, 0.45) == doctest::Approx(0.45));
  CHECK(f.at(-100.0, 0.0, 0.45) == doctest::Approx(0.0));
}

TEST_CASE("sense per kind") {
  Environment env;
  env.soil_moisture = {0.18, 0.0, 0.0};
  SensorCalibration cal;
  Tag t;
  t.kind = TagKind::kHydroMoisture;
  SensorValue v = sense(t, env, cal);
  CHECK(v.unit == "ohm");
  CHECK(v.value_milli == std::llround(moisture_to_resistance(0.18, cal) * 1000));
  REQUIRE(v.temperature_milli_c);
  CHECK(*v.temperature_milli_c == 22000);
  t.kind = TagKind::kConductivity;
  CHECK(sense(t, env, cal).value_milli == 500000);
  t.kind = TagKind::kLight;
  CHECK(sense(t, env, cal).value_milli == 20000000);
  t.kind = TagKind::kTemperature;
  CHECK(sense(t, env, cal).unit == "degC");
  t.kind = TagKind::kIdOnly;
  CHECK_THROWS_AS(sense(t, env, cal), Error);
}

TEST_CASE("charge accrues only under continuous power") {
  const LinkConfig link;
  const ChargeConfig charge;
  Tag t;
  t.kind = TagKind::kHydroMoisture;
  for (int i = 0; i < 9; ++i) t = powered_state_update(t, -4.0, 0.1, link, charge);
  CHECK_FALSE(sensor_ready(t, charge));
  t = powered_state_update(t, -4.0, 0.1, link, charge);
  CHECK(sensor_ready(t, charge));
  t = powered_state_update(t, -4.0, 0.1, link, charge);
  CHECK(t.charge_s == charge.charge_required_s);
  t = powered_state_update(t, -6.0, 0.1, link, charge);
  CHECK(t.charge_s == 0.0);
  CHECK_FALSE(sensor_ready(t, charge));
  CHECK_THROWS_AS(powered_state_update(t, 0.0, 0.0, link, charge), Error);
}

TEST_CASE("charge stays within bounds for random power") {
  const LinkConfig link;
  const ChargeConfig charge;
  Rng rng(9);
  Tag t;
  t.kind = TagKind::kLight;
  for (int i = 0; i < 10000; ++i) {
    t = powered_state_update(t, rng.uniform(-10, 0), rng.uniform(0.01, 0.3), link, charge);
    CHECK(t.charge_s >= 0.0);
    CHECK(t.charge_s <= charge.charge_required_s);
  }
}

TEST_CASE("id tags are never sensor ready") {
  Tag t;
  t.charge_s = 5.0;
  CHECK_FALSE(sensor_ready(t, ChargeConfig{}));
}

TEST_CASE("tag kind names") {
  for (auto k : {TagKind::kIdOnly, TagKind::kHydroMoisture, TagKind::kConductivity,
                 TagKind::kLight, TagKind::kTemperature}) {
    CHECK(tag_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(tag_kind_from_string("humidity"), Error);
}

}  // TEST_SUITE
