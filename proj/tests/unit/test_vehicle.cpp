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
#include <numbers>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/vehicle.hpp"

using namespace rfidsim;

TEST_SUITE("vehicle") {

TEST_CASE("uav goto respects per-axis speed limits") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    UavState s;
    s.pose = {rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(0, 5), 0.0};
    const GotoSetpoint g{{rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(0, 5)}, 0.0};
    for (int i = 0; i < 600; ++i) {
      const UavState next = step_uav(s, g, 0.1);
      CHECK(horizontal_distance(next.pose.position(), s.pose.position()) <=
            s.limits.cruise_speed * 0.1 + 1e-9);
      const double dz = next.pose.up - s.pose.up;
      CHECK(dz <= s.limits.ascend_speed * 0.1 + 1e-9);
      CHECK(-dz <= s.limits.descend_speed * 0.1 + 1e-9);
      s = next;
    }
    CHECK(uav_reached(s, g));
  }
}

TEST_CASE("uav vertical timing") {
  UavState s;
  s.pose = {0.0, 0.0, 3.5, 0.0};
  const GotoSetpoint down{{0.0, 0.0, 1.5}, 0.0};
  int ticks = 0;
  while (!uav_reached(s, down)) {
    s = step_uav(s, down, 0.1);
    ++ticks;
  }
  CHECK(ticks == 80);  // 2 m at 25 cm/s
  const GotoSetpoint up{{0.0, 0.0, 3.5}, 0.0};
  ticks = 0;
  while (!uav_reached(s, up)) {
    s = step_uav(s, up, 0.1);
    ++ticks;
  }
  CHECK(ticks == 8);  // 2 m at 2.5 m/s
}

TEST_CASE("uav never goes below ground") {
  UavState s;
  s.pose = {0.0, 0.0, 0.3, 0.0};
  const GotoSetpoint g{{0.0, 0.0, -2.0}, 0.0};
  for (int i = 0; i < 50; ++i) s = step_uav(s, g, 0.1);
  CHECK(s.pose.up == 0.0);
}

TEST_CASE("uav circle sweeps the commanded arc at tangential speed") {
  UavState s;
  s.pose = {0.0, 0.0, 1.5, 0.0};
  const CircleSetpoint c{{0.0, 0.0, 1.5}, 2.0, 270.0};
  int ticks = 0;
  while (!uav_reached(s, c)) {
    s = step_uav(s, c, 0.1);
    ++ticks;
    REQUIRE(ticks < 1000);
  }
  const double expect = 1.5 * std::numbers::pi * 2.0 / 0.5;  // 270 deg at r=2, 0.5 m/s
  CHECK(ticks * 0.1 == doctest::Approx(expect).epsilon(0.01));
  // After the initial catch-up the vehicle tracks the circle.
  CHECK(std::hypot(s.pose.east, s.pose.north) == doctest::Approx(2.0).epsilon(0.05));
  CHECK_THROWS_AS(step_uav(s, CircleSetpoint{{0, 0, 1.5}, 0.0, 90.0}, 0.1), Error);
}

TEST_CASE("ugv drives within speed and turn limits") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    UgvState s;
    s.pose = {rng.uniform(-10, 10), rng.uniform(-10, 10), 0.0, rng.uniform(-3, 3)};
    const GotoSetpoint g{{rng.uniform(-10, 10), rng.uniform(-10, 10), 0.0}, -1.0};
    int i = 0;
    for (; i < 2000 && !ugv_reached(s, g); ++i) {
      const UgvState next = step_ugv(s, g, 0.1);
      CHECK(horizontal_distance(next.pose.position(), s.pose.position()) <=
            s.limits.speed * 0.1 + 1e-9);
      CHECK(std::abs(wrap_angle(next.pose.yaw - s.pose.yaw)) <=
            s.limits.speed / s.limits.min_turn_radius * 0.1 + 1e-9);
      s = next;
    }
    CHECK(ugv_reached(s, g));
    CHECK(horizontal_distance(s.pose.position(), g.target) <= s.limits.arrival_tol + 1e-9);
  }
}

TEST_CASE("ugv stops on non-goto setpoints") {
  UgvState s;
  s.speed_now = 1.0;
  s = step_ugv(s, HoldSetpoint{}, 0.1);
  CHECK(s.speed_now == 0.0);
  CHECK(s.pose == EnuPose{});
}

TEST_CASE("stepping is deterministic") {
  UavState a, b;
  const CircleSetpoint c{{1.0, 1.0, 1.5}, 2.0, 360.0};
  for (int i = 0; i < 300; ++i) {
    a = step_uav(a, c, 0.1);
    b = step_uav(b, c, 0.1);
  }
  CHECK(a.pose == b.pose);
}

TEST_CASE("dt must be positive") {
  CHECK_THROWS_AS(step_uav(UavState{}, HoldSetpoint{}, 0.0), Error);
  CHECK_THROWS_AS(step_ugv(UgvState{}, HoldSetpoint{}, -1.0), Error);
}

TEST_CASE("wrap angle") {
  CHECK(wrap_angle(3 * std::numbers::pi / 2) == doctest::Approx(-std::numbers::pi / 2));
  CHECK(wrap_angle(-3 * std::numbers::pi / 2) == doctest::Approx(std::numbers::pi / 2));
  CHECK(wrap_angle(0.5) == doctest::Approx(0.5));
}

}  // TEST_SUITE
