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
#include "core/rf_link.hpp"
#include "core/rng.hpp"

using namespace rfidsim;

namespace {

AntennaPose reader_at(double h) {
  AntennaPose p;
  p.position = {0.0, 0.0, h, 0.0};
  p.boresight = {0.0, 0.0, -1.0};
  p.polarization = {1.0, 0.0, 0.0};
  return p;
}

AntennaPose ground_tag() {
  AntennaPose p;
  p.boresight = {0.0, 0.0, 1.0};
  p.polarization = {1.0, 0.0, 0.0};
  return p;
}

// Hand-written Friis budget for the aligned boresight pair.
double friis_oracle(double d, const LinkConfig& c) {
  const double lambda = 299792458.0 / c.frequency_hz;
  const double fspl = 20.0 * std::log10(4.0 * std::numbers::pi * d / lambda);
  return c.tx_power_dbm + c.reader_gain_dbi + c.tag_dipole_gain_dbi - fspl -
         c.polarization_loss_db - c.excess_loss_db;
}

// Root of received(d) = threshold by bisection on the full geometric model.
double bisect_range(double threshold, const LinkConfig& c) {
  double lo = 0.06, hi = 50.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (received_power_dbm(reader_at(mid), ground_tag(), c) >= threshold ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("rf_link") {

TEST_CASE("free-space path loss matches the closed form") {
  CHECK(fspl_db(1.0, 915e6) ==
        doctest::Approx(20.0 * std::log10(4.0 * std::numbers::pi * 915e6 / 299792458.0)));
  CHECK(fspl_db(2.0, 915e6) - fspl_db(1.0, 915e6) == doctest::Approx(20.0 * std::log10(2.0)));
  // Near-field cutoff.
  CHECK(fspl_db(0.01, 915e6) == fspl_db(kNearFieldCutoffM, 915e6));
  CHECK_THROWS_AS(fspl_db(1.0, 0.0), Error);
}

TEST_CASE("boresight power equals the Friis oracle") {
  const LinkConfig c = calibrated(LinkConfig{});
  for (double d : {0.3, 0.7, 1.0, 1.5, 2.2, 3.0, 5.0}) {
    CHECK(received_power_dbm(reader_at(d), ground_tag(), c) ==
          doctest::Approx(friis_oracle(d, c)).epsilon(1e-12));
  }
}

TEST_CASE("calibrated link reads sensor tags out to 1.5 m") {
  const LinkConfig c = calibrated(LinkConfig{});
  CHECK(bisect_range(c.sensor_threshold_dbm, c) == doctest::Approx(1.5).epsilon(0.01 / 1.5));
  CHECK(boresight_read_range_m(c.sensor_threshold_dbm, c) == doctest::Approx(1.5));
  CHECK(bisect_range(c.id_threshold_dbm, c) > 3.0);
  // 3 dB polarization folded in: about 9.3 dB of total excess.
  CHECK(c.excess_loss_db + c.polarization_loss_db == doctest::Approx(9.30).epsilon(0.01));
}

TEST_CASE("uncalibrated Friis overstates range") {
  LinkConfig c;
  c.polarization_loss_db = 0.0;
  const double r = boresight_read_range_m(c.sensor_threshold_dbm, c);
  CHECK(r > 4.0);
  CHECK(r < 5.0);
}

TEST_CASE("calibration rejects unreachable targets") {
  CHECK_THROWS_AS(calibrated(LinkConfig{}, 100.0), Error);
  CHECK_THROWS_AS(calibrate_excess_loss(0.0, -5.0, LinkConfig{}), Error);
}

TEST_CASE("power strictly decreases with distance on boresight") {
  const LinkConfig c = calibrated(LinkConfig{});
  double prev = received_power_dbm(reader_at(0.051), ground_tag(), c);
  for (double d = 0.06; d < 20.0; d += 0.01) {
    const double p = received_power_dbm(reader_at(d), ground_tag(), c);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("reciprocity") {
  const LinkConfig c = calibrated(LinkConfig{});
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    Antenna a{{{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0, 3), 0.0},
               normalized({rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)}),
               normalized({rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)})},
              PatternKind::kDirectional,
              6.0};
    Antenna b{{{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0, 3), 0.0},
               normalized({rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)}),
               normalized({rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)})},
              PatternKind::kDipole,
              3.5};
    CHECK(link_power_dbm(a, b, c) == doctest::Approx(link_power_dbm(b, a, c)).epsilon(1e-12));
    LinkConfig ang = c;
    ang.polarization_mode = PolarizationMode::kAngle;
    CHECK(link_power_dbm(a, b, ang) == doctest::Approx(link_power_dbm(b, a, ang)).epsilon(1e-12));
  }
}

TEST_CASE("antenna patterns") {
  AntennaPose p = reader_at(1.0);
  // cos^2 at 60 degrees off boresight.
  const double t = std::numbers::pi / 3.0;
  CHECK(pattern_db(PatternKind::kDirectional, p, {std::sin(t), 0.0, -std::cos(t)}, 2.0) ==
        doctest::Approx(20.0 * std::log10(0.5)));
  // Behind the patch: floored.
  CHECK(pattern_db(PatternKind::kDirectional, p, {0.0, 0.0, 1.0}, 2.0) ==
        doctest::Approx(10.0 * std::log10(kPatternFloor)));
  // Dipole: full gain broadside, null along the element.
  CHECK(pattern_db(PatternKind::kDipole, p, {0.0, 1.0, 0.0}, 2.0) == doctest::Approx(0.0));
  CHECK(pattern_db(PatternKind::kDipole, p, {1.0, 0.0, 0.0}, 2.0) ==
        doctest::Approx(10.0 * std::log10(kPatternFloor)));
  CHECK(pattern_db(PatternKind::kDipole, p, {1.0, 1.0, 0.0}, 2.0) ==
        doctest::Approx(10.0 * std::log10(0.5)));
}

TEST_CASE("angle-dependent polarization loss") {
  LinkConfig c;
  c.polarization_mode = PolarizationMode::kAngle;
  AntennaPose a = reader_at(1.0);
  AntennaPose b = ground_tag();
  CHECK(polarization_loss_db(a, b, c) == doctest::Approx(0.0));
  b.polarization = normalized({1.0, 1.0, 0.0});
  CHECK(polarization_loss_db(a, b, c) == doctest::Approx(-20.0 * std::log10(std::sqrt(0.5))));
  b.polarization = {0.0, 1.0, 0.0};
  CHECK(polarization_loss_db(a, b, c) == doctest::Approx(c.polarization_loss_cap_db));
  c.polarization_mode = PolarizationMode::kFixed;
  CHECK(polarization_loss_db(a, b, c) == doctest::Approx(3.0));
}

TEST_CASE("read probability") {
  CHECK(read_probability(-5.0, -5.0, 1.0) == doctest::Approx(0.5));
  CHECK(read_probability(1.0, -5.0, 1.0) == doctest::Approx(1.0 / (1.0 + std::exp(-6.0))));
  CHECK(read_probability(1.0, -5.0, 1.0) == doctest::Approx(0.9975).epsilon(1e-4));
  double prev = 0.0;
  for (double p = -40.0; p < 20.0; p += 0.1) {
    const double r = read_probability(p, -5.0, 1.0);
    CHECK(r >= prev);
    prev = r;
  }
  CHECK_THROWS_AS(read_probability(0.0, 0.0, 0.0), Error);
}

TEST_CASE("link config validation") {
  LinkConfig c;
  CHECK_NOTHROW(c.validate());
  c.tx_power_dbm = 31.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = LinkConfig{};
  c.id_threshold_dbm = -4.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = LinkConfig{};
  c.reader_gain_dbi = INFINITY;
  CHECK_THROWS_AS(c.validate(), Error);
}

}  // TEST_SUITE
