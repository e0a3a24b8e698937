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

#include "core/rf_link.hpp"

#include <algorithm>
#include <numbers>

#include "core/error.hpp"

namespace rfidsim {

namespace {

double to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace

void LinkConfig::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(tx_power_dbm) || tx_power_dbm > 30.0) {
    fail(ErrorKind::kConfig, "tx_power_dbm must be finite and <= 30 dBm (1 W)");
  }
  if (!(frequency_hz > 0.0) || !finite(frequency_hz)) {
    fail(ErrorKind::kConfig, "frequency_hz must be > 0");
  }
  if (!finite(reader_gain_dbi) || !finite(tag_dipole_gain_dbi) || !finite(patch_gain_db)) {
    fail(ErrorKind::kConfig, "antenna gains must be finite");
  }
  if (!finite(excess_loss_db) || !finite(polarization_loss_db) || polarization_loss_db < 0.0 ||
      !(polarization_loss_cap_db >= 0.0)) {
    fail(ErrorKind::kConfig, "losses must be finite and polarization loss >= 0");
  }
  if (!finite(sensor_threshold_dbm) || !finite(id_threshold_dbm) ||
      !(sensor_threshold_dbm > id_threshold_dbm)) {
    fail(ErrorKind::kConfig, "sensor_threshold_dbm must exceed id_threshold_dbm");
  }
  if (!(logistic_slope_db > 0.0) || !finite(logistic_slope_db)) {
    fail(ErrorKind::kConfig, "logistic_slope_db must be > 0");
  }
  if (!(beam_exponent > 0.0) || !finite(beam_exponent)) {
    fail(ErrorKind::kConfig, "beam_exponent must be > 0");
  }
  if (!(shadowing_sigma_db >= 0.0)) {
    fail(ErrorKind::kConfig, "shadowing_sigma_db must be >= 0");
  }
}

double fspl_db(double distance_m, double frequency_hz) {
  if (!(frequency_hz > 0.0)) fail(ErrorKind::kDomain, "frequency must be > 0");
  const double d = std::max(distance_m, kNearFieldCutoffM);
  const double lambda = kSpeedOfLight / frequency_hz;
  return 20.0 * std::log10(4.0 * std::numbers::pi * d / lambda);
}

double pattern_db(PatternKind kind, const AntennaPose& pose, Vec3 toward, double exponent) {
  const Vec3 dir = normalized(toward);
  if (norm(dir) == 0.0) return 0.0;
  double g = 0.0;
  if (kind == PatternKind::kDirectional) {
    const double c = dot(dir, normalized(pose.boresight));
    g = c > 0.0 ? std::pow(c, exponent) : 0.0;
  } else {
    // sin^2 of the angle from the element axis.
    const double c = dot(dir, normalized(pose.polarization));
    g = std::max(0.0, 1.0 - c * c);
  }
  return to_db(std::max(g, kPatternFloor));
}

double polarization_loss_db(const AntennaPose& a, const AntennaPose& b, const LinkConfig& cfg) {
  if (cfg.polarization_mode == PolarizationMode::kFixed) return cfg.polarization_loss_db;
  const Vec3 los = normalized(b.position.position() - a.position.position());
  auto project = [&](Vec3 p) { return normalized(p - dot(p, los) * los); };
  const Vec3 pa = project(a.polarization);
  const Vec3 pb = project(b.polarization);
  if (norm(pa) == 0.0 || norm(pb) == 0.0) return cfg.polarization_loss_cap_db;
  const double c = std::abs(dot(pa, pb));
  if (c <= 0.0) return cfg.polarization_loss_cap_db;
  return std::min(-20.0 * std::log10(c), cfg.polarization_loss_cap_db);
}

double link_power_dbm(const Antenna& tx, const Antenna& rx, const LinkConfig& cfg) {
  const Vec3 a = tx.pose.position.position();
  const Vec3 b = rx.pose.position.position();
  const double d = norm(b - a);
  const double exp_tx = tx.pattern == PatternKind::kDirectional ? cfg.beam_exponent : 2.0;
  const double exp_rx = rx.pattern == PatternKind::kDirectional ? cfg.beam_exponent : 2.0;
  return cfg.tx_power_dbm + tx.gain_dbi + pattern_db(tx.pattern, tx.pose, b - a, exp_tx) +
         rx.gain_dbi + pattern_db(rx.pattern, rx.pose, a - b, exp_rx) -
         fspl_db(d, cfg.frequency_hz) - polarization_loss_db(tx.pose, rx.pose, cfg) -
         cfg.excess_loss_db;
}

double received_power_dbm(const AntennaPose& reader, const AntennaPose& tag, const LinkConfig& cfg) {
  return link_power_dbm(Antenna{reader, PatternKind::kDirectional, cfg.reader_gain_dbi},
                        Antenna{tag, PatternKind::kDipole, cfg.tag_dipole_gain_dbi}, cfg);
}

double calibrate_excess_loss(double target_range_m, double threshold_dbm, const LinkConfig& cfg) {
  if (!(target_range_m > 0.0)) fail(ErrorKind::kDomain, "target range must be > 0");
  const double budget = cfg.tx_power_dbm + cfg.reader_gain_dbi + cfg.tag_dipole_gain_dbi -
                        fspl_db(target_range_m, cfg.frequency_hz);
  const double loss = budget - threshold_dbm;
  if (loss < 0.0) {
    fail(ErrorKind::kConfig,
         "calibration needs negative excess loss: gains cannot reach the target range");
  }
  return loss;
}

LinkConfig calibrated(LinkConfig cfg, double target_range_m) {
  const double total = calibrate_excess_loss(target_range_m, cfg.sensor_threshold_dbm, cfg);
  cfg.excess_loss_db = total - cfg.aligned_polarization_loss_db();
  if (cfg.excess_loss_db < 0.0) {
    fail(ErrorKind::kConfig, "polarization loss exceeds the calibrated total loss");
  }
  return cfg;
}

double boresight_read_range_m(double threshold_dbm, const LinkConfig& cfg) {
  const double allowed_fspl = cfg.tx_power_dbm + cfg.reader_gain_dbi + cfg.tag_dipole_gain_dbi -
                              cfg.aligned_polarization_loss_db() - cfg.excess_loss_db -
                              threshold_dbm;
  const double d = cfg.wavelength_m() / (4.0 * std::numbers::pi) * std::pow(10.0, allowed_fspl / 20.0);
  return std::max(d, kNearFieldCutoffM);
}

double read_probability(double received_dbm, double threshold_dbm, double slope_db) {
  if (!(slope_db > 0.0)) fail(ErrorKind::kDomain, "logistic slope must be > 0");
  return 1.0 / (1.0 + std::exp(-(received_dbm - threshold_dbm) / slope_db));
}

}  // namespace rfidsim
