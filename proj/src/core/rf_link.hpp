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

#include "core/world.hpp"

namespace rfidsim {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kNearFieldCutoffM = 0.05;
// Pattern gains never fall below this linear value (-30 dB).
inline constexpr double kPatternFloor = 1e-3;

enum class PolarizationMode {
  kFixed,  // constant polarization_loss_db on every link
  kAngle,  // 20*log10|cos(phi)| between projected polarization vectors, capped
};

// Every RF quantity of the reader-to-tag link.
struct LinkConfig {
  double tx_power_dbm = 30.0;
  double frequency_hz = 915e6;
  double reader_gain_dbi = 6.0;
  // Gain of the circularly polarized lab patch used for the bench
  // measurements; kept for reference, not used by the link equation.
  double patch_gain_db = 5.5;
  double tag_dipole_gain_dbi = 3.5;
  PolarizationMode polarization_mode = PolarizationMode::kFixed;
  double polarization_loss_db = 3.0;
  double polarization_loss_cap_db = 20.0;
  double excess_loss_db = 0.0;
  double sensor_threshold_dbm = -5.0;
  double id_threshold_dbm = -12.0;
  double logistic_slope_db = 1.0;
  double beam_exponent = 2.0;
  double shadowing_sigma_db = 0.0;

  double wavelength_m() const { return kSpeedOfLight / frequency_hz; }
  // Polarization term applied when both antennas are perfectly co-aligned.
  double aligned_polarization_loss_db() const {
    return polarization_mode == PolarizationMode::kFixed ? polarization_loss_db : 0.0;
  }
  // Throws Error(kConfig) on the first violated constraint.
  void validate() const;
};

enum class PatternKind {
  kDirectional,  // cos^n rolloff about the boresight
  kDipole,       // toroidal, null along the dipole axis
};

// Where an antenna sits and where it points. For a dipole the pattern depends
// only on the polarization (element) axis; boresight is its broadside normal.
struct AntennaPose {
  EnuPose position;
  Vec3 boresight{0.0, 0.0, -1.0};
  Vec3 polarization{1.0, 0.0, 0.0};
};

struct Antenna {
  AntennaPose pose;
  PatternKind pattern = PatternKind::kDirectional;
  double gain_dbi = 0.0;
};

// 20*log10(4*pi*d/lambda); distance clamped to kNearFieldCutoffM.
double fspl_db(double distance_m, double frequency_hz);

// Pattern rolloff in dB (<= 0) toward a direction, relative to peak gain.
double pattern_db(PatternKind kind, const AntennaPose& pose, Vec3 toward, double exponent);

double polarization_loss_db(const AntennaPose& a, const AntennaPose& b, const LinkConfig& cfg);

// Generic one-way link; symmetric under exchange of the two antennas.
double link_power_dbm(const Antenna& tx, const Antenna& rx, const LinkConfig& cfg);

// Power at the tag RFIC terminals: directional reader antenna to dipole tag.
double received_power_dbm(const AntennaPose& reader, const AntennaPose& tag, const LinkConfig& cfg);

// Loss L making boresight power at target_range equal threshold, computed
// with polarization loss disabled. Throws kConfig if L would be negative.
double calibrate_excess_loss(double target_range_m, double threshold_dbm, const LinkConfig& cfg);

// cfg with excess_loss_db set so that the full default link (including the
// aligned polarization term) delivers threshold at target range on boresight.
LinkConfig calibrated(LinkConfig cfg, double target_range_m = 1.5);

// Range at which boresight power equals threshold under cfg.
double boresight_read_range_m(double threshold_dbm, const LinkConfig& cfg);

// Logistic edge: per-round success probability for a power margin.
double read_probability(double received_dbm, double threshold_dbm, double slope_db);

}  // namespace rfidsim
