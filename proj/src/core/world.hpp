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

#include <cmath>

#include "core/rng.hpp"

namespace rfidsim {

inline constexpr double kEarthRadiusM = 6371000.0;

struct Vec3 {
  double e = 0.0;
  double n = 0.0;
  double u = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.e + b.e, a.n + b.n, a.u + b.u}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.e - b.e, a.n - b.n, a.u - b.u}; }
  friend Vec3 operator*(double s, Vec3 v) { return {s * v.e, s * v.n, s * v.u}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.e * b.e + a.n * b.n + a.u * b.u; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.n * b.u - a.u * b.n, a.u * b.e - a.e * b.u, a.e * b.n - a.n * b.e};
}
inline double norm(Vec3 v) { return std::sqrt(dot(v, v)); }
inline double horizontal_distance(Vec3 a, Vec3 b) { return std::hypot(a.e - b.e, a.n - b.n); }
Vec3 normalized(Vec3 v);

// WGS-84 latitude/longitude in degrees; alt in meters above the mission origin.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
  double alt = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// Local east/north/up frame anchored at the mission origin. yaw is measured
// counter-clockwise from east, in radians.
struct EnuPose {
  double east = 0.0;
  double north = 0.0;
  double up = 0.0;
  double yaw = 0.0;

  Vec3 position() const { return {east, north, up}; }
  static EnuPose at(Vec3 p, double yaw = 0.0) { return {p.e, p.n, p.u, yaw}; }

  friend bool operator==(const EnuPose&, const EnuPose&) = default;
};

void validate(const GeoPoint& p);

// Equirectangular small-area projection around origin.
EnuPose enu_from_geodetic(const GeoPoint& origin, const GeoPoint& p);
GeoPoint geodetic_from_enu(const GeoPoint& origin, const EnuPose& p);

struct GpsModel {
  double bias_sigma_m = 1.5;
  double noise_sigma_m = 0.5;
};

struct BaroModel {
  double bias_sigma_m = 0.5;
  double noise_sigma_m = 0.15;
};

// Horizontal GPS fix: a constant per-mission bias plus white noise. Altitude
// passes through untouched; altitude comes from the barometer.
class GpsSensor {
 public:
  // Draws the per-mission bias from rng.
  GpsSensor(const GpsModel& model, Rng& rng);
  GpsSensor(const GpsModel& model, double bias_east_m, double bias_north_m);

  EnuPose sample(const EnuPose& truth, Rng& rng) const;

  double bias_east() const { return bias_e_; }
  double bias_north() const { return bias_n_; }
  const GpsModel& model() const { return model_; }

 private:
  GpsModel model_;
  double bias_e_ = 0.0;
  double bias_n_ = 0.0;
};

// Barometric altitude relative to the takeoff point: measured = true + bias + noise.
class BaroSensor {
 public:
  BaroSensor(const BaroModel& model, Rng& rng);
  BaroSensor(const BaroModel& model, double bias_m);

  double sample(double true_alt_m, Rng& rng) const;
  double bias() const { return bias_; }

 private:
  BaroModel model_;
  double bias_ = 0.0;
};

// One-shot helpers: a fresh mission (fresh bias) per call.
EnuPose sample_gps(const EnuPose& truth, const GpsModel& model, Rng& rng);
double sample_baro_alt(double true_alt_m, const BaroModel& model, Rng& rng);

}  // namespace rfidsim
