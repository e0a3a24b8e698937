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

#include "core/world.hpp"

#include <numbers>
#include <sstream>

#include "core/error.hpp"

namespace rfidsim {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_sigma(double s, const char* what) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    fail(ErrorKind::kConfig, std::string(what) + " must be a finite value >= 0");
  }
}

}  // namespace

Vec3 normalized(Vec3 v) {
  const double l = norm(v);
  if (l == 0.0) return {0.0, 0.0, 0.0};
  return (1.0 / l) * v;
}

void validate(const GeoPoint& p) {
  if (!(p.lat >= -90.0 && p.lat <= 90.0) || !(p.lon >= -180.0 && p.lon <= 180.0) ||
      !std::isfinite(p.alt)) {
    std::ostringstream os;
    os << "geodetic point out of range: lat=" << p.lat << " lon=" << p.lon;
    fail(ErrorKind::kDomain, os.str());
  }
}

EnuPose enu_from_geodetic(const GeoPoint& origin, const GeoPoint& p) {
  validate(origin);
  validate(p);
  const double k = kEarthRadiusM * kDegToRad;
  EnuPose out;
  out.east = (p.lon - origin.lon) * std::cos(origin.lat * kDegToRad) * k;
  out.north = (p.lat - origin.lat) * k;
  out.up = p.alt - origin.alt;
  return out;
}

GeoPoint geodetic_from_enu(const GeoPoint& origin, const EnuPose& p) {
  validate(origin);
  const double k = kEarthRadiusM * kDegToRad;
  GeoPoint out;
  out.lat = origin.lat + p.north / k;
  out.lon = origin.lon + p.east / (k * std::cos(origin.lat * kDegToRad));
  out.alt = origin.alt + p.up;
  validate(out);
  return out;
}

GpsSensor::GpsSensor(const GpsModel& model, Rng& rng) : model_(model) {
  check_sigma(model.bias_sigma_m, "gps bias sigma");
  check_sigma(model.noise_sigma_m, "gps noise sigma");
  bias_e_ = rng.normal(0.0, model.bias_sigma_m);
  bias_n_ = rng.normal(0.0, model.bias_sigma_m);
}

GpsSensor::GpsSensor(const GpsModel& model, double bias_east_m, double bias_north_m)
    : model_(model), bias_e_(bias_east_m), bias_n_(bias_north_m) {
  check_sigma(model.noise_sigma_m, "gps noise sigma");
}

EnuPose GpsSensor::sample(const EnuPose& truth, Rng& rng) const {
  EnuPose m = truth;
  m.east += bias_e_ + rng.normal(0.0, model_.noise_sigma_m);
  m.north += bias_n_ + rng.normal(0.0, model_.noise_sigma_m);
  return m;
}

BaroSensor::BaroSensor(const BaroModel& model, Rng& rng) : model_(model) {
  check_sigma(model.bias_sigma_m, "baro bias sigma");
  check_sigma(model.noise_sigma_m, "baro noise sigma");
  bias_ = rng.normal(0.0, model.bias_sigma_m);
}

BaroSensor::BaroSensor(const BaroModel& model, double bias_m) : model_(model), bias_(bias_m) {
  check_sigma(model.noise_sigma_m, "baro noise sigma");
}

double BaroSensor::sample(double true_alt_m, Rng& rng) const {
  return true_alt_m + bias_ + rng.normal(0.0, model_.noise_sigma_m);
}

EnuPose sample_gps(const EnuPose& truth, const GpsModel& model, Rng& rng) {
  GpsSensor s(model, rng);
  return s.sample(truth, rng);
}

double sample_baro_alt(double true_alt_m, const BaroModel& model, Rng& rng) {
  BaroSensor s(model, rng);
  return s.sample(true_alt_m, rng);
}

}  // namespace rfidsim
