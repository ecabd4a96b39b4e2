/*
Copyright 2026 The simdiff Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

// Independent reference implementations used as test oracles.

#ifndef SIMDIFF_TESTS_SUPPORT_HPP_
#define SIMDIFF_TESTS_SUPPORT_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Geometry>

#include "simdiff/geometry.hpp"
#include "simdiff/projection.hpp"

namespace simdiff::testing {

inline constexpr double kPi = 3.14159265358979323846;

// Pixel of a sensor-frame point, derived directly from the angle formulas.
struct OraclePixel {
  int v;
  int u;
  double range;
};

inline std::optional<OraclePixel> oracle_pixel(const Point3& p, const SensorModel& s) {
  const double d = std::sqrt(p.x() * p.x() + p.y() * p.y() + p.z() * p.z());
  if (!(d > 0.0) || d < s.min_range || d > s.max_range) return std::nullopt;
  const double yaw = std::atan2(p.y(), p.x());
  const double pitch = std::asin(std::max(-1.0, std::min(1.0, p.z() / d)));
  const double up = s.fov_up_deg * kPi / 180.0;
  const double fov = (s.fov_up_deg + s.fov_down_deg) * kPi / 180.0;
  long u = static_cast<long>(std::floor(0.5 * (1.0 - yaw / kPi) * s.width));
  u = ((u % s.width) + s.width) % s.width;
  const double row = std::floor((1.0 - (pitch + up) / fov) * s.height);
  if (row < 0.0 || row >= s.height) return std::nullopt;
  const int v = static_cast<int>(row);
  if (!s.dead_pixel_mask.empty() &&
      s.dead_pixel_mask[static_cast<std::size_t>(v) * s.width + u]) {
    return std::nullopt;
  }
  return OraclePixel{v, static_cast<int>(u), d};
}

// Per-pixel minimum by exhaustive scan over all points for every pixel.
inline RangeImage brute_force_project(const PointCloud& cloud, const SensorModel& s) {
  RangeImage img = RangeImage::Empty(s.height, s.width);
  std::vector<std::optional<OraclePixel>> hits;
  hits.reserve(cloud.size());
  for (const auto& p : cloud.points) hits.push_back(oracle_pixel(p, s));
  for (int v = 0; v < s.height; ++v) {
    for (int u = 0; u < s.width; ++u) {
      std::optional<std::size_t> best;
      for (std::size_t j = 0; j < hits.size(); ++j) {
        if (!hits[j] || hits[j]->v != v || hits[j]->u != u) continue;
        if (!best || hits[j]->range < hits[*best]->range) best = j;
      }
      if (!best) continue;
      const std::size_t i = img.index(v, u);
      img.Set(i, static_cast<float>(std::log2(hits[*best]->range + 1.0) / s.alpha),
              static_cast<float>(cloud.remissions[*best] / 255.0));
    }
  }
  return img;
}

// Point at distance d along a direction given by yaw and pitch (radians).
inline Point3 spherical(double yaw, double pitch, double d) {
  return Point3(d * std::cos(pitch) * std::cos(yaw), d * std::cos(pitch) * std::sin(yaw),
                d * std::sin(pitch));
}

inline RigidTransform random_pose(std::mt19937_64& rng, double max_translation) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> t(-max_translation, max_translation);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return RigidTransform(q.toRotationMatrix(), Point3(t(rng), t(rng), t(rng)));
}

inline PointCloud random_cloud(std::mt19937_64& rng, std::size_t n, double extent) {
  std::uniform_real_distribution<double> c(-extent, extent);
  std::uniform_real_distribution<double> r(0.0, 255.0);
  PointCloud cloud;
  for (std::size_t i = 0; i < n; ++i) cloud.Add(Point3(c(rng), c(rng), c(rng)), r(rng));
  return cloud;
}

// Cloud whose points fall inside the rows and range limits of the sensor. Rows
// span elevations from -fov_up (bottom row) to +fov_down (top row).
inline PointCloud random_fov_cloud(std::mt19937_64& rng, std::size_t n, const SensorModel& s,
                                   double max_d) {
  std::uniform_real_distribution<double> yaw(-kPi, kPi);
  std::uniform_real_distribution<double> pitch(-s.fov_up_deg * kPi / 180.0 + 1e-9,
                                               s.fov_down_deg * kPi / 180.0);
  std::uniform_real_distribution<double> dist(s.min_range, max_d);
  std::uniform_int_distribution<int> rem(0, 255);
  PointCloud cloud;
  for (std::size_t i = 0; i < n; ++i) {
    cloud.Add(spherical(yaw(rng), pitch(rng), dist(rng)), rem(rng));
  }
  return cloud;
}

}  // namespace simdiff::testing

#endif  // SIMDIFF_TESTS_SUPPORT_HPP_
