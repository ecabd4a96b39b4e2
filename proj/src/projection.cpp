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

#include "simdiff/projection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "simdiff/error.hpp"

namespace simdiff {
namespace {

constexpr double kPi = std::numbers::pi;

double deg2rad(double deg) { return deg * kPi / 180.0; }

// Keys cubic convolution kernel, a = -0.5.
double cubic_weight(double x) {
  constexpr double a = -0.5;
  x = std::abs(x);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

}  // namespace

void SensorModel::Validate() const {
  if (height < 1 || width < 1) throw UsageError("sensor dimensions must be positive");
  if (!(fov_deg() > 0.0)) throw UsageError("sensor vertical field of view must be positive");
  if (!(alpha > 0.0)) throw UsageError("alpha must be positive");
  if (!(min_range >= 0.0 && min_range < max_range)) {
    throw UsageError("sensor range limits must satisfy 0 <= min_range < max_range");
  }
  if (!dead_pixel_mask.empty() && dead_pixel_mask.size() != pixel_count()) {
    throw UsageError("dead pixel mask has " + std::to_string(dead_pixel_mask.size()) +
                     " entries, expected " + std::to_string(pixel_count()));
  }
}

double SensorModel::NormalizeDepth(double d) const { return std::log2(d + 1.0) / alpha; }

double SensorModel::DenormalizeDepth(double normalized) const {
  return std::exp2(alpha * normalized) - 1.0;
}

Point3 SensorModel::RayDirection(int v, int u) const {
  const double azimuth = kPi * (1.0 - 2.0 * (u + 0.5) / width);
  const double elevation =
      deg2rad(fov_deg()) * (1.0 - (v + 0.5) / height) - deg2rad(fov_up_deg);
  const double c = std::cos(elevation);
  return {c * std::cos(azimuth), c * std::sin(azimuth), std::sin(elevation)};
}

Mask Mask::Filled(int height, int width, bool value) {
  Mask m;
  m.height = height;
  m.width = width;
  m.bits.assign(static_cast<std::size_t>(height) * width, value ? 1 : 0);
  return m;
}

std::size_t Mask::Count() const {
  return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(),
                                                [](std::uint8_t b) { return b != 0; }));
}

RangeImage RangeImage::Empty(int height, int width) {
  RangeImage img;
  img.height = height;
  img.width = width;
  const std::size_t n = img.pixel_count();
  img.depth.assign(n, 0.0f);
  img.remission.assign(n, 0.0f);
  img.valid.assign(n, 0);
  return img;
}

std::size_t RangeImage::ValidCount() const {
  return static_cast<std::size_t>(std::count_if(valid.begin(), valid.end(),
                                                [](std::uint8_t b) { return b != 0; }));
}

Mask RangeImage::ValidMask() const {
  Mask m;
  m.height = height;
  m.width = width;
  m.bits = valid;
  return m;
}

std::optional<PixelHit> locate_pixel(const Point3& p, const SensorModel& sensor) {
  const double d = p.norm();
  if (!(d > 0.0) || !sensor.InRange(d)) return std::nullopt;

  const double azimuth = std::atan2(p.y(), p.x());
  int u = static_cast<int>(std::floor(0.5 * (1.0 - azimuth / kPi) * sensor.width));
  // azimuth == -pi lands exactly on u == width.
  u = ((u % sensor.width) + sensor.width) % sensor.width;

  const double elevation = std::asin(std::clamp(p.z() / d, -1.0, 1.0));
  const double row = (1.0 - (elevation + deg2rad(sensor.fov_up_deg)) /
                                deg2rad(sensor.fov_deg())) *
                     sensor.height;
  const double v = std::floor(row);
  if (!(v >= 0.0 && v < sensor.height)) return std::nullopt;

  PixelHit hit{static_cast<int>(v), u, d};
  if (sensor.IsDead(static_cast<std::size_t>(hit.v) * sensor.width + hit.u)) {
    return std::nullopt;
  }
  return hit;
}

RangeImage rasterize(std::span<const Point3> points,
                     std::span<const float> normalized_remission,
                     const SensorModel& sensor) {
  RangeImage img = RangeImage::Empty(sensor.height, sensor.width);
  std::vector<double> zbuffer(img.pixel_count(), 0.0);
  for (std::size_t j = 0; j < points.size(); ++j) {
    const auto hit = locate_pixel(points[j], sensor);
    if (!hit) continue;
    const std::size_t i = img.index(hit->v, hit->u);
    if (img.valid[i] && zbuffer[i] <= hit->range) continue;
    zbuffer[i] = hit->range;
    img.Set(i, static_cast<float>(sensor.NormalizeDepth(hit->range)),
            normalized_remission[j]);
  }
  return img;
}

RangeImage project(const PointCloud& cloud, const SensorModel& sensor) {
  sensor.Validate();
  if (cloud.points.size() != cloud.remissions.size()) {
    throw DataError("point cloud points/remissions length mismatch");
  }
  std::vector<float> normalized(cloud.remissions.size());
  std::transform(cloud.remissions.begin(), cloud.remissions.end(), normalized.begin(),
                 [](double r) { return static_cast<float>(r / 255.0); });
  return rasterize(cloud.points, normalized, sensor);
}

PointCloud backproject(const RangeImage& image, const SensorModel& sensor) {
  sensor.Validate();
  if (image.height != sensor.height || image.width != sensor.width) {
    throw UsageError("range image dimensions do not match the sensor");
  }
  PointCloud cloud;
  for (int v = 0; v < image.height; ++v) {
    for (int u = 0; u < image.width; ++u) {
      const std::size_t i = image.index(v, u);
      if (!image.valid[i] || sensor.IsDead(i)) continue;
      const double d = sensor.DenormalizeDepth(image.depth[i]);
      if (!sensor.InRange(d)) continue;
      cloud.Add(d * sensor.RayDirection(v, u), 255.0 * image.remission[i]);
    }
  }
  return cloud;
}

RangeImage apply_condition_mask(const RangeImage& image, const Mask& mask) {
  if (mask.height != image.height || mask.width != image.width) {
    throw UsageError("condition mask dimensions do not match the image");
  }
  RangeImage out = image;
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    if (!mask.bits[i]) out.Clear(i);
  }
  return out;
}

RangeImage interpolate_densify(const RangeImage& image, InterpolationMethod method,
                               const SensorModel& sensor) {
  sensor.Validate();
  if (image.height != sensor.height || image.width != sensor.width) {
    throw UsageError("range image dimensions do not match the sensor");
  }
  std::vector<int> rows;
  for (int v = 0; v < image.height; ++v) {
    for (int u = 0; u < image.width; ++u) {
      if (image.valid[image.index(v, u)]) {
        rows.push_back(v);
        break;
      }
    }
  }
  if (rows.empty()) throw DataError("interpolate_densify: image has no valid rows");

  const int n = static_cast<int>(rows.size());
  RangeImage out = RangeImage::Empty(image.height, image.width);

  // Continuous position of row v in the index space of `rows`.
  auto row_position = [&](int v) {
    if (v <= rows.front()) return 0.0;
    if (v >= rows.back()) return static_cast<double>(n - 1);
    const auto hi = std::upper_bound(rows.begin(), rows.end(), v);
    const int i1 = static_cast<int>(hi - rows.begin());
    const int i0 = i1 - 1;
    return i0 + static_cast<double>(v - rows[i0]) / (rows[i1] - rows[i0]);
  };

  for (int v = 0; v < image.height; ++v) {
    if (std::binary_search(rows.begin(), rows.end(), v)) {
      for (int u = 0; u < image.width; ++u) {
        const std::size_t i = image.index(v, u);
        out.depth[i] = image.depth[i];
        out.remission[i] = image.remission[i];
        out.valid[i] = image.valid[i];
      }
      continue;
    }

    const double pos = row_position(v);
    std::array<int, 4> taps{};
    std::array<double, 4> weights{};
    int tap_count = 0;
    switch (method) {
      case InterpolationMethod::kNearest: {
        // Ties resolve toward the upper row.
        int best = 0;
        for (int k = 1; k < n; ++k) {
          if (std::abs(rows[k] - v) < std::abs(rows[best] - v)) best = k;
        }
        taps[0] = best;
        weights[0] = 1.0;
        tap_count = 1;
        break;
      }
      case InterpolationMethod::kBilinear: {
        const int i0 = static_cast<int>(std::floor(pos));
        const double frac = pos - i0;
        taps[0] = i0;
        weights[0] = 1.0 - frac;
        tap_count = 1;
        if (frac > 0.0) {
          taps[1] = i0 + 1;
          weights[1] = frac;
          tap_count = 2;
        }
        break;
      }
      case InterpolationMethod::kBicubic: {
        const int i0 = static_cast<int>(std::floor(pos));
        const double frac = pos - i0;
        for (int k = -1; k <= 2; ++k) {
          const double wgt = cubic_weight(frac - k);
          if (wgt == 0.0) continue;
          taps[tap_count] = std::clamp(i0 + k, 0, n - 1);
          weights[tap_count] = wgt;
          ++tap_count;
        }
        break;
      }
    }

    for (int u = 0; u < image.width; ++u) {
      double depth = 0.0;
      double remission = 0.0;
      bool ok = true;
      for (int k = 0; k < tap_count && ok; ++k) {
        const std::size_t src = image.index(rows[taps[k]], u);
        if (!image.valid[src]) {
          ok = false;
          break;
        }
        depth += weights[k] * sensor.DenormalizeDepth(image.depth[src]);
        remission += weights[k] * 255.0 * image.remission[src];
      }
      const std::size_t i = out.index(v, u);
      if (!ok || !sensor.InRange(depth) || sensor.IsDead(i)) continue;
      remission = std::clamp(remission, 0.0, 255.0);
      out.Set(i, static_cast<float>(sensor.NormalizeDepth(depth)),
              static_cast<float>(remission / 255.0));
    }
  }
  return out;
}

std::vector<std::uint8_t> derive_dead_pixel_mask(std::span<const RangeImage> scans,
                                                 double threshold) {
  if (scans.empty()) throw UsageError("derive_dead_pixel_mask: no scans");
  const std::size_t n = scans.front().pixel_count();
  std::vector<std::size_t> invalid(n, 0);
  for (const auto& scan : scans) {
    if (scan.pixel_count() != n) throw DataError("scans have mismatched dimensions");
    for (std::size_t i = 0; i < n; ++i) invalid[i] += scan.valid[i] ? 0 : 1;
  }
  std::vector<std::uint8_t> dead(n, 0);
  const double count = static_cast<double>(scans.size());
  for (std::size_t i = 0; i < n; ++i) {
    dead[i] = static_cast<double>(invalid[i]) / count >= threshold ? 1 : 0;
  }
  return dead;
}

}  // namespace simdiff
