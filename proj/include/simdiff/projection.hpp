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

#ifndef SIMDIFF_PROJECTION_HPP_
#define SIMDIFF_PROJECTION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "simdiff/geometry.hpp"

namespace simdiff {

// Projection geometry of a spinning LiDAR. Angles are in degrees; fov_down is
// stored as a positive magnitude (25 means 25 degrees below the horizon).
struct SensorModel {
  int height = 64;
  int width = 1024;
  double fov_up_deg = 3.0;
  double fov_down_deg = 25.0;
  double alpha = 6.0;
  double min_range = 1.0;
  double max_range = 80.0;
  // Empty means no dead pixels; otherwise height*width entries, non-zero
  // where the scanner never returns.
  std::vector<std::uint8_t> dead_pixel_mask;

  void Validate() const;

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  double fov_deg() const { return fov_up_deg + fov_down_deg; }

  bool IsDead(std::size_t index) const {
    return !dead_pixel_mask.empty() && dead_pixel_mask[index] != 0;
  }
  bool InRange(double d) const { return d >= min_range && d <= max_range; }

  // log2(d + 1) / alpha and its inverse.
  double NormalizeDepth(double d) const;
  double DenormalizeDepth(double normalized) const;

  // Unit ray through the center of pixel (v, u).
  Point3 RayDirection(int v, int u) const;
};

// Boolean image, row-major, non-zero = true.
struct Mask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> bits;

  static Mask Filled(int height, int width, bool value);
  bool operator()(int v, int u) const {
    return bits[static_cast<std::size_t>(v) * width + u] != 0;
  }
  std::size_t Count() const;
};

// Two-channel equirectangular image: normalized depth log2(d+1)/alpha and
// normalized remission r/255. Invalid pixels hold zeros in both channels.
struct RangeImage {
  int height = 0;
  int width = 0;
  std::vector<float> depth;
  std::vector<float> remission;
  std::vector<std::uint8_t> valid;

  static RangeImage Empty(int height, int width);

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  std::size_t index(int v, int u) const {
    return static_cast<std::size_t>(v) * width + u;
  }
  std::size_t ValidCount() const;
  Mask ValidMask() const;

  void Set(std::size_t i, float d, float r) {
    depth[i] = d;
    remission[i] = r;
    valid[i] = 1;
  }
  void Clear(std::size_t i) {
    depth[i] = 0.0f;
    remission[i] = 0.0f;
    valid[i] = 0;
  }

  bool operator==(const RangeImage&) const = default;
};

struct PixelHit {
  int v = 0;
  int u = 0;
  double range = 0.0;
};

// Pixel a sensor-frame point lands on, or nullopt when the point violates the
// scanner limits (range, vertical field of view, dead pixel).
std::optional<PixelHit> locate_pixel(const Point3& p, const SensorModel& sensor);

// Z-buffered projection of sensor-frame points. `normalized_remission` values
// are stored unchanged; ties keep the earliest point.
RangeImage rasterize(std::span<const Point3> points,
                     std::span<const float> normalized_remission,
                     const SensorModel& sensor);

RangeImage project(const PointCloud& cloud, const SensorModel& sensor);

// One point per valid pixel along the pixel-center ray. Pixels whose depth
// violates the scanner limits, or that are dead, yield nothing.
PointCloud backproject(const RangeImage& image, const SensorModel& sensor);

// Pixels where mask is false become invalid.
RangeImage apply_condition_mask(const RangeImage& image, const Mask& mask);

enum class InterpolationMethod { kNearest, kBilinear, kBicubic };

// Fills the missing rows of a beam-subsampled image. Works on metric depth
// and raw remission; an output pixel is invalid whenever any sample with
// non-zero weight is invalid.
RangeImage interpolate_densify(const RangeImage& image, InterpolationMethod method,
                               const SensorModel& sensor);

// A pixel is dead when it is invalid in at least `threshold` of the scans.
std::vector<std::uint8_t> derive_dead_pixel_mask(std::span<const RangeImage> scans,
                                                 double threshold = 0.99);

}  // namespace simdiff

#endif  // SIMDIFF_PROJECTION_HPP_
