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

#ifndef SIMDIFF_SCENE_HPP_
#define SIMDIFF_SCENE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simdiff/geometry.hpp"
#include "simdiff/projection.hpp"

namespace simdiff {

// Axis-aligned rectangle: the plane coordinate[axis] == offset, bounded by
// [lo, hi] on the two remaining axes (in increasing axis order).
struct Quad {
  int axis = 2;
  double offset = 0.0;
  double lo[2] = {0.0, 0.0};
  double hi[2] = {0.0, 0.0};
  double remission = 0.0;  // raw 0-255
};

struct RayHit {
  double distance = 0.0;
  double remission = 0.0;
};

enum class SceneKind { kRoom, kCorridor, kOccluders };

SceneKind parse_scene_kind(const std::string& name);
std::string to_string(SceneKind kind);

// Deterministic desk-scale world made of axis-aligned quads, with an exact
// ray caster for ground-truth range images. The sensor sits 1.7 m above the
// ground (ground plane at z = -1.7 in the world frame).
class SyntheticScene {
 public:
  static constexpr double kGroundZ = -1.7;

  SyntheticScene(SceneKind kind, std::uint64_t seed);

  SceneKind kind() const { return kind_; }
  const std::vector<Quad>& quads() const { return quads_; }

  std::optional<RayHit> Raycast(const Point3& origin, const Point3& unit_dir) const;

  // Ground-truth image seen from `world_from_sensor` (pixel-center rays).
  RangeImage Render(const RigidTransform& world_from_sensor, const SensorModel& sensor) const;

  // Grid samples (cell centers at the given spacing) over every surface.
  WorldPointSet SamplePoints(double spacing) const;

 private:
  void AddBox(double x0, double x1, double y0, double y1, double height, double remission);

  SceneKind kind_;
  std::vector<Quad> quads_;
};

}  // namespace simdiff

#endif  // SIMDIFF_SCENE_HPP_
