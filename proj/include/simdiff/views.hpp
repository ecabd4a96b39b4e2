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

#ifndef SIMDIFF_VIEWS_HPP_
#define SIMDIFF_VIEWS_HPP_

#include <span>
#include <string>
#include <vector>

#include "simdiff/geometry.hpp"

namespace simdiff {

// World-from-view poses. Index 0 is the input scan's own pose.
struct ViewSet {
  std::vector<RigidTransform> poses;
  std::vector<std::string> labels;

  std::size_t size() const { return poses.size(); }
  std::size_t synthetic_count() const { return poses.empty() ? 0 : poses.size() - 1; }

  void Add(const RigidTransform& pose, std::string label) {
    poses.push_back(pose);
    labels.push_back(std::move(label));
  }

  // Keeps view 0 and the first `count` synthetic views.
  ViewSet Truncated(std::size_t count) const;
  // Appends the synthetic views (not view 0) of `other`.
  void AppendSynthetic(const ViewSet& other);
};

// Expresses `cloud` (given in view 0's frame) in every view's frame.
std::vector<PointCloud> recast(const PointCloud& cloud, const ViewSet& views);

// `count` views evenly spaced on a horizontal circle around the center pose,
// starting at local azimuth 0. Orientation is copied from the center pose.
ViewSet place_views_circle(const RigidTransform& center_pose, double radius, int count);

// View k at poses_by_frame[start_frame + k * stride], k = 0..count.
ViewSet place_views_trajectory(std::span<const RigidTransform> poses_by_frame,
                               int start_frame, int stride, int count);

struct RoadFitOptions {
  double ground_z_min = -2.2;  // meters, sensor frame
  double ground_z_max = -1.2;
  std::size_t min_ground_points = 50;
  bool align_to_road = true;
};

struct RoadLine {
  Eigen::Vector2d origin;     // foot of the sensor origin on the line
  Eigen::Vector2d direction;  // unit, pointing toward +x of the sensor
  std::size_t ground_points = 0;
};

// Least-squares line (orthogonal regression) through the ground band points.
RoadLine fit_road_line(const PointCloud& cloud, const RoadFitOptions& options = {});

// Views at signed arc offsets along the fitted road line. Poses are relative
// to `base_pose` (world-from-sensor of the input scan).
ViewSet place_views_road(const PointCloud& cloud, std::span<const double> offsets,
                         const RigidTransform& base_pose = RigidTransform::Identity(),
                         const RoadFitOptions& options = {});

}  // namespace simdiff

#endif  // SIMDIFF_VIEWS_HPP_
