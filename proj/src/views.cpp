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

#include "simdiff/views.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <sstream>

#include "simdiff/error.hpp"

namespace simdiff {

ViewSet ViewSet::Truncated(std::size_t count) const {
  ViewSet out;
  const std::size_t n = std::min(poses.size(), count + 1);
  for (std::size_t k = 0; k < n; ++k) out.Add(poses[k], labels[k]);
  return out;
}

void ViewSet::AppendSynthetic(const ViewSet& other) {
  for (std::size_t k = 1; k < other.size(); ++k) Add(other.poses[k], other.labels[k]);
}

std::vector<PointCloud> recast(const PointCloud& cloud, const ViewSet& views) {
  if (views.poses.empty()) throw UsageError("recast: empty view set");
  std::vector<PointCloud> out;
  out.reserve(views.size());
  out.push_back(cloud);
  for (std::size_t k = 1; k < views.size(); ++k) {
    PointCloud c = transform_cloud(relative_transform(views.poses[k], views.poses[0]), cloud);
    c.frame_id = views.labels[k];
    out.push_back(std::move(c));
  }
  return out;
}

ViewSet place_views_circle(const RigidTransform& center_pose, double radius, int count) {
  if (!(radius > 0.0)) throw UsageError("circle radius must be positive");
  if (count < 1) throw UsageError("circle view count must be at least 1");
  ViewSet views;
  views.Add(center_pose, "input");
  for (int i = 0; i < count; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / count;
    // Snap tiny cosine/sine residues so quarter turns land exactly on axes.
    double x = radius * std::cos(angle);
    double y = radius * std::sin(angle);
    if (std::abs(x) < 1e-12 * radius) x = 0.0;
    if (std::abs(y) < 1e-12 * radius) y = 0.0;
    std::ostringstream label;
    label << "circle" << radius << "m#" << i;
    views.Add(compose(center_pose, RigidTransform::Translation(x, y, 0.0)), label.str());
  }
  return views;
}

ViewSet place_views_trajectory(std::span<const RigidTransform> poses_by_frame,
                               int start_frame, int stride, int count) {
  if (start_frame < 0 || stride < 0 || count < 0) {
    throw UsageError("trajectory placement parameters must be non-negative");
  }
  const long last = static_cast<long>(start_frame) + static_cast<long>(stride) * count;
  if (last >= static_cast<long>(poses_by_frame.size())) {
    throw UsageError("trajectory placement needs frame " + std::to_string(last) +
                     " but only " + std::to_string(poses_by_frame.size()) +
                     " poses are available");
  }
  ViewSet views;
  for (int k = 0; k <= count; ++k) {
    views.Add(poses_by_frame[start_frame + k * stride],
              k == 0 ? std::string("input") : "k=" + std::to_string(k));
  }
  return views;
}

RoadLine fit_road_line(const PointCloud& cloud, const RoadFitOptions& options) {
  std::vector<Eigen::Vector2d> ground;
  for (const Point3& p : cloud.points) {
    if (p.z() >= options.ground_z_min && p.z() <= options.ground_z_max) {
      ground.emplace_back(p.x(), p.y());
    }
  }
  if (ground.size() < options.min_ground_points) {
    throw DataError("road fit: only " + std::to_string(ground.size()) +
                    " ground points, need " + std::to_string(options.min_ground_points));
  }
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& g : ground) mean += g;
  mean /= static_cast<double>(ground.size());
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& g : ground) cov += (g - mean) * (g - mean).transpose();
  cov /= static_cast<double>(ground.size());

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(cov);
  const double major = solver.eigenvalues()(1);
  if (!(major > 1e-9)) {
    throw DataError("road fit: ground points are degenerate (no horizontal spread)");
  }
  Eigen::Vector2d dir = solver.eigenvectors().col(1).normalized();
  if (dir.x() < 0.0 || (dir.x() == 0.0 && dir.y() < 0.0)) dir = -dir;

  RoadLine line;
  line.direction = dir;
  line.origin = mean + dir * (-mean).dot(dir);
  line.ground_points = ground.size();
  return line;
}

ViewSet place_views_road(const PointCloud& cloud, std::span<const double> offsets,
                         const RigidTransform& base_pose, const RoadFitOptions& options) {
  ViewSet views;
  views.Add(base_pose, "input");
  if (offsets.empty()) return views;

  const RoadLine line = fit_road_line(cloud, options);
  const double yaw = std::atan2(line.direction.y(), line.direction.x());
  const RigidTransform orientation =
      options.align_to_road ? RigidTransform::RotationZ(yaw) : RigidTransform::Identity();
  for (double offset : offsets) {
    const Eigen::Vector2d xy = line.origin + offset * line.direction;
    const RigidTransform local =
        compose(RigidTransform::Translation(xy.x(), xy.y(), 0.0), orientation);
    std::ostringstream label;
    label << "road" << (offset >= 0 ? "+" : "") << offset << "m";
    views.Add(compose(base_pose, local), label.str());
  }
  return views;
}

}  // namespace simdiff
