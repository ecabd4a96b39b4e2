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

#include "simdiff/geometry.hpp"

#include <Eigen/LU>
#include <cmath>
#include <sstream>

#include "simdiff/error.hpp"

namespace simdiff {

RigidTransform::RigidTransform()
    : rotation_(Matrix3::Identity()), translation_(Point3::Zero()) {}

RigidTransform::RigidTransform(const Matrix3& rotation, const Point3& translation,
                               double tolerance)
    : rotation_(rotation), translation_(translation) {
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw DataError("rigid transform has non-finite entries");
  }
  const double ortho_err =
      (rotation.transpose() * rotation - Matrix3::Identity()).cwiseAbs().maxCoeff();
  const double det = rotation.determinant();
  if (ortho_err > tolerance || std::abs(det - 1.0) > tolerance) {
    std::ostringstream msg;
    msg << "rotation is not in SO(3): orthonormality error " << ortho_err
        << ", determinant " << det;
    throw DataError(msg.str());
  }
}

RigidTransform RigidTransform::Translation(double x, double y, double z) {
  return RigidTransform(Matrix3::Identity(), Point3(x, y, z), Unchecked{});
}

RigidTransform RigidTransform::RotationZ(double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  Matrix3 r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return RigidTransform(r, Point3::Zero(), Unchecked{});
}

double RigidTransform::MaxAbsDifference(const RigidTransform& other) const {
  return std::max((rotation_ - other.rotation_).cwiseAbs().maxCoeff(),
                  (translation_ - other.translation_).cwiseAbs().maxCoeff());
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  return RigidTransform(a.rotation_ * b.rotation_,
                        a.rotation_ * b.translation_ + a.translation_,
                        RigidTransform::Unchecked{});
}

RigidTransform invert(const RigidTransform& t) {
  const Matrix3 rt = t.rotation_.transpose();
  return RigidTransform(rt, -(rt * t.translation_), RigidTransform::Unchecked{});
}

RigidTransform relative_transform(const RigidTransform& world_from_a,
                                  const RigidTransform& world_from_b) {
  return compose(invert(world_from_a), world_from_b);
}

void PointCloud::Validate() const {
  if (points.size() != remissions.size()) {
    throw DataError("point cloud has " + std::to_string(points.size()) +
                    " points but " + std::to_string(remissions.size()) +
                    " remissions");
  }
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (!points[j].allFinite()) {
      throw DataError("non-finite point at index " + std::to_string(j));
    }
    if (!(remissions[j] >= 0.0 && remissions[j] <= 255.0)) {
      throw DataError("remission outside [0, 255] at index " + std::to_string(j));
    }
  }
}

PointCloud WorldPointSet::ExtractView(int k) const {
  PointCloud out;
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (source_view[j] == k) out.Add(points[j], remissions[j]);
  }
  return out;
}

PointCloud transform_cloud(const RigidTransform& t, const PointCloud& cloud) {
  PointCloud out;
  out.frame_id = cloud.frame_id;
  out.points.reserve(cloud.size());
  for (const Point3& p : cloud.points) out.points.push_back(t.Apply(p));
  out.remissions = cloud.remissions;
  return out;
}

WorldPointSet merge_to_world(std::span<const PointCloud> clouds,
                             std::span<const RigidTransform> poses) {
  if (clouds.size() != poses.size()) {
    throw UsageError("merge_to_world: " + std::to_string(clouds.size()) +
                     " clouds but " + std::to_string(poses.size()) + " poses");
  }
  WorldPointSet world;
  std::size_t total = 0;
  for (const auto& c : clouds) total += c.size();
  world.points.reserve(total);
  world.remissions.reserve(total);
  world.source_view.reserve(total);
  for (std::size_t k = 0; k < clouds.size(); ++k) {
    const auto& cloud = clouds[k];
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      world.points.push_back(poses[k].Apply(cloud.points[j]));
      world.remissions.push_back(cloud.remissions[j]);
      world.source_view.push_back(static_cast<int>(k));
    }
  }
  return world;
}

}  // namespace simdiff
