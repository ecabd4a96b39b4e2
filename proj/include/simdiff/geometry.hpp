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

#ifndef SIMDIFF_GEOMETRY_HPP_
#define SIMDIFF_GEOMETRY_HPP_

#include <Eigen/Core>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace simdiff {

using Point3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

// Rigid-body pose in SE(3). Maps coordinates of a source frame into a
// target frame: p_target = rotation * p_source + translation.
//
// The rotation is checked for orthonormality (and det = +1) on construction
// and never re-orthogonalized; corrupt pose data fails loudly.
class RigidTransform {
 public:
  static constexpr double kOrthonormalTolerance = 1e-9;

  RigidTransform();
  RigidTransform(const Matrix3& rotation, const Point3& translation,
                 double tolerance = kOrthonormalTolerance);

  static RigidTransform Identity() { return RigidTransform(); }
  static RigidTransform Translation(double x, double y, double z);
  static RigidTransform RotationZ(double radians);

  const Matrix3& rotation() const { return rotation_; }
  const Point3& translation() const { return translation_; }

  Point3 Apply(const Point3& p) const { return rotation_ * p + translation_; }

  // Largest absolute entry-wise difference of the 3x4 matrices.
  double MaxAbsDifference(const RigidTransform& other) const;

 private:
  struct Unchecked {};
  RigidTransform(const Matrix3& rotation, const Point3& translation, Unchecked)
      : rotation_(rotation), translation_(translation) {}

  friend RigidTransform compose(const RigidTransform&, const RigidTransform&);
  friend RigidTransform invert(const RigidTransform&);

  Matrix3 rotation_;
  Point3 translation_;
};

// Returns a*b: applies b first, then a.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
RigidTransform invert(const RigidTransform& t);

// invert(world_from_a) * world_from_b: maps b-frame coordinates into the
// a-frame.
RigidTransform relative_transform(const RigidTransform& world_from_a,
                                  const RigidTransform& world_from_b);

// A scan in one sensor frame. Index j identifies a point across transforms.
struct PointCloud {
  std::vector<Point3> points;
  std::vector<double> remissions;  // raw scale [0, 255]
  std::string frame_id;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  void Add(const Point3& p, double remission) {
    points.push_back(p);
    remissions.push_back(remission);
  }

  // Throws DataError on length mismatch, non-finite coordinates or remission
  // outside [0, 255].
  void Validate() const;
};

struct WorldPointSet {
  std::vector<Point3> points;
  std::vector<double> remissions;
  std::vector<int> source_view;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  // Points that came from view k, in world coordinates.
  PointCloud ExtractView(int k) const;
};

PointCloud transform_cloud(const RigidTransform& t, const PointCloud& cloud);

// Throws UsageError if the list lengths differ.
WorldPointSet merge_to_world(std::span<const PointCloud> clouds,
                             std::span<const RigidTransform> poses);

}  // namespace simdiff

#endif  // SIMDIFF_GEOMETRY_HPP_
