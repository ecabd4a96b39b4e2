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

#include <cmath>
#include <random>

#include "doctest.h"
#include "simdiff/error.hpp"
#include "simdiff/projection.hpp"
#include "simdiff/scene.hpp"
#include "simdiff/views.hpp"
#include "support.hpp"

using namespace simdiff;
using simdiff::testing::kPi;

TEST_SUITE("views") {

TEST_CASE("recast with only the input view") {
  std::mt19937_64 rng(1);
  const PointCloud c = simdiff::testing::random_cloud(rng, 30, 10);
  ViewSet views;
  views.Add(simdiff::testing::random_pose(rng, 5), "input");
  const auto out = recast(c, views);
  REQUIRE(out.size() == 1);
  CHECK(out[0].points == c.points);
  CHECK_THROWS_AS(recast(c, ViewSet{}), UsageError);
}

TEST_CASE("recast into a translated view") {
  PointCloud c;
  c.Add(Point3(10, 0, 0), 42.0);
  ViewSet views;
  views.Add(RigidTransform::Identity(), "input");
  views.Add(RigidTransform::Translation(2, 0, 0), "ahead");
  const auto out = recast(c, views);
  CHECK((out[1].points[0] - Point3(8, 0, 0)).norm() < 1e-12);
  CHECK(out[1].remissions[0] == 42.0);
}

TEST_CASE("recast composes through an intermediate view") {
  std::mt19937_64 rng(2);
  const PointCloud c = simdiff::testing::random_cloud(rng, 40, 30);
  for (int trial = 0; trial < 50; ++trial) {
    ViewSet views;
    for (int k = 0; k < 3; ++k) views.Add(simdiff::testing::random_pose(rng, 30), "v");
    const auto direct = recast(c, views);
    ViewSet hop;
    hop.Add(views.poses[1], "1");
    hop.Add(views.poses[2], "2");
    const auto via = recast(direct[1], hop);
    for (std::size_t j = 0; j < c.size(); ++j) {
      CHECK((via[1].points[j] - direct[2].points[j]).norm() < 1e-6);
    }
  }
}

TEST_CASE("circle placement") {
  const auto views = place_views_circle(RigidTransform::Identity(), 5.0, 4);
  REQUIRE(views.size() == 5);
  const Point3 expected[4] = {{5, 0, 0}, {0, 5, 0}, {-5, 0, 0}, {0, -5, 0}};
  for (int i = 0; i < 4; ++i) {
    CHECK((views.poses[i + 1].translation() - expected[i]).norm() < 1e-12);
    CHECK(views.poses[i + 1].rotation() == Matrix3::Identity());
  }
  const auto one = place_views_circle(RigidTransform::RotationZ(kPi / 2), 3.0, 1);
  REQUIRE(one.size() == 2);
  // Offsets are in the sensor frame, so a yawed center rotates them.
  CHECK((one.poses[1].translation() - Point3(0, 3, 0)).norm() < 1e-9);
  CHECK(one.poses[1].rotation().isApprox(one.poses[0].rotation()));

  ViewSet both = place_views_circle(RigidTransform::Identity(), 5.0, 4);
  both.AppendSynthetic(place_views_circle(RigidTransform::Identity(), 15.0, 4));
  CHECK(both.synthetic_count() == 8);
  CHECK_THROWS_AS(place_views_circle(RigidTransform::Identity(), 0.0, 4), UsageError);
  CHECK_THROWS_AS(place_views_circle(RigidTransform::Identity(), 5.0, 0), UsageError);
}

TEST_CASE("trajectory placement") {
  std::vector<RigidTransform> poses;
  for (int f = 0; f < 40; ++f) poses.push_back(RigidTransform::Translation(0.88 * f, 0, 0));
  const auto views = place_views_trajectory(poses, 0, 5, 7);
  REQUIRE(views.size() == 8);
  for (int k = 0; k <= 7; ++k) {
    CHECK(views.poses[k].translation().x() == doctest::Approx(0.88 * 5 * k));
  }
  const auto still = place_views_trajectory(poses, 3, 0, 3);
  for (const auto& p : still.poses) CHECK(p.MaxAbsDifference(poses[3]) == 0.0);
  CHECK(place_views_trajectory(poses, 0, 5, 0).size() == 1);
  CHECK_THROWS_AS(place_views_trajectory(poses, 10, 5, 7), UsageError);
  CHECK_THROWS_AS(place_views_trajectory(poses, 0, -1, 2), UsageError);
}

TEST_CASE("truncation keeps the first views") {
  const auto views = place_views_circle(RigidTransform::Identity(), 5.0, 4);
  const auto two = views.Truncated(2);
  REQUIRE(two.size() == 3);
  CHECK(two.labels[2] == views.labels[2]);
}

TEST_CASE("road fit on a synthetic corridor") {
  const SensorModel sensor;
  const SyntheticScene scene(SceneKind::kCorridor, 7);
  const PointCloud cloud =
      backproject(scene.Render(RigidTransform::Identity(), sensor), sensor);
  const RoadLine line = fit_road_line(cloud);
  const double angle = std::atan2(line.direction.y(), line.direction.x()) * 180.0 / kPi;
  CHECK(std::abs(angle) < 2.0);
  CHECK(line.ground_points >= 50);

  const std::vector<double> offsets{5, -5, 10, -10, 15, -15};
  const auto views = place_views_road(cloud, offsets);
  REQUIRE(views.size() == 7);
  CHECK(views.poses[1].translation().x() == doctest::Approx(5.0).epsilon(0.02));
  CHECK(views.poses[2].translation().x() == doctest::Approx(-5.0).epsilon(0.02));
  CHECK(place_views_road(cloud, {}).size() == 1);
}

TEST_CASE("road fit rejects sparse or degenerate ground") {
  PointCloud few;
  for (int i = 0; i < 10; ++i) few.Add(Point3(i, 0, -1.7), 0.0);
  CHECK_THROWS_AS(fit_road_line(few), DataError);
  PointCloud stacked;
  for (int i = 0; i < 100; ++i) stacked.Add(Point3(4, 1, -1.7 + 0.001 * i), 0.0);
  CHECK_THROWS_AS(fit_road_line(stacked), DataError);
}

TEST_CASE("recast coverage falls with distance on the occluder scene") {
  const SensorModel sensor;
  const SyntheticScene scene(SceneKind::kOccluders, 7);
  const RangeImage input = scene.Render(RigidTransform::Identity(), sensor);
  const PointCloud cloud = backproject(input, sensor);
  ViewSet views;
  views.Add(RigidTransform::Identity(), "input");
  for (double d : {5.0, 10.0, 15.0, 20.0}) views.Add(RigidTransform::Translation(d, 0, 0), "v");
  const auto clouds = recast(cloud, views);
  std::size_t prev = input.ValidCount();
  for (std::size_t k = 1; k < views.size(); ++k) {
    const std::size_t n = project(clouds[k], sensor).ValidCount();
    CHECK(n <= prev);
    prev = n;
  }
}

}  // TEST_SUITE
