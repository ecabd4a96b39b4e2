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
#include "simdiff/tasks.hpp"
#include "support.hpp"

using namespace simdiff;

namespace {

PointCloud single(const Point3& p, double r = 100.0) {
  PointCloud c;
  c.Add(p, r);
  return c;
}

// Image with valid pixels on rows 0, 4, 8, ... holding the given depth per
// known row (in meters) and constant remission.
RangeImage striped(const SensorModel& s, const std::function<double(int)>& depth_of_row) {
  RangeImage img = RangeImage::Empty(s.height, s.width);
  for (int v = 0; v < s.height; v += 4) {
    for (int u = 0; u < s.width; ++u) {
      img.Set(img.index(v, u), static_cast<float>(s.NormalizeDepth(depth_of_row(v))), 0.5f);
    }
  }
  return img;
}

}  // namespace

TEST_SUITE("projection") {

TEST_CASE("forward axis lands on the expected pixel") {
  const SensorModel s;
  const auto hit = locate_pixel(Point3(10, 0, 0), s);
  REQUIRE(hit);
  CHECK(hit->u == 512);
  CHECK(hit->v == 57);
  const RangeImage img = project(single(Point3(10, 0, 0)), s);
  const std::size_t i = img.index(57, 512);
  CHECK(img.valid[i]);
  CHECK(img.depth[i] == doctest::Approx(0.57657).epsilon(1e-5));
  CHECK(img.depth[i] == static_cast<float>(std::log2(11.0) / 6.0));
  CHECK(img.remission[i] == static_cast<float>(100.0 / 255.0));
  CHECK(img.ValidCount() == 1);
}

TEST_CASE("azimuth uses the two-argument arctangent") {
  const SensorModel s;
  CHECK(locate_pixel(Point3(0, -10, 0), s)->u == 768);
  CHECK(locate_pixel(Point3(0, 10, 0), s)->u == 256);
  CHECK(locate_pixel(Point3(-10, 1e-12, 0), s)->u == 0);
  // Exactly -pi wraps back to column 0.
  CHECK(locate_pixel(Point3(-10, -0.0, 0), s)->u == 0);
}

TEST_CASE("z-buffer keeps the nearest point") {
  const SensorModel s;
  PointCloud c;
  c.Add(Point3(9, 0, 0), 10.0);
  c.Add(Point3(5, 0, 0), 20.0);
  c.Add(Point3(7, 0, 0), 30.0);
  const RangeImage img = project(c, s);
  const std::size_t i = img.index(57, 512);
  CHECK(s.DenormalizeDepth(img.depth[i]) == doctest::Approx(5.0).epsilon(1e-6));
  CHECK(img.remission[i] == static_cast<float>(20.0 / 255.0));
}

TEST_CASE("equal depths keep the first point") {
  const SensorModel s;
  PointCloud c;
  c.Add(Point3(5, 0, 0), 10.0);
  c.Add(Point3(5, 0, 0), 20.0);
  const RangeImage img = project(c, s);
  CHECK(img.remission[img.index(57, 512)] == static_cast<float>(10.0 / 255.0));
}

TEST_CASE("scanner limits drop points") {
  SensorModel s;
  CHECK(project(single(Point3(0.5, 0, 0)), s).ValidCount() == 0);
  CHECK(project(single(Point3(85, 0, 0)), s).ValidCount() == 0);
  // Elevation below the bottom row.
  CHECK(project(single(Point3(10, 0, -2)), s).ValidCount() == 0);
  CHECK(project(single(Point3(0, 0, 0)), s).ValidCount() == 0);
  s.dead_pixel_mask.assign(s.pixel_count(), 0);
  s.dead_pixel_mask[57 * 1024 + 512] = 1;
  CHECK(project(single(Point3(10, 0, 0)), s).ValidCount() == 0);
}

TEST_CASE("empty cloud gives an all-invalid image") {
  const SensorModel s;
  const RangeImage img = project(PointCloud{}, s);
  CHECK(img.ValidCount() == 0);
  CHECK(backproject(img, s).empty());
}

TEST_CASE("depth channel inversion") {
  const SensorModel s;
  CHECK(s.DenormalizeDepth(1.0 / 6.0) == doctest::Approx(1.0));
  double prev = -1.0;
  for (double d = 0.0; d < 100.0; d += 0.37) {
    const double n = s.NormalizeDepth(d);
    CHECK(n > prev);
    prev = n;
  }
}

TEST_CASE("project matches the exhaustive oracle") {
  const SensorModel s;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const PointCloud c = simdiff::testing::random_fov_cloud(rng, 800, s, 60);
    CHECK(project(c, s) == simdiff::testing::brute_force_project(c, s));
  }
}

TEST_CASE("backprojection places points on pixel-center rays") {
  const SensorModel s;
  RangeImage img = RangeImage::Empty(s.height, s.width);
  img.Set(img.index(10, 100), static_cast<float>(s.NormalizeDepth(20.0)), 0.25f);
  const PointCloud c = backproject(img, s);
  REQUIRE(c.size() == 1);
  const double yaw = simdiff::testing::kPi * (1.0 - 2.0 * (100 + 0.5) / s.width);
  const double f = (s.fov_up_deg + s.fov_down_deg) * simdiff::testing::kPi / 180.0;
  const double pitch = f * (1.0 - (10 + 0.5) / s.height) - s.fov_up_deg * simdiff::testing::kPi / 180.0;
  const Point3 expect = simdiff::testing::spherical(yaw, pitch, 20.0);
  CHECK((c.points[0] - expect).norm() < 1e-4);
  CHECK(c.remissions[0] == doctest::Approx(63.75));
}

TEST_CASE("backprojection skips pixels outside scanner limits") {
  SensorModel s;
  RangeImage img = RangeImage::Empty(s.height, s.width);
  img.Set(0, static_cast<float>(s.NormalizeDepth(0.2)), 0.0f);
  img.Set(1, static_cast<float>(s.NormalizeDepth(120.0)), 0.0f);
  img.Set(2, static_cast<float>(s.NormalizeDepth(10.0)), 0.0f);
  CHECK(backproject(img, s).size() == 1);
  s.dead_pixel_mask.assign(s.pixel_count(), 0);
  s.dead_pixel_mask[2] = 1;
  CHECK(backproject(img, s).empty());
}

TEST_CASE("one projection cycle is idempotent") {
  const SensorModel s;
  std::mt19937_64 rng(4);
  const PointCloud c = simdiff::testing::random_fov_cloud(rng, 5000, s, 70);
  const RangeImage once = project(c, s);
  const RangeImage twice = project(backproject(once, s), s);
  const RangeImage thrice = project(backproject(twice, s), s);
  CHECK(twice.valid == once.valid);
  CHECK(thrice.depth == twice.depth);
  std::size_t drift = 0;
  for (std::size_t i = 0; i < once.pixel_count(); ++i) {
    if (std::abs(once.depth[i] - twice.depth[i]) > 1e-6f) ++drift;
  }
  CHECK(drift == 0);
}

TEST_CASE("condition masks") {
  const SensorModel s;
  std::mt19937_64 rng(6);
  const RangeImage img = project(simdiff::testing::random_fov_cloud(rng, 20000, s, 50), s);
  CHECK(apply_condition_mask(img, Mask::Filled(s.height, s.width, true)) == img);
  CHECK(apply_condition_mask(img, Mask::Filled(s.height, s.width, false)).ValidCount() == 0);

  const RangeImage beams = apply_condition_mask(img, beam_mask(s, 4));
  std::size_t expected = 0;
  for (int v = 0; v < s.height; v += 4) {
    for (int u = 0; u < s.width; ++u) expected += img.valid[img.index(v, u)];
  }
  CHECK(beams.ValidCount() == expected);
  CHECK(beam_mask(s, 4).Count() == 16u * 1024u);
  CHECK_THROWS_AS(apply_condition_mask(img, Mask::Filled(2, 2, true)), UsageError);
}

TEST_CASE("angular gap masks") {
  const SensorModel s;
  const Mask m = angular_gap_mask(s, -72.0, 90.0);
  CHECK(m.Count() == static_cast<std::size_t>((1024 - 256) * 64));
  // The gap sits to the right of the sensor: azimuth -72 is column ~716.
  CHECK_FALSE(m(0, 716));
  CHECK(m(0, 512));
  CHECK(angular_gap_mask(s, 0.0, 0.0).Count() == s.pixel_count());
  CHECK_THROWS_AS(angular_gap_mask(s, 0.0, 360.0), UsageError);
}

TEST_CASE("interpolation keeps constant depth") {
  const SensorModel s;
  const RangeImage img = striped(s, [](int) { return 12.5; });
  for (auto m : {InterpolationMethod::kNearest, InterpolationMethod::kBilinear,
                 InterpolationMethod::kBicubic}) {
    const RangeImage out = interpolate_densify(img, m, s);
    CHECK(out.ValidCount() == s.pixel_count());
    double worst = 0.0;
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
      worst = std::max(worst, std::abs(s.DenormalizeDepth(out.depth[i]) - 12.5));
    }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("nearest and bilinear rows") {
  const SensorModel s;
  const RangeImage img = striped(s, [](int v) { return v == 0 ? 4.0 : 8.0; });
  const RangeImage nearest = interpolate_densify(img, InterpolationMethod::kNearest, s);
  CHECK(nearest.depth[nearest.index(1, 7)] == img.depth[img.index(0, 7)]);
  const RangeImage linear = interpolate_densify(img, InterpolationMethod::kBilinear, s);
  CHECK(s.DenormalizeDepth(linear.depth[linear.index(2, 7)]) == doctest::Approx(6.0).epsilon(1e-5));
  CHECK(linear.remission[linear.index(2, 7)] == doctest::Approx(0.5));
}

TEST_CASE("interpolation needs valid rows") {
  const SensorModel s;
  CHECK_THROWS_AS(interpolate_densify(RangeImage::Empty(s.height, s.width),
                                      InterpolationMethod::kBilinear, s),
                  DataError);
}

TEST_CASE("dead pixel mask from a corpus") {
  const SensorModel s;
  std::vector<RangeImage> scans(100, RangeImage::Empty(s.height, s.width));
  for (auto& scan : scans) scan.Set(5, 0.5f, 0.5f);
  scans[0].Set(6, 0.5f, 0.5f);                           // valid in 1% of scans
  for (int k = 0; k < 2; ++k) scans[k].Set(7, 0.5f, 0.5f);  // valid in 2%
  const auto mask = derive_dead_pixel_mask(scans);
  REQUIRE(mask.size() == s.pixel_count());
  CHECK(mask[0] == 1);
  CHECK(mask[5] == 0);
  CHECK(mask[6] == 1);
  CHECK(mask[7] == 0);
}

TEST_CASE("sensor validation") {
  SensorModel s;
  s.alpha = 0.0;
  CHECK_THROWS_AS(s.Validate(), UsageError);
  s = SensorModel{};
  s.min_range = 90.0;
  CHECK_THROWS_AS(s.Validate(), UsageError);
  s = SensorModel{};
  s.dead_pixel_mask.assign(3, 0);
  CHECK_THROWS_AS(s.Validate(), UsageError);
}

}  // TEST_SUITE
