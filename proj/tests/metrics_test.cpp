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

#include <random>

#include "doctest.h"
#include "simdiff/error.hpp"
#include "simdiff/metrics.hpp"

using namespace simdiff;

namespace {

RangeImage constant_image(const SensorModel& s, double meters, double remission) {
  RangeImage img = RangeImage::Empty(4, 8);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    img.Set(i, static_cast<float>(s.NormalizeDepth(meters)), static_cast<float>(remission));
  }
  return img;
}

std::vector<Point3> random_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<Point3> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(u(rng), u(rng), u(rng));
  return out;
}

// Exhaustive reference for the percentage of queries with a neighbor within tau.
double brute_within(const std::vector<Point3>& q, const std::vector<Point3>& ref, double tau) {
  std::size_t hits = 0;
  for (const auto& p : q) {
    for (const auto& r : ref) {
      if ((p - r).norm() <= tau) {
        ++hits;
        break;
      }
    }
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(q.size());
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("mae on identical images is zero") {
  const SensorModel s;
  const RangeImage a = constant_image(s, 10.0, 0.5);
  const MetricReport r = mae(a, a, s);
  CHECK(r.depth_mae == 0.0);
  CHECK(r.remission_mae == 0.0);
  CHECK(r.valid_pixel_count == 32);
  CHECK(r.coverage_fraction == 1.0);
}

TEST_CASE("mae is in meters and raw remission units") {
  const SensorModel s;
  const RangeImage a = constant_image(s, 10.0, 0.2);
  const RangeImage b = constant_image(s, 12.0, 0.4);
  const MetricReport r = mae(a, b, s);
  CHECK(r.depth_mae == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(r.remission_mae == doctest::Approx(51.0).epsilon(1e-5));
}

TEST_CASE("a single differing pixel contributes delta over N") {
  const SensorModel s;
  const RangeImage a = constant_image(s, 10.0, 0.5);
  RangeImage b = a;
  b.Set(5, static_cast<float>(s.NormalizeDepth(13.2)), 0.5f);
  CHECK(mae(b, a, s).depth_mae == doctest::Approx(3.2 / 32).epsilon(1e-5));
}

TEST_CASE("mae ignores pixels invalid in either image") {
  const SensorModel s;
  const RangeImage a = constant_image(s, 10.0, 0.5);
  RangeImage b = constant_image(s, 20.0, 0.5);
  for (std::size_t i = 0; i < 16; ++i) b.Clear(i);
  const MetricReport r = mae(b, a, s);
  CHECK(r.valid_pixel_count == 16);
  CHECK(r.coverage_fraction == 0.5);
  CHECK(r.depth_mae == doctest::Approx(10.0).epsilon(1e-5));

  Mask region = Mask::Filled(4, 8, false);
  region.bits[20] = 1;
  CHECK(mae(b, a, s, &region).valid_pixel_count == 1);
}

TEST_CASE("mae errors") {
  const SensorModel s;
  const RangeImage a = constant_image(s, 10.0, 0.5);
  CHECK_THROWS_AS(mae(RangeImage::Empty(4, 8), a, s), DataError);
  CHECK_THROWS_AS(mae(RangeImage::Empty(4, 9), a, s), UsageError);
  const Mask wrong = Mask::Filled(2, 2, true);
  CHECK_THROWS_AS(mae(a, a, s, &wrong), UsageError);
}

TEST_CASE("completion of identical sets is perfect") {
  std::mt19937_64 rng(1);
  const auto p = random_points(rng, 500);
  const CompletionScore c = completion_score(p, p, 0.1);
  CHECK(c.accuracy == 100.0);
  CHECK(c.completeness == 100.0);
  CHECK(c.f1 == 100.0);
}

TEST_CASE("completion matches an exhaustive search") {
  std::mt19937_64 rng(2);
  const auto pred = random_points(rng, 400);
  const auto gt = random_points(rng, 600);
  for (double tau : {0.3, 0.7, 1.3}) {
    const CompletionScore c = completion_score(pred, gt, tau);
    CHECK(c.accuracy == doctest::Approx(brute_within(pred, gt, tau)));
    CHECK(c.completeness == doctest::Approx(brute_within(gt, pred, tau)));
  }
}

TEST_CASE("completion is symmetric under swapping and monotone in tau") {
  std::mt19937_64 rng(3);
  const auto a = random_points(rng, 300);
  const auto b = random_points(rng, 300);
  const CompletionScore ab = completion_score(a, b, 0.8);
  const CompletionScore ba = completion_score(b, a, 0.8);
  CHECK(ab.accuracy == ba.completeness);
  CHECK(ab.completeness == ba.accuracy);
  CHECK(ab.f1 == doctest::Approx(ba.f1));
  double last_acc = -1.0, last_comp = -1.0;
  for (double tau : {0.1, 0.2, 0.4, 0.8, 1.6, 3.2}) {
    const CompletionScore c = completion_score(a, b, tau);
    CHECK(c.accuracy >= last_acc);
    CHECK(c.completeness >= last_comp);
    last_acc = c.accuracy;
    last_comp = c.completeness;
  }
}

TEST_CASE("completion boundary is inclusive") {
  const std::vector<Point3> a{Point3(0, 0, 0)};
  const std::vector<Point3> b{Point3(0.25, 0, 0)};
  CHECK(completion_score(a, b, 0.25).accuracy == 100.0);
  CHECK(completion_score(a, b, 0.2499).accuracy == 0.0);
}

TEST_CASE("completion errors") {
  const std::vector<Point3> a{Point3(0, 0, 0)};
  CHECK_THROWS_AS(completion_score(a, std::vector<Point3>{}, 0.2), DataError);
  CHECK_THROWS_AS(completion_score(std::vector<Point3>{}, a, 0.2), DataError);
  CHECK_THROWS_AS(completion_score(a, a, 0.0), UsageError);
}

TEST_CASE("f1 score") {
  CHECK(f1_score(0.0, 0.0) == 0.0);
  CHECK(f1_score(50.0, 50.0) == doctest::Approx(50.0));
  CHECK(f1_score(100.0, 0.0) == 0.0);
  CHECK(f1_score(80.0, 40.0) == doctest::Approx(2.0 * 80 * 40 / 120));
}

TEST_CASE("mean iou") {
  const std::vector<std::int32_t> gt{0, 0, 1, 1, -1};
  CHECK(mean_iou(gt, gt) == 1.0);
  const std::vector<std::int32_t> pred{0, 1, 1, 1, 0};
  // class 0: inter 1, union 2; class 1: inter 2, union 3.
  CHECK(mean_iou(pred, gt) == doctest::Approx((0.5 + 2.0 / 3.0) / 2.0));
  CHECK_THROWS_AS(mean_iou(std::vector<std::int32_t>{0}, gt), UsageError);
  const std::vector<std::int32_t> ignored{-1, -1};
  CHECK_THROWS_AS(mean_iou(ignored, ignored), DataError);
}

TEST_CASE("key value rendering") {
  MetricReport r;
  r.depth_mae = 1.5;
  r.valid_pixel_count = 7;
  const std::string s = to_key_value(r, "full.");
  CHECK(s.find("full.depth_mae=1.500000\n") != std::string::npos);
  CHECK(s.find("full.valid_pixel_count=7\n") != std::string::npos);
}

}  // TEST_SUITE
