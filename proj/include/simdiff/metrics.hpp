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

#ifndef SIMDIFF_METRICS_HPP_
#define SIMDIFF_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "simdiff/geometry.hpp"
#include "simdiff/projection.hpp"

namespace simdiff {

struct MetricReport {
  double depth_mae = 0.0;      // meters
  double remission_mae = 0.0;  // raw 0-255 units
  std::size_t valid_pixel_count = 0;  // pixels valid in both images
  double coverage_fraction = 0.0;     // jointly valid / ground-truth valid
};

struct CompletionScore {
  double accuracy = 0.0;      // percent
  double completeness = 0.0;  // percent
  double f1 = 0.0;            // percent
  double tau = 0.0;           // meters
};

// Harmonic mean of two percentages; 0 when both are 0.
double f1_score(double accuracy, double completeness);

// MAE over pixels valid in both images, optionally restricted to `region`.
// Throws DataError when no pixel is valid in both.
MetricReport mae(const RangeImage& pred, const RangeImage& gt, const SensorModel& sensor,
                 const Mask* region = nullptr);

// Table-style recasting statistics: coverage is the share of ground-truth
// pixels that received a recast value; errors are over jointly valid pixels.
MetricReport recast_stats(const RangeImage& recast_img, const RangeImage& gt_img,
                          const SensorModel& sensor);

// Accuracy/completeness at distance tau (inclusive) using an exact hashed
// voxel grid for neighbor queries.
CompletionScore completion_score(std::span<const Point3> pred, std::span<const Point3> gt,
                                 double tau);
CompletionScore completion_score(const WorldPointSet& pred, const WorldPointSet& gt,
                                 double tau);

// Mean intersection-over-union of integer label images over classes present
// in either image. Pixels labelled `ignore_label` in gt are skipped.
double mean_iou(std::span<const std::int32_t> pred, std::span<const std::int32_t> gt,
                std::int32_t ignore_label = -1);

std::string to_key_value(const MetricReport& report, const std::string& prefix = "");
std::string to_key_value(const CompletionScore& score, const std::string& prefix = "");

}  // namespace simdiff

#endif  // SIMDIFF_METRICS_HPP_
