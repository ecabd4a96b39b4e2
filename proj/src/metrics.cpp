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

#include "simdiff/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_map>
#include <vector>

#include "simdiff/error.hpp"

namespace simdiff {
namespace {

// Hashed voxel grid with cell size tau; a neighbor within tau lies in one of
// the 27 cells around the query.
class VoxelGrid {
 public:
  VoxelGrid(std::span<const Point3> points, double cell) : points_(points), cell_(cell) {
    for (std::size_t j = 0; j < points.size(); ++j) cells_[KeyOf(points[j])].push_back(j);
  }

  bool HasNeighborWithin(const Point3& q, double tau_sq) const {
    const Key c = KeyOf(q);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          auto it = cells_.find(Key{c.x + dx, c.y + dy, c.z + dz});
          if (it == cells_.end()) continue;
          for (std::size_t j : it->second) {
            if ((points_[j] - q).squaredNorm() <= tau_sq) return true;
          }
        }
      }
    }
    return false;
  }

 private:
  struct Key {
    std::int64_t x, y, z;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = static_cast<std::uint64_t>(k.x) * 73856093ULL;
      h ^= static_cast<std::uint64_t>(k.y) * 19349663ULL;
      h ^= static_cast<std::uint64_t>(k.z) * 83492791ULL;
      return static_cast<std::size_t>(h);
    }
  };

  Key KeyOf(const Point3& p) const {
    return Key{static_cast<std::int64_t>(std::floor(p.x() / cell_)),
               static_cast<std::int64_t>(std::floor(p.y() / cell_)),
               static_cast<std::int64_t>(std::floor(p.z() / cell_))};
  }

  std::span<const Point3> points_;
  double cell_;
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> cells_;
};

double percent_within(std::span<const Point3> queries, const VoxelGrid& grid, double tau) {
  std::size_t hits = 0;
  const double tau_sq = tau * tau;
  for (const Point3& q : queries) hits += grid.HasNeighborWithin(q, tau_sq) ? 1 : 0;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(queries.size());
}

}  // namespace

double f1_score(double accuracy, double completeness) {
  const double sum = accuracy + completeness;
  return sum > 0.0 ? 2.0 * accuracy * completeness / sum : 0.0;
}

MetricReport mae(const RangeImage& pred, const RangeImage& gt, const SensorModel& sensor,
                 const Mask* region) {
  if (pred.height != gt.height || pred.width != gt.width) {
    throw UsageError("mae: image dimensions differ");
  }
  if (region && (region->height != gt.height || region->width != gt.width)) {
    throw UsageError("mae: region mask dimensions differ");
  }
  double depth_sum = 0.0;
  double remission_sum = 0.0;
  std::size_t both = 0;
  std::size_t gt_valid = 0;
  for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
    if (region && !region->bits[i]) continue;
    if (!gt.valid[i]) continue;
    ++gt_valid;
    if (!pred.valid[i]) continue;
    ++both;
    depth_sum += std::abs(sensor.DenormalizeDepth(pred.depth[i]) -
                          sensor.DenormalizeDepth(gt.depth[i]));
    remission_sum += 255.0 * std::abs(static_cast<double>(pred.remission[i]) - gt.remission[i]);
  }
  if (both == 0) throw DataError("mae: no pixel is valid in both images");
  MetricReport r;
  r.depth_mae = depth_sum / static_cast<double>(both);
  r.remission_mae = remission_sum / static_cast<double>(both);
  r.valid_pixel_count = both;
  r.coverage_fraction = static_cast<double>(both) / static_cast<double>(gt_valid);
  return r;
}

MetricReport recast_stats(const RangeImage& recast_img, const RangeImage& gt_img,
                          const SensorModel& sensor) {
  return mae(recast_img, gt_img, sensor);
}

CompletionScore completion_score(std::span<const Point3> pred, std::span<const Point3> gt,
                                 double tau) {
  if (pred.empty() || gt.empty()) throw DataError("completion_score: empty point set");
  if (!(tau > 0.0)) throw UsageError("completion_score: tau must be positive");
  CompletionScore s;
  s.tau = tau;
  s.accuracy = percent_within(pred, VoxelGrid(gt, tau), tau);
  s.completeness = percent_within(gt, VoxelGrid(pred, tau), tau);
  s.f1 = f1_score(s.accuracy, s.completeness);
  return s;
}

CompletionScore completion_score(const WorldPointSet& pred, const WorldPointSet& gt,
                                 double tau) {
  return completion_score(std::span<const Point3>(pred.points),
                          std::span<const Point3>(gt.points), tau);
}

double mean_iou(std::span<const std::int32_t> pred, std::span<const std::int32_t> gt,
                std::int32_t ignore_label) {
  if (pred.size() != gt.size()) throw UsageError("mean_iou: label images differ in size");
  std::map<std::int32_t, std::size_t> inter;
  std::map<std::int32_t, std::size_t> uni;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i] == ignore_label) continue;
    if (pred[i] == gt[i]) {
      ++inter[gt[i]];
      ++uni[gt[i]];
    } else {
      ++uni[gt[i]];
      if (pred[i] != ignore_label) ++uni[pred[i]];
    }
  }
  if (uni.empty()) throw DataError("mean_iou: no labelled pixels");
  double sum = 0.0;
  for (const auto& [label, u] : uni) sum += static_cast<double>(inter[label]) / u;
  return sum / static_cast<double>(uni.size());
}

std::string to_key_value(const MetricReport& report, const std::string& prefix) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%sdepth_mae=%.6f\n%sremission_mae=%.6f\n%svalid_pixel_count=%zu\n"
                "%scoverage_fraction=%.6f\n",
                prefix.c_str(), report.depth_mae, prefix.c_str(), report.remission_mae,
                prefix.c_str(), report.valid_pixel_count, prefix.c_str(),
                report.coverage_fraction);
  return buf;
}

std::string to_key_value(const CompletionScore& score, const std::string& prefix) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%saccuracy=%.4f\n%scompleteness=%.4f\n%sf1=%.4f\n%stau=%.4f\n",
                prefix.c_str(), score.accuracy, prefix.c_str(), score.completeness,
                prefix.c_str(), score.f1, prefix.c_str(), score.tau);
  return buf;
}

}  // namespace simdiff
