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

#include "simdiff/denoiser.hpp"

#include <algorithm>
#include <cmath>

#include "simdiff/error.hpp"

namespace simdiff {

DenseImage oracle_denoise(const DenseImage& x_t, int t, const NoiseSchedule& schedule,
                          const DenseImage& target_x0) {
  if (!x_t.SameShape(target_x0)) throw UsageError("oracle target shape mismatch");
  const double abar = schedule.alpha_bar(t);
  if (!(abar < 1.0)) throw UsageError("oracle_denoise undefined for alpha_bar == 1");
  const double signal = std::sqrt(abar);
  const double inv_noise = 1.0 / std::sqrt(1.0 - abar);
  DenseImage eps = DenseImage::Zeros(x_t.height, x_t.width);
  for (std::size_t i = 0; i < x_t.data.size(); ++i) {
    eps.data[i] = static_cast<float>((x_t.data[i] - signal * target_x0.data[i]) * inv_noise);
  }
  return eps;
}

DenseImage zero_denoise(const DenseImage& x_t, int /*t*/) {
  return DenseImage::Zeros(x_t.height, x_t.width);
}

OracleDenoiser::OracleDenoiser(NoiseSchedule schedule, std::vector<DenseImage> targets)
    : schedule_(std::move(schedule)), targets_(std::move(targets)) {}

DenoiserDescriptor OracleDenoiser::descriptor() const {
  DenoiserDescriptor d;
  d.name = "oracle";
  d.accepts_batch = true;
  d.concurrent_safe = true;
  if (!targets_.empty()) {
    d.expected_height = targets_.front().height;
    d.expected_width = targets_.front().width;
  }
  return d;
}

std::vector<DenseImage> OracleDenoiser::Predict(std::span<const DenseImage> batch, int t,
                                                std::size_t first_view) {
  if (first_view + batch.size() > targets_.size()) {
    throw UsageError("oracle denoiser has " + std::to_string(targets_.size()) +
                     " targets, asked for view " +
                     std::to_string(first_view + batch.size() - 1));
  }
  std::vector<DenseImage> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    out.push_back(oracle_denoise(batch[i], t, schedule_, targets_[first_view + i]));
  }
  return out;
}

DenoiserDescriptor ZeroDenoiser::descriptor() const {
  DenoiserDescriptor d;
  d.name = "zero";
  d.accepts_batch = true;
  d.concurrent_safe = true;
  return d;
}

std::vector<DenseImage> ZeroDenoiser::Predict(std::span<const DenseImage> batch, int t,
                                              std::size_t /*first_view*/) {
  std::vector<DenseImage> out;
  out.reserve(batch.size());
  for (const auto& x : batch) out.push_back(zero_denoise(x, t));
  return out;
}

ScoreAdapter::ScoreAdapter(std::unique_ptr<Denoiser> score_model, NoiseSchedule schedule)
    : score_model_(std::move(score_model)), schedule_(std::move(schedule)) {}

DenoiserDescriptor ScoreAdapter::descriptor() const {
  DenoiserDescriptor d = score_model_->descriptor();
  d.name = "score:" + d.name;
  return d;
}

std::vector<DenseImage> ScoreAdapter::Predict(std::span<const DenseImage> batch, int t,
                                              std::size_t first_view) {
  std::vector<DenseImage> scores = score_model_->Predict(batch, t, first_view);
  const double scale = -std::sqrt(1.0 - schedule_.alpha_bar(t));
  for (auto& s : scores) {
    for (float& value : s.data) value = static_cast<float>(scale * value);
  }
  return scores;
}

DenseImage observed_target(const RangeImage& condition, const SensorModel& sensor) {
  const int h = condition.height;
  const int w = condition.width;
  DenseImage out = DenseImage::Zeros(h, w);
  std::vector<double> depth(condition.pixel_count(), 0.0);
  std::vector<double> remission(condition.pixel_count(), 0.0);
  std::vector<bool> row_filled(static_cast<std::size_t>(h), false);

  for (int v = 0; v < h; ++v) {
    std::vector<int> known;
    for (int u = 0; u < w; ++u) {
      if (condition.valid[condition.index(v, u)]) known.push_back(u);
    }
    if (known.empty()) continue;
    row_filled[static_cast<std::size_t>(v)] = true;
    for (std::size_t k = 0; k < known.size(); ++k) {
      const int u0 = known[k];
      const int u1 = known[(k + 1) % known.size()];
      const int gap = ((u1 - u0 + w - 1) % w) + 1;  // columns from u0 to u1, circular
      const std::size_t i0 = condition.index(v, u0);
      const std::size_t i1 = condition.index(v, u1);
      const double d0 = sensor.DenormalizeDepth(condition.depth[i0]);
      const double d1 = sensor.DenormalizeDepth(condition.depth[i1]);
      const double r0 = condition.remission[i0];
      const double r1 = condition.remission[i1];
      for (int s = 0; s < gap; ++s) {
        const double f = static_cast<double>(s) / gap;
        const std::size_t i = condition.index(v, (u0 + s) % w);
        depth[i] = (1.0 - f) * d0 + f * d1;
        remission[i] = (1.0 - f) * r0 + f * r1;
      }
    }
  }

  for (int v = 0; v < h; ++v) {
    int src = -1;
    if (row_filled[static_cast<std::size_t>(v)]) {
      src = v;
    } else {
      for (int off = 1; off < h && src < 0; ++off) {
        if (v - off >= 0 && row_filled[static_cast<std::size_t>(v - off)]) src = v - off;
        else if (v + off < h && row_filled[static_cast<std::size_t>(v + off)]) src = v + off;
      }
    }
    if (src < 0) continue;
    for (int u = 0; u < w; ++u) {
      const std::size_t i = condition.index(v, u);
      const std::size_t j = condition.index(src, u);
      if (src == v && condition.valid[i]) {
        out.depth(i) = condition.depth[i];
        out.remission(i) = condition.remission[i];
      } else {
        out.depth(i) = static_cast<float>(sensor.NormalizeDepth(std::max(depth[j], 0.0)));
        out.remission(i) = static_cast<float>(remission[j]);
      }
    }
  }
  return out;
}

}  // namespace simdiff
