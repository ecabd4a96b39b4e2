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

#ifndef SIMDIFF_DENOISER_HPP_
#define SIMDIFF_DENOISER_HPP_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "simdiff/dense_image.hpp"
#include "simdiff/schedule.hpp"

namespace simdiff {

struct DenoiserDescriptor {
  std::string name;
  int channels = DenseImage::kChannels;
  bool accepts_batch = false;
  bool concurrent_safe = false;
  int expected_height = 0;  // 0 accepts any size
  int expected_width = 0;
};

// Noise (epsilon) predictor. batch[i] belongs to view first_view + i; a
// denoiser that does not accept batches is always called with one image.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual DenoiserDescriptor descriptor() const = 0;
  virtual std::vector<DenseImage> Predict(std::span<const DenseImage> batch, int t,
                                          std::size_t first_view) = 0;
};

// Analytic inverse of the forward process:
// eps = (x_t - sqrt(abar_t) * x0) / sqrt(1 - abar_t). Throws when abar_t == 1.
DenseImage oracle_denoise(const DenseImage& x_t, int t, const NoiseSchedule& schedule,
                          const DenseImage& target_x0);

DenseImage zero_denoise(const DenseImage& x_t, int t);

// Oracle with one target per view.
class OracleDenoiser final : public Denoiser {
 public:
  OracleDenoiser(NoiseSchedule schedule, std::vector<DenseImage> targets);

  DenoiserDescriptor descriptor() const override;
  std::vector<DenseImage> Predict(std::span<const DenseImage> batch, int t,
                                  std::size_t first_view) override;

 private:
  NoiseSchedule schedule_;
  std::vector<DenseImage> targets_;
};

class ZeroDenoiser final : public Denoiser {
 public:
  DenoiserDescriptor descriptor() const override;
  std::vector<DenseImage> Predict(std::span<const DenseImage> batch, int t,
                                  std::size_t first_view) override;
};

// Wraps a score-predicting model: eps = -sqrt(1 - abar_t) * score.
class ScoreAdapter final : public Denoiser {
 public:
  ScoreAdapter(std::unique_ptr<Denoiser> score_model, NoiseSchedule schedule);

  DenoiserDescriptor descriptor() const override;
  std::vector<DenseImage> Predict(std::span<const DenseImage> batch, int t,
                                  std::size_t first_view) override;

 private:
  std::unique_ptr<Denoiser> score_model_;
  NoiseSchedule schedule_;
};

// Oracle target that knows only what a view observes: valid pixels of the
// condition, with each row's gaps filled by circular linear interpolation of
// metric depth and remission. Rows without any valid pixel copy the nearest
// row that has one.
DenseImage observed_target(const RangeImage& condition, const SensorModel& sensor);

}  // namespace simdiff

#endif  // SIMDIFF_DENOISER_HPP_
