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

#ifndef SIMDIFF_SAMPLER_HPP_
#define SIMDIFF_SAMPLER_HPP_

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "simdiff/dense_image.hpp"
#include "simdiff/denoiser.hpp"
#include "simdiff/projection.hpp"
#include "simdiff/schedule.hpp"
#include "simdiff/views.hpp"

namespace simdiff {

// Per-view standard normal stream. Streams for different views are seeded
// independently from the master seed, so adding views never changes the draws
// of existing ones.
class NormalStream {
 public:
  NormalStream(std::uint64_t master_seed, std::uint64_t view);
  double Next() { return dist_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

struct SamplerConfig {
  double omega = 0.1;
  double delta = 5.0;  // meters; infinity disables the limit
  NoiseSchedule schedule;
  std::uint64_t master_seed = 0;
  // Keep the nearest point per pixel when rebuilding consistent images;
  // false averages all points landing in the pixel.
  bool consistency_zbuffer = true;
  // false zeroes every noise draw after initialization (deterministic chain).
  bool stochastic = true;
  bool noise_at_last_step = false;
  // Treat recast conditions of synthetic views as hard constraints.
  bool condition_synthetic_views = true;

  void Validate() const;
};

inline constexpr double kNoDeltaLimit = std::numeric_limits<double>::infinity();

struct ViewState {
  std::size_t view = 0;
  DenseImage x;  // current sample
  DenseImage condition;
  Mask mask;  // known pixels
  NormalStream noise;
};

ViewState make_view_state(std::size_t view, const RangeImage& condition, const Mask& mask,
                          const SamplerConfig& config);

// sqrt(abar_t) * x0 + sqrt(1 - abar_t) * z, z drawn from `noise`.
DenseImage forward_noise(const DenseImage& x0, int t, const NoiseSchedule& schedule,
                         NormalStream& noise);

// Ancestral step followed by replacement of known pixels with the
// forward-noised condition (the condition itself when t - 1 == 0). Updates
// state.x and returns it.
const DenseImage& conditioned_update(ViewState& state, const DenseImage& eps, int t,
                                     const SamplerConfig& config);

// Queries `denoiser` for this view, then applies conditioned_update.
const DenseImage& conditioned_step(ViewState& state, int t, Denoiser& denoiser,
                                   const SamplerConfig& config);

struct ConsistencyResult {
  std::vector<DenseImage> images;  // one per view
  std::vector<Mask> reverted;      // pixels that fell back to the input image
};

// Backprojects every view, merges in world, re-renders into every view and
// reverts pixels whose metric depth differs from the input by more than
// config.delta (or that the merged set leaves uncovered).
ConsistencyResult consistency_project(std::span<const DenseImage> images,
                                      const ViewSet& views, const SensorModel& sensor,
                                      const SamplerConfig& config);

// (1 - omega) * x_tilde + omega * x_bar.
DenseImage blend(const DenseImage& x_tilde, const DenseImage& x_bar, double omega);

RangeImage sample_single(const RangeImage& condition, const Mask& mask,
                         const SensorModel& sensor, Denoiser& denoiser,
                         const SamplerConfig& config);

std::vector<RangeImage> sample_simultaneous(std::span<const RangeImage> conditions,
                                            std::span<const Mask> masks,
                                            const ViewSet& views, const SensorModel& sensor,
                                            Denoiser& denoiser, const SamplerConfig& config);

}  // namespace simdiff

#endif  // SIMDIFF_SAMPLER_HPP_
