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

#include "simdiff/schedule.hpp"

#include <cmath>
#include <string>

#include "simdiff/error.hpp"

namespace simdiff {

NoiseSchedule::NoiseSchedule(std::vector<double> betas) : beta_(std::move(betas)) {
  if (beta_.empty()) throw UsageError("noise schedule needs at least one step");
  alpha_bar_.reserve(beta_.size());
  double product = 1.0;
  for (std::size_t i = 0; i < beta_.size(); ++i) {
    if (!(beta_[i] > 0.0 && beta_[i] < 1.0)) {
      throw UsageError("beta at step " + std::to_string(i + 1) + " outside (0, 1)");
    }
    product *= 1.0 - beta_[i];
    alpha_bar_.push_back(product);
  }
}

double NoiseSchedule::sigma(int t) const { return std::sqrt(beta(t)); }

NoiseSchedule schedule_linear(int steps, double beta_start, double beta_end) {
  if (steps < 1) throw UsageError("schedule needs T >= 1");
  if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0)) {
    throw UsageError("schedule requires 0 < beta_start <= beta_end < 1");
  }
  std::vector<double> betas(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double frac = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    betas[static_cast<std::size_t>(i)] = beta_start + frac * (beta_end - beta_start);
  }
  return NoiseSchedule(std::move(betas));
}

}  // namespace simdiff
