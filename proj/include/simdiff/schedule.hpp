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

#ifndef SIMDIFF_SCHEDULE_HPP_
#define SIMDIFF_SCHEDULE_HPP_

#include <vector>

namespace simdiff {

// Discrete diffusion schedule over steps t = 1..T. Accessors take the step
// index t; alpha_bar(0) is 1 by definition.
class NoiseSchedule {
 public:
  NoiseSchedule() = default;
  explicit NoiseSchedule(std::vector<double> betas);

  int steps() const { return static_cast<int>(beta_.size()); }
  double beta(int t) const { return beta_[t - 1]; }
  double alpha(int t) const { return 1.0 - beta_[t - 1]; }
  double alpha_bar(int t) const { return t == 0 ? 1.0 : alpha_bar_[t - 1]; }
  // Sampling noise scale, sqrt(beta_t).
  double sigma(int t) const;

 private:
  std::vector<double> beta_;
  std::vector<double> alpha_bar_;
};

// Betas linear in t from beta_start to beta_end.
NoiseSchedule schedule_linear(int steps, double beta_start, double beta_end);

}  // namespace simdiff

#endif  // SIMDIFF_SCHEDULE_HPP_
