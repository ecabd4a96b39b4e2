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

#ifndef SIMDIFF_DENSE_IMAGE_HPP_
#define SIMDIFF_DENSE_IMAGE_HPP_

#include <cstddef>
#include <vector>

#include "simdiff/projection.hpp"

namespace simdiff {

// Dense h x w x 2 tensor (normalized depth, normalized remission), row-major
// and channel-interleaved. This is what the sampler and the denoisers operate
// on; it has no validity holes.
struct DenseImage {
  static constexpr int kChannels = 2;

  int height = 0;
  int width = 0;
  std::vector<float> data;

  static DenseImage Zeros(int height, int width);
  // Invalid pixels become zeros.
  static DenseImage FromRangeImage(const RangeImage& image);

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  float& depth(std::size_t pixel) { return data[pixel * kChannels]; }
  float depth(std::size_t pixel) const { return data[pixel * kChannels]; }
  float& remission(std::size_t pixel) { return data[pixel * kChannels + 1]; }
  float remission(std::size_t pixel) const { return data[pixel * kChannels + 1]; }

  bool SameShape(const DenseImage& other) const {
    return height == other.height && width == other.width;
  }

  // Pixels whose metric depth satisfies the scanner limits become valid;
  // remission is clamped to [0, 1].
  RangeImage ToRangeImage(const SensorModel& sensor) const;

  bool operator==(const DenseImage&) const = default;
};

}  // namespace simdiff

#endif  // SIMDIFF_DENSE_IMAGE_HPP_
