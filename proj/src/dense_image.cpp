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

#include "simdiff/dense_image.hpp"

#include <algorithm>

namespace simdiff {

DenseImage DenseImage::Zeros(int height, int width) {
  DenseImage img;
  img.height = height;
  img.width = width;
  img.data.assign(img.pixel_count() * kChannels, 0.0f);
  return img;
}

DenseImage DenseImage::FromRangeImage(const RangeImage& image) {
  DenseImage img = Zeros(image.height, image.width);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    if (!image.valid[i]) continue;
    img.depth(i) = image.depth[i];
    img.remission(i) = image.remission[i];
  }
  return img;
}

RangeImage DenseImage::ToRangeImage(const SensorModel& sensor) const {
  RangeImage out = RangeImage::Empty(height, width);
  for (std::size_t i = 0; i < pixel_count(); ++i) {
    const double d = sensor.DenormalizeDepth(depth(i));
    if (!sensor.InRange(d) || sensor.IsDead(i)) continue;
    out.Set(i, depth(i), std::clamp(remission(i), 0.0f, 1.0f));
  }
  return out;
}

}  // namespace simdiff
