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

#include "simdiff/sampler.hpp"

#include <cmath>
#include <string>

#include "simdiff/error.hpp"

namespace simdiff {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_sensor_shape(const DenseImage& img, const SensorModel& sensor, const char* what) {
  if (img.height != sensor.height || img.width != sensor.width) {
    throw UsageError(std::string(what) + " dimensions do not match the sensor");
  }
}

std::vector<DenseImage> predict_all(Denoiser& denoiser, std::span<ViewState> states, int t) {
  const DenoiserDescriptor desc = denoiser.descriptor();
  std::vector<DenseImage> eps;
  eps.reserve(states.size());
  if (desc.accepts_batch) {
    std::vector<DenseImage> batch;
    batch.reserve(states.size());
    for (const auto& s : states) batch.push_back(s.x);
    eps = denoiser.Predict(batch, t, states.front().view);
  } else {
    for (const auto& s : states) {
      auto one = denoiser.Predict(std::span<const DenseImage>(&s.x, 1), t, s.view);
      if (one.size() != 1) throw ProtocolError("denoiser returned a wrong batch size");
      eps.push_back(std::move(one.front()));
    }
  }
  if (eps.size() != states.size()) {
    throw ProtocolError("denoiser returned " + std::to_string(eps.size()) +
                        " predictions for " + std::to_string(states.size()) + " images");
  }
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!eps[k].SameShape(states[k].x) || eps[k].data.size() != states[k].x.data.size()) {
      throw ProtocolError("denoiser output shape mismatch");
    }
  }
  return eps;
}

// Known pixels take the condition exactly.
void pin_known_pixels(ViewState& state) {
  for (std::size_t i = 0; i < state.x.pixel_count(); ++i) {
    if (!state.mask.bits[i]) continue;
    state.x.depth(i) = state.condition.depth(i);
    state.x.remission(i) = state.condition.remission(i);
  }
}

}  // namespace

NormalStream::NormalStream(std::uint64_t master_seed, std::uint64_t view)
    : engine_(splitmix64(master_seed ^ splitmix64(view + 0x5d1ffULL))) {}

void SamplerConfig::Validate() const {
  if (!(omega >= 0.0 && omega <= 1.0)) throw UsageError("omega must lie in [0, 1]");
  if (!(delta > 0.0)) throw UsageError("delta must be positive or infinite");
  if (schedule.steps() < 1) throw UsageError("sampler config has no noise schedule");
}

ViewState make_view_state(std::size_t view, const RangeImage& condition, const Mask& mask,
                          const SamplerConfig& config) {
  if (mask.height != condition.height || mask.width != condition.width) {
    throw UsageError("condition mask dimensions do not match the condition");
  }
  ViewState state{view, DenseImage::Zeros(condition.height, condition.width),
                  DenseImage::FromRangeImage(condition), mask,
                  NormalStream(config.master_seed, view)};
  for (std::size_t i = 0; i < state.mask.bits.size(); ++i) {
    state.mask.bits[i] = (state.mask.bits[i] && condition.valid[i]) ? 1 : 0;
  }
  for (float& value : state.x.data) value = static_cast<float>(state.noise.Next());
  return state;
}

DenseImage forward_noise(const DenseImage& x0, int t, const NoiseSchedule& schedule,
                         NormalStream& noise) {
  const double signal = std::sqrt(schedule.alpha_bar(t));
  const double spread = std::sqrt(1.0 - schedule.alpha_bar(t));
  DenseImage out = x0;
  for (float& value : out.data) {
    value = static_cast<float>(signal * value + spread * noise.Next());
  }
  return out;
}

const DenseImage& conditioned_update(ViewState& state, const DenseImage& eps, int t,
                                     const SamplerConfig& config) {
  const NoiseSchedule& s = config.schedule;
  if (t < 1 || t > s.steps()) throw UsageError("step " + std::to_string(t) + " out of range");
  if (!eps.SameShape(state.x)) throw ProtocolError("denoiser output shape mismatch");

  const double eps_coef = s.beta(t) / std::sqrt(1.0 - s.alpha_bar(t));
  const double inv_sqrt_alpha = 1.0 / std::sqrt(s.alpha(t));
  const bool add_noise = config.stochastic && (t > 1 || config.noise_at_last_step);
  const double sigma = s.sigma(t);
  for (std::size_t i = 0; i < state.x.data.size(); ++i) {
    double x = (state.x.data[i] - eps_coef * eps.data[i]) * inv_sqrt_alpha;
    if (add_noise) x += sigma * state.noise.Next();
    state.x.data[i] = static_cast<float>(x);
  }

  if (t - 1 == 0) {
    pin_known_pixels(state);
    return state.x;
  }
  const double signal = std::sqrt(s.alpha_bar(t - 1));
  const double spread = std::sqrt(1.0 - s.alpha_bar(t - 1));
  for (std::size_t i = 0; i < state.x.pixel_count(); ++i) {
    if (!state.mask.bits[i]) continue;
    for (int c = 0; c < DenseImage::kChannels; ++c) {
      const std::size_t j = i * DenseImage::kChannels + static_cast<std::size_t>(c);
      const double z = config.stochastic ? state.noise.Next() : 0.0;
      state.x.data[j] = static_cast<float>(signal * state.condition.data[j] + spread * z);
    }
  }
  return state.x;
}

const DenseImage& conditioned_step(ViewState& state, int t, Denoiser& denoiser,
                                   const SamplerConfig& config) {
  auto eps = predict_all(denoiser, std::span<ViewState>(&state, 1), t);
  return conditioned_update(state, eps.front(), t, config);
}

ConsistencyResult consistency_project(std::span<const DenseImage> images,
                                      const ViewSet& views, const SensorModel& sensor,
                                      const SamplerConfig& config) {
  if (images.size() != views.size()) {
    throw UsageError("consistency_project: " + std::to_string(images.size()) +
                     " images for " + std::to_string(views.size()) + " views");
  }
  for (const auto& img : images) check_sensor_shape(img, sensor, "consistency image");

  const std::size_t n = sensor.pixel_count();
  std::vector<Point3> rays(n);
  for (int v = 0; v < sensor.height; ++v) {
    for (int u = 0; u < sensor.width; ++u) {
      rays[static_cast<std::size_t>(v) * sensor.width + u] = sensor.RayDirection(v, u);
    }
  }

  // Backproject, drop scanner-limit violations, merge in world.
  std::vector<Point3> world;
  std::vector<float> remission;
  for (std::size_t k = 0; k < images.size(); ++k) {
    const RigidTransform& pose = views.poses[k];
    for (std::size_t i = 0; i < n; ++i) {
      if (sensor.IsDead(i)) continue;
      const double d = sensor.DenormalizeDepth(images[k].depth(i));
      if (!sensor.InRange(d)) continue;
      world.push_back(pose.Apply(d * rays[i]));
      remission.push_back(images[k].remission(i));
    }
  }

  ConsistencyResult result;
  result.images.reserve(images.size());
  result.reverted.reserve(images.size());
  std::vector<Point3> local(world.size());
  for (std::size_t m = 0; m < images.size(); ++m) {
    const RigidTransform view_from_world = invert(views.poses[m]);
    for (std::size_t j = 0; j < world.size(); ++j) local[j] = view_from_world.Apply(world[j]);

    // Consistent image: z-buffered (or averaged) re-rendering of the world set.
    std::vector<double> depth(n, 0.0);
    std::vector<double> rem(n, 0.0);
    std::vector<int> hits(n, 0);
    for (std::size_t j = 0; j < local.size(); ++j) {
      const auto hit = locate_pixel(local[j], sensor);
      if (!hit) continue;
      const std::size_t i = static_cast<std::size_t>(hit->v) * sensor.width + hit->u;
      if (config.consistency_zbuffer) {
        if (hits[i] == 0 || hit->range < depth[i]) {
          depth[i] = hit->range;
          rem[i] = remission[j];
        }
        hits[i] = 1;
      } else {
        depth[i] += hit->range;
        rem[i] += remission[j];
        ++hits[i];
      }
    }

    const DenseImage& tilde = images[m];
    DenseImage bar = tilde;
    Mask reverted = Mask::Filled(sensor.height, sensor.width, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (hits[i] == 0) {
        reverted.bits[i] = 1;
        continue;
      }
      const double d_bar = config.consistency_zbuffer ? depth[i] : depth[i] / hits[i];
      const double r_bar = config.consistency_zbuffer ? rem[i] : rem[i] / hits[i];
      const double d_tilde = sensor.DenormalizeDepth(tilde.depth(i));
      if (std::abs(d_bar - d_tilde) > config.delta) {
        reverted.bits[i] = 1;
        continue;
      }
      bar.depth(i) = static_cast<float>(sensor.NormalizeDepth(d_bar));
      bar.remission(i) = static_cast<float>(r_bar);
    }
    result.images.push_back(std::move(bar));
    result.reverted.push_back(std::move(reverted));
  }
  return result;
}

DenseImage blend(const DenseImage& x_tilde, const DenseImage& x_bar, double omega) {
  if (!x_tilde.SameShape(x_bar)) throw UsageError("blend: image shapes differ");
  if (!(omega >= 0.0 && omega <= 1.0)) throw UsageError("blend: omega outside [0, 1]");
  if (omega == 0.0) return x_tilde;
  if (omega == 1.0) return x_bar;
  DenseImage out = x_tilde;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] = static_cast<float>((1.0 - omega) * x_tilde.data[i] + omega * x_bar.data[i]);
  }
  return out;
}

RangeImage sample_single(const RangeImage& condition, const Mask& mask,
                         const SensorModel& sensor, Denoiser& denoiser,
                         const SamplerConfig& config) {
  sensor.Validate();
  config.Validate();
  ViewState state = make_view_state(0, condition, mask, config);
  check_sensor_shape(state.x, sensor, "condition");
  for (int t = config.schedule.steps(); t >= 1; --t) {
    conditioned_step(state, t, denoiser, config);
  }
  return state.x.ToRangeImage(sensor);
}

std::vector<RangeImage> sample_simultaneous(std::span<const RangeImage> conditions,
                                            std::span<const Mask> masks,
                                            const ViewSet& views, const SensorModel& sensor,
                                            Denoiser& denoiser, const SamplerConfig& config) {
  sensor.Validate();
  config.Validate();
  if (conditions.size() != views.size() || masks.size() != views.size()) {
    throw UsageError("sample_simultaneous: " + std::to_string(conditions.size()) +
                     " conditions, " + std::to_string(masks.size()) + " masks, " +
                     std::to_string(views.size()) + " views");
  }
  if (views.size() == 0) throw UsageError("sample_simultaneous: no views");

  std::vector<ViewState> states;
  states.reserve(views.size());
  for (std::size_t k = 0; k < views.size(); ++k) {
    Mask mask = masks[k];
    if (k > 0 && !config.condition_synthetic_views) {
      mask = Mask::Filled(mask.height, mask.width, false);
    }
    states.push_back(make_view_state(k, conditions[k], mask, config));
    check_sensor_shape(states.back().x, sensor, "condition");
  }

  std::vector<DenseImage> tilde(states.size());
  for (int t = config.schedule.steps(); t >= 1; --t) {
    auto eps = predict_all(denoiser, states, t);
    for (std::size_t k = 0; k < states.size(); ++k) {
      conditioned_update(states[k], eps[k], t, config);
    }
    // omega == 0 makes the blend the identity on x_tilde.
    if (config.omega == 0.0) continue;
    for (std::size_t k = 0; k < states.size(); ++k) tilde[k] = states[k].x;
    ConsistencyResult consistent = consistency_project(tilde, views, sensor, config);
    for (std::size_t k = 0; k < states.size(); ++k) {
      states[k].x = blend(tilde[k], consistent.images[k], config.omega);
    }
  }

  std::vector<RangeImage> out;
  out.reserve(states.size());
  for (auto& state : states) {
    pin_known_pixels(state);
    out.push_back(state.x.ToRangeImage(sensor));
  }
  return out;
}

}  // namespace simdiff
