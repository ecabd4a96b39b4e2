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

#include "simdiff/simdiff.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "simdiff/error.hpp"
#include "simdiff/io.hpp"
#include "simdiff/metrics.hpp"
#include "simdiff/projection.hpp"
#include "simdiff/tasks.hpp"

struct sdf_task {
  simdiff::TaskSpec spec;
};
struct sdf_result {
  simdiff::TaskResult result;
};
struct sdf_sensor {
  simdiff::SensorModel sensor;
};
struct sdf_cloud {
  simdiff::PointCloud cloud;
};
struct sdf_image {
  simdiff::RangeImage image;
};

namespace {

thread_local std::string g_last_error;

sdf_status fail(sdf_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
sdf_status guarded(F&& body) {
  try {
    body();
    return SDF_OK;
  } catch (const simdiff::Error& e) {
    return fail(static_cast<sdf_status>(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SDF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SDF_ERR_INTERNAL, e.what());
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw simdiff::UsageError(message);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void copy_metrics(const simdiff::MetricReport& r, sdf_metrics* out) {
  out->depth_mae = r.depth_mae;
  out->remission_mae = r.remission_mae;
  out->valid_pixel_count = r.valid_pixel_count;
  out->coverage_fraction = r.coverage_fraction;
}

}  // namespace

extern "C" {

const char* sdf_version(void) { return "0.1.0"; }

const char* sdf_last_error(void) { return g_last_error.c_str(); }

void sdf_string_free(char* s) { std::free(s); }

sdf_status sdf_task_create(sdf_task** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = new sdf_task();
  });
}

void sdf_task_destroy(sdf_task* task) { delete task; }

sdf_status sdf_task_set(sdf_task* task, const char* key, const char* value) {
  return guarded([&] {
    require(task != nullptr && key != nullptr && value != nullptr, "null argument");
    task->spec.Set(key, value);
  });
}

sdf_status sdf_task_load_config(sdf_task* task, const char* path) {
  return guarded([&] {
    require(task != nullptr && path != nullptr, "null argument");
    for (const auto& [key, value] : simdiff::read_config(path)) task->spec.Set(key, value);
  });
}

sdf_status sdf_task_validate(const sdf_task* task) {
  return guarded([&] {
    require(task != nullptr, "null task");
    task->spec.Validate();
  });
}

sdf_status sdf_task_sensor(const sdf_task* task, sdf_sensor** out) {
  return guarded([&] {
    require(task != nullptr && out != nullptr, "null argument");
    *out = new sdf_sensor{task->spec.sensor};
  });
}

sdf_status sdf_task_run(const sdf_task* task, sdf_result** out) {
  return guarded([&] {
    require(task != nullptr && out != nullptr, "null argument");
    *out = new sdf_result{simdiff::run_task(task->spec)};
  });
}

void sdf_result_destroy(sdf_result* result) { delete result; }

sdf_status sdf_result_report(const sdf_result* result, sdf_report_format format, char** out) {
  return guarded([&] {
    require(result != nullptr && out != nullptr, "null argument");
    switch (format) {
      case SDF_REPORT_TEXT: *out = copy_string(result->result.ToKeyValue()); break;
      case SDF_REPORT_JSON: *out = copy_string(result->result.ToJson()); break;
      case SDF_REPORT_SWEEP_TABLE: *out = copy_string(result->result.SweepTable()); break;
      case SDF_REPORT_SWEEP_CSV: *out = copy_string(result->result.SweepCsv()); break;
      default: throw simdiff::UsageError("unknown report format");
    }
  });
}

sdf_status sdf_result_write(const sdf_result* result, const sdf_sensor* sensor,
                            const char* out_dir) {
  return guarded([&] {
    require(result != nullptr && sensor != nullptr && out_dir != nullptr, "null argument");
    simdiff::render_outputs(result->result, sensor->sensor, out_dir);
  });
}

sdf_status sdf_result_view_count(const sdf_result* result, size_t* out) {
  return guarded([&] {
    require(result != nullptr && out != nullptr, "null argument");
    *out = result->result.views.size();
  });
}

sdf_status sdf_result_view_image(const sdf_result* result, size_t view, sdf_view_image which,
                                 sdf_image** out) {
  return guarded([&] {
    require(result != nullptr && out != nullptr, "null argument");
    require(view < result->result.views.size(), "view index out of range");
    const auto& v = result->result.views[view];
    switch (which) {
      case SDF_VIEW_CONDITION: *out = new sdf_image{v.condition}; break;
      case SDF_VIEW_OUTPUT: *out = new sdf_image{v.output}; break;
      case SDF_VIEW_GROUND_TRUTH:
        require(v.ground_truth.has_value(), "view has no ground truth");
        *out = new sdf_image{*v.ground_truth};
        break;
      default: throw simdiff::UsageError("unknown view image");
    }
  });
}

sdf_status sdf_result_view_metrics(const sdf_result* result, size_t view, int masked,
                                   sdf_metrics* out) {
  return guarded([&] {
    require(result != nullptr && out != nullptr, "null argument");
    require(view < result->result.views.size(), "view index out of range");
    const auto& v = result->result.views[view];
    const auto& report = masked ? v.masked : v.full;
    require(report.has_value(), "view has no metrics");
    copy_metrics(*report, out);
  });
}

sdf_status sdf_result_completion(const sdf_result* result, double* accuracy,
                                 double* completeness, double* f1) {
  return guarded([&] {
    require(result != nullptr, "null result");
    require(result->result.completion.has_value(), "result has no completion score");
    const auto& c = *result->result.completion;
    if (accuracy) *accuracy = c.accuracy;
    if (completeness) *completeness = c.completeness;
    if (f1) *f1 = c.f1;
  });
}

sdf_status sdf_sensor_create(int height, int width, double fov_up_deg, double fov_down_deg,
                             double alpha, sdf_sensor** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    simdiff::SensorModel s;
    s.height = height;
    s.width = width;
    s.fov_up_deg = fov_up_deg;
    s.fov_down_deg = fov_down_deg;
    s.alpha = alpha;
    s.Validate();
    *out = new sdf_sensor{std::move(s)};
  });
}

void sdf_sensor_destroy(sdf_sensor* sensor) { delete sensor; }

sdf_status sdf_sensor_set_ranges(sdf_sensor* sensor, double min_range, double max_range) {
  return guarded([&] {
    require(sensor != nullptr, "null sensor");
    simdiff::SensorModel s = sensor->sensor;
    s.min_range = min_range;
    s.max_range = max_range;
    s.Validate();
    sensor->sensor = std::move(s);
  });
}

sdf_status sdf_cloud_create(const double* xyz, const double* remission, size_t count,
                            sdf_cloud** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    require(count == 0 || (xyz != nullptr && remission != nullptr), "null point data");
    simdiff::PointCloud c;
    for (size_t i = 0; i < count; ++i) {
      c.Add(simdiff::Point3(xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]), remission[i]);
    }
    c.Validate();
    *out = new sdf_cloud{std::move(c)};
  });
}

sdf_status sdf_cloud_read(const char* path, sdf_cloud** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new sdf_cloud{simdiff::read_cloud_bin(path)};
  });
}

sdf_status sdf_cloud_write(const sdf_cloud* cloud, const char* path) {
  return guarded([&] {
    require(cloud != nullptr && path != nullptr, "null argument");
    simdiff::write_cloud_bin(cloud->cloud, path);
  });
}

void sdf_cloud_destroy(sdf_cloud* cloud) { delete cloud; }

size_t sdf_cloud_size(const sdf_cloud* cloud) { return cloud ? cloud->cloud.size() : 0; }

sdf_status sdf_cloud_point(const sdf_cloud* cloud, size_t index, double out[4]) {
  return guarded([&] {
    require(cloud != nullptr && out != nullptr, "null argument");
    require(index < cloud->cloud.size(), "point index out of range");
    const auto& p = cloud->cloud.points[index];
    out[0] = p.x();
    out[1] = p.y();
    out[2] = p.z();
    out[3] = cloud->cloud.remissions[index];
  });
}

sdf_status sdf_project(const sdf_sensor* sensor, const sdf_cloud* cloud, sdf_image** out) {
  return guarded([&] {
    require(sensor != nullptr && cloud != nullptr && out != nullptr, "null argument");
    *out = new sdf_image{simdiff::project(cloud->cloud, sensor->sensor)};
  });
}

sdf_status sdf_backproject(const sdf_sensor* sensor, const sdf_image* image, sdf_cloud** out) {
  return guarded([&] {
    require(sensor != nullptr && image != nullptr && out != nullptr, "null argument");
    *out = new sdf_cloud{simdiff::backproject(image->image, sensor->sensor)};
  });
}

sdf_status sdf_image_read(const char* path, sdf_image** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new sdf_image{simdiff::read_range_image(path)};
  });
}

sdf_status sdf_image_write(const sdf_image* image, const char* path) {
  return guarded([&] {
    require(image != nullptr && path != nullptr, "null argument");
    simdiff::write_range_image(image->image, path);
  });
}

void sdf_image_destroy(sdf_image* image) { delete image; }

sdf_status sdf_image_shape(const sdf_image* image, int* height, int* width) {
  return guarded([&] {
    require(image != nullptr, "null image");
    if (height) *height = image->image.height;
    if (width) *width = image->image.width;
  });
}

size_t sdf_image_valid_count(const sdf_image* image) {
  return image ? image->image.ValidCount() : 0;
}

sdf_status sdf_image_pixel(const sdf_image* image, int v, int u, float* depth,
                           float* remission, int* valid) {
  return guarded([&] {
    require(image != nullptr, "null image");
    const auto& img = image->image;
    require(v >= 0 && v < img.height && u >= 0 && u < img.width, "pixel out of range");
    const size_t i = img.index(v, u);
    if (depth) *depth = img.depth[i];
    if (remission) *remission = img.remission[i];
    if (valid) *valid = img.valid[i] ? 1 : 0;
  });
}

sdf_status sdf_image_mae(const sdf_image* pred, const sdf_image* gt, const sdf_sensor* sensor,
                         sdf_metrics* out) {
  return guarded([&] {
    require(pred != nullptr && gt != nullptr && sensor != nullptr && out != nullptr,
            "null argument");
    copy_metrics(simdiff::mae(pred->image, gt->image, sensor->sensor), out);
  });
}

}  // extern "C"
