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

/* C interface to the simdiff library. Objects are opaque handles owned by the
 * caller and released with the matching *_destroy function. Every function
 * returns an sdf_status; on failure sdf_last_error() describes the problem
 * (the message is thread-local and valid until the next failing call). */

#ifndef SIMDIFF_SIMDIFF_H_
#define SIMDIFF_SIMDIFF_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SIMDIFF_BUILDING_LIBRARY)
#define SDF_API __attribute__((visibility("default")))
#else
#define SDF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sdf_status {
  SDF_OK = 0,
  SDF_ERR_USAGE = 2,     /* bad arguments or settings */
  SDF_ERR_DATA = 3,      /* unreadable or inconsistent input data */
  SDF_ERR_PROTOCOL = 4,  /* denoiser protocol violation */
  SDF_ERR_TRANSPORT = 5, /* denoiser connection lost */
  SDF_ERR_INTERNAL = 6
} sdf_status;

typedef enum sdf_report_format {
  SDF_REPORT_TEXT = 0, /* key=value lines */
  SDF_REPORT_JSON = 1,
  SDF_REPORT_SWEEP_TABLE = 2,
  SDF_REPORT_SWEEP_CSV = 3
} sdf_report_format;

typedef enum sdf_view_image {
  SDF_VIEW_CONDITION = 0,
  SDF_VIEW_OUTPUT = 1,
  SDF_VIEW_GROUND_TRUTH = 2
} sdf_view_image;

typedef struct sdf_task sdf_task;
typedef struct sdf_result sdf_result;
typedef struct sdf_sensor sdf_sensor;
typedef struct sdf_cloud sdf_cloud;
typedef struct sdf_image sdf_image;

typedef struct sdf_metrics {
  double depth_mae;     /* meters */
  double remission_mae; /* 0-255 units */
  size_t valid_pixel_count;
  double coverage_fraction;
} sdf_metrics;

SDF_API const char* sdf_version(void);
SDF_API const char* sdf_last_error(void);
/* Frees strings returned through char** out-parameters. */
SDF_API void sdf_string_free(char* s);

/* Tasks. Settings use the config-file keys (for example "omega", "delta",
 * "placement", "sensor.height"). */
SDF_API sdf_status sdf_task_create(sdf_task** out);
SDF_API void sdf_task_destroy(sdf_task* task);
SDF_API sdf_status sdf_task_set(sdf_task* task, const char* key, const char* value);
SDF_API sdf_status sdf_task_load_config(sdf_task* task, const char* path);
SDF_API sdf_status sdf_task_validate(const sdf_task* task);
SDF_API sdf_status sdf_task_sensor(const sdf_task* task, sdf_sensor** out);
SDF_API sdf_status sdf_task_run(const sdf_task* task, sdf_result** out);

SDF_API void sdf_result_destroy(sdf_result* result);
SDF_API sdf_status sdf_result_report(const sdf_result* result, sdf_report_format format,
                                     char** out);
SDF_API sdf_status sdf_result_write(const sdf_result* result, const sdf_sensor* sensor,
                                    const char* out_dir);
SDF_API sdf_status sdf_result_view_count(const sdf_result* result, size_t* out);
/* SDF_ERR_USAGE when the view has no image of the requested kind. */
SDF_API sdf_status sdf_result_view_image(const sdf_result* result, size_t view,
                                         sdf_view_image which, sdf_image** out);
SDF_API sdf_status sdf_result_view_metrics(const sdf_result* result, size_t view,
                                           int masked, sdf_metrics* out);
SDF_API sdf_status sdf_result_completion(const sdf_result* result, double* accuracy,
                                         double* completeness, double* f1);

/* Sensor model. fov_down is a positive magnitude in degrees. */
SDF_API sdf_status sdf_sensor_create(int height, int width, double fov_up_deg,
                                     double fov_down_deg, double alpha, sdf_sensor** out);
SDF_API void sdf_sensor_destroy(sdf_sensor* sensor);
SDF_API sdf_status sdf_sensor_set_ranges(sdf_sensor* sensor, double min_range,
                                         double max_range);

/* Point clouds; remission is in 0-255 units. */
SDF_API sdf_status sdf_cloud_create(const double* xyz, const double* remission, size_t count,
                                    sdf_cloud** out);
SDF_API sdf_status sdf_cloud_read(const char* path, sdf_cloud** out);
SDF_API sdf_status sdf_cloud_write(const sdf_cloud* cloud, const char* path);
SDF_API void sdf_cloud_destroy(sdf_cloud* cloud);
SDF_API size_t sdf_cloud_size(const sdf_cloud* cloud);
/* out receives x, y, z, remission. */
SDF_API sdf_status sdf_cloud_point(const sdf_cloud* cloud, size_t index, double out[4]);

/* Range images. */
SDF_API sdf_status sdf_project(const sdf_sensor* sensor, const sdf_cloud* cloud,
                               sdf_image** out);
SDF_API sdf_status sdf_backproject(const sdf_sensor* sensor, const sdf_image* image,
                                   sdf_cloud** out);
SDF_API sdf_status sdf_image_read(const char* path, sdf_image** out);
SDF_API sdf_status sdf_image_write(const sdf_image* image, const char* path);
SDF_API void sdf_image_destroy(sdf_image* image);
SDF_API sdf_status sdf_image_shape(const sdf_image* image, int* height, int* width);
SDF_API size_t sdf_image_valid_count(const sdf_image* image);
SDF_API sdf_status sdf_image_pixel(const sdf_image* image, int v, int u, float* depth,
                                   float* remission, int* valid);
SDF_API sdf_status sdf_image_mae(const sdf_image* pred, const sdf_image* gt,
                                 const sdf_sensor* sensor, sdf_metrics* out);

#ifdef __cplusplus
}
#endif

#endif /* SIMDIFF_SIMDIFF_H_ */
