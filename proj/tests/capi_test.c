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

/* Exercises the C interface from plain C, linked against the shared library
 * only. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "simdiff/simdiff.h"

static int failures = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: CHECK(%s) failed (last error: %s)\n",   \
              __FILE__, __LINE__, #cond, sdf_last_error());           \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static void test_sensor_and_projection(const char* dir) {
  sdf_sensor* sensor = NULL;
  CHECK(sdf_sensor_create(64, 1024, 3.0, 25.0, 6.0, &sensor) == SDF_OK);
  CHECK(sdf_sensor_create(0, 1024, 3.0, 25.0, 6.0, &sensor) == SDF_ERR_USAGE);
  CHECK(strlen(sdf_last_error()) > 0);
  CHECK(sdf_sensor_set_ranges(sensor, 5.0, 1.0) == SDF_ERR_USAGE);

  const double xyz[6] = {10.0, 0.0, 0.0, 0.0, 20.0, -1.0};
  const double remission[2] = {51.0, 102.0};
  sdf_cloud* cloud = NULL;
  CHECK(sdf_cloud_create(xyz, remission, 2, &cloud) == SDF_OK);
  CHECK(sdf_cloud_size(cloud) == 2);

  sdf_image* image = NULL;
  CHECK(sdf_project(sensor, cloud, &image) == SDF_OK);
  int h = 0, w = 0;
  CHECK(sdf_image_shape(image, &h, &w) == SDF_OK);
  CHECK(h == 64 && w == 1024);
  CHECK(sdf_image_valid_count(image) == 2);
  float depth = 0.0f, rem = 0.0f;
  int valid = 0;
  CHECK(sdf_image_pixel(image, 57, 512, &depth, &rem, &valid) == SDF_OK);
  CHECK(valid == 1);
  CHECK(fabs(depth - log2(11.0) / 6.0) < 1e-6);
  CHECK(fabs(rem - 0.2) < 1e-6);
  CHECK(sdf_image_pixel(image, 64, 0, &depth, &rem, &valid) == SDF_ERR_USAGE);

  sdf_cloud* back = NULL;
  CHECK(sdf_backproject(sensor, image, &back) == SDF_OK);
  CHECK(sdf_cloud_size(back) == 2);
  double p[4];
  CHECK(sdf_cloud_point(back, 5, p) == SDF_ERR_USAGE);

  sdf_metrics m;
  CHECK(sdf_image_mae(image, image, sensor, &m) == SDF_OK);
  CHECK(m.depth_mae == 0.0 && m.valid_pixel_count == 2);

  char path[512];
  snprintf(path, sizeof(path), "%s/capi.sdri", dir);
  CHECK(sdf_image_write(image, path) == SDF_OK);
  sdf_image* loaded = NULL;
  CHECK(sdf_image_read(path, &loaded) == SDF_OK);
  CHECK(sdf_image_valid_count(loaded) == 2);

  snprintf(path, sizeof(path), "%s/capi.bin", dir);
  CHECK(sdf_cloud_write(cloud, path) == SDF_OK);
  sdf_cloud* reread = NULL;
  CHECK(sdf_cloud_read(path, &reread) == SDF_OK);
  CHECK(sdf_cloud_point(reread, 1, p) == SDF_OK);
  CHECK(p[1] == 20.0 && fabs(p[3] - 102.0) < 1e-4);

  CHECK(sdf_cloud_read("/nonexistent/simdiff.bin", &reread) == SDF_ERR_DATA);
  CHECK(sdf_project(NULL, cloud, &image) == SDF_ERR_USAGE);

  sdf_image_destroy(loaded);
  sdf_image_destroy(image);
  sdf_cloud_destroy(reread);
  sdf_cloud_destroy(back);
  sdf_cloud_destroy(cloud);
  sdf_sensor_destroy(sensor);
}

static void test_task(const char* dir) {
  sdf_task* task = NULL;
  CHECK(sdf_task_create(&task) == SDF_OK);
  CHECK(sdf_task_set(task, "task", "scene-complete") == SDF_OK);
  CHECK(sdf_task_set(task, "scene", "room") == SDF_OK);
  CHECK(sdf_task_set(task, "sensor.height", "16") == SDF_OK);
  CHECK(sdf_task_set(task, "width", "256") == SDF_OK);
  CHECK(sdf_task_set(task, "steps", "6") == SDF_OK);
  CHECK(sdf_task_set(task, "placement", "circle:2,2") == SDF_OK);
  CHECK(sdf_task_set(task, "omega", "x") == SDF_ERR_USAGE);
  CHECK(sdf_task_set(task, "no_such_key", "1") == SDF_ERR_USAGE);
  CHECK(sdf_task_validate(task) == SDF_OK);

  sdf_result* result = NULL;
  CHECK(sdf_task_run(task, &result) == SDF_OK);
  size_t views = 0;
  CHECK(sdf_result_view_count(result, &views) == SDF_OK);
  CHECK(views == 3);
  double acc = 0, comp = 0, f1 = 0;
  CHECK(sdf_result_completion(result, &acc, &comp, &f1) == SDF_OK);
  CHECK(acc > 90.0 && comp > 0.0 && f1 > 0.0);

  sdf_metrics m;
  CHECK(sdf_result_view_metrics(result, 1, 0, &m) == SDF_OK);
  CHECK(m.valid_pixel_count > 0);
  CHECK(sdf_result_view_metrics(result, 9, 0, &m) == SDF_ERR_USAGE);

  sdf_image* out = NULL;
  CHECK(sdf_result_view_image(result, 0, SDF_VIEW_OUTPUT, &out) == SDF_OK);
  sdf_image_destroy(out);
  CHECK(sdf_result_view_image(result, 0, SDF_VIEW_GROUND_TRUTH, &out) == SDF_OK);
  sdf_image_destroy(out);

  char* text = NULL;
  CHECK(sdf_result_report(result, SDF_REPORT_TEXT, &text) == SDF_OK);
  CHECK(text != NULL && strncmp(text, "task=scene-complete\n", 20) == 0);
  sdf_string_free(text);
  CHECK(sdf_result_report(result, SDF_REPORT_JSON, &text) == SDF_OK);
  CHECK(text != NULL && text[0] == '{');
  sdf_string_free(text);

  sdf_sensor* sensor = NULL;
  CHECK(sdf_task_sensor(task, &sensor) == SDF_OK);
  char path[512];
  snprintf(path, sizeof(path), "%s/run", dir);
  CHECK(sdf_result_write(result, sensor, path) == SDF_OK);
  snprintf(path, sizeof(path), "%s/run/report.json", dir);
  FILE* f = fopen(path, "r");
  CHECK(f != NULL);
  if (f) fclose(f);

  sdf_sensor_destroy(sensor);
  sdf_result_destroy(result);

  CHECK(sdf_task_set(task, "scene", "") == SDF_OK);
  CHECK(sdf_task_run(task, &result) == SDF_ERR_USAGE);
  CHECK(sdf_task_set(task, "input", "/nonexistent/scan.bin") == SDF_OK);
  CHECK(sdf_task_run(task, &result) == SDF_ERR_DATA);
  CHECK(sdf_task_set(task, "input", "") == SDF_OK);
  CHECK(sdf_task_set(task, "scene", "room") == SDF_OK);
  CHECK(sdf_task_set(task, "denoiser", "remote:stdio:true") == SDF_OK);
  CHECK(sdf_task_run(task, &result) == SDF_ERR_TRANSPORT);
  CHECK(sdf_task_load_config(task, "/nonexistent/simdiff.cfg") == SDF_ERR_DATA);
  sdf_task_destroy(task);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    fprintf(stderr, "usage: %s <scratch dir>\n", argv[0]);
    return 2;
  }
  CHECK(strlen(sdf_version()) > 0);
  test_sensor_and_projection(argv[1]);
  test_task(argv[1]);
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
