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

// Command-line front end. Talks to the library through the C API only.

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "simdiff/simdiff.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitDenoiser = 4;

struct Failure {
  sdf_status status;
};

void check(sdf_status status) {
  if (status != SDF_OK) throw Failure{status};
}

int exit_code(sdf_status status) {
  switch (status) {
    case SDF_OK: return kExitOk;
    case SDF_ERR_USAGE: return kExitUsage;
    case SDF_ERR_DATA: return kExitData;
    case SDF_ERR_PROTOCOL:
    case SDF_ERR_TRANSPORT: return kExitDenoiser;
    default: return kExitInternal;
  }
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using TaskPtr = std::unique_ptr<sdf_task, Deleter<sdf_task, sdf_task_destroy>>;
using ResultPtr = std::unique_ptr<sdf_result, Deleter<sdf_result, sdf_result_destroy>>;
using SensorPtr = std::unique_ptr<sdf_sensor, Deleter<sdf_sensor, sdf_sensor_destroy>>;
using CloudPtr = std::unique_ptr<sdf_cloud, Deleter<sdf_cloud, sdf_cloud_destroy>>;
using ImagePtr = std::unique_ptr<sdf_image, Deleter<sdf_image, sdf_image_destroy>>;

std::string take_string(char* s) {
  std::string out = s ? s : "";
  sdf_string_free(s);
  return out;
}

// Flags shared by every task; each maps to one task setting.
const std::vector<std::pair<std::string, std::string>> kTaskFlags = {
    {"--input", "input"},
    {"--scene", "scene"},
    {"--scene-seed", "scene_seed"},
    {"--poses", "poses"},
    {"--scans", "scans"},
    {"--gt-world", "gt_world"},
    {"--frame", "frame"},
    {"--height", "height"},
    {"--width", "width"},
    {"--fov-up", "fov_up"},
    {"--fov-down", "fov_down"},
    {"--alpha", "alpha"},
    {"--min-range", "min_range"},
    {"--max-range", "max_range"},
    {"--omega", "omega"},
    {"--delta", "delta"},
    {"--steps", "steps"},
    {"--beta-start", "beta_start"},
    {"--beta-end", "beta_end"},
    {"--seed", "seed"},
    {"--placement", "placement"},
    {"--views", "views"},
    {"--view-order", "view_order"},
    {"--denoiser", "denoiser"},
    {"--oracle-target", "oracle_target"},
    {"--method", "method"},
    {"--beam-keep", "beam_keep"},
    {"--gap-center", "gap_center"},
    {"--gap-width", "gap_width"},
    {"--tau", "tau"},
    {"--stochastic", "stochastic"},
    {"--zbuffer", "zbuffer"},
};

struct TaskCommand {
  CLI::App* app = nullptr;
  std::string task;
  std::string config;
  std::string out_dir;
  bool json = false;
  std::vector<std::string> overrides;
  std::map<std::string, std::string> values;
};

void add_task_options(TaskCommand& cmd, bool is_sweep) {
  cmd.app->add_option("--config", cmd.config, "key=value config file")->check(CLI::ExistingFile);
  cmd.app->add_option("--out", cmd.out_dir, "directory for reports, images and clouds");
  cmd.app->add_flag("--json", cmd.json, "print the report as JSON");
  cmd.app->add_option("--set", cmd.overrides, "extra setting as key=value (repeatable)");
  for (const auto& [flag, key] : kTaskFlags) {
    cmd.app->add_option(flag, cmd.values[key], "setting '" + key + "'");
  }
  if (is_sweep) {
    cmd.app->add_option("--task", cmd.values["sweep_task"], "task to sweep")->required();
    cmd.app->add_option("--axis", cmd.values["sweep_axis"], "omega | delta | views | placement")
        ->required();
    cmd.app->add_option("--values", cmd.values["sweep_values"], "comma-separated values")
        ->required();
  }
}

int run_task_command(const TaskCommand& cmd) {
  sdf_task* raw = nullptr;
  check(sdf_task_create(&raw));
  TaskPtr task(raw);
  check(sdf_task_set(task.get(), "task", cmd.task.c_str()));
  if (!cmd.config.empty()) check(sdf_task_load_config(task.get(), cmd.config.c_str()));
  for (const auto& [flag, key] : kTaskFlags) {
    auto it = cmd.values.find(key);
    if (it != cmd.values.end() && !it->second.empty()) {
      check(sdf_task_set(task.get(), key.c_str(), it->second.c_str()));
    }
  }
  for (const char* key : {"sweep_task", "sweep_axis", "sweep_values"}) {
    auto it = cmd.values.find(key);
    if (it != cmd.values.end() && !it->second.empty()) {
      check(sdf_task_set(task.get(), key, it->second.c_str()));
    }
  }
  for (const auto& kv : cmd.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
      return kExitUsage;
    }
    check(sdf_task_set(task.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
  }
  check(sdf_task_validate(task.get()));

  sdf_result* raw_result = nullptr;
  check(sdf_task_run(task.get(), &raw_result));
  ResultPtr result(raw_result);

  char* report = nullptr;
  check(sdf_result_report(result.get(), cmd.json ? SDF_REPORT_JSON : SDF_REPORT_TEXT, &report));
  std::cout << take_string(report);
  if (cmd.task == "sweep" && !cmd.json) {
    check(sdf_result_report(result.get(), SDF_REPORT_SWEEP_TABLE, &report));
    std::cout << '\n' << take_string(report);
  }
  if (!cmd.out_dir.empty()) {
    sdf_sensor* raw_sensor = nullptr;
    check(sdf_task_sensor(task.get(), &raw_sensor));
    SensorPtr sensor(raw_sensor);
    check(sdf_result_write(result.get(), sensor.get(), cmd.out_dir.c_str()));
  }
  return kExitOk;
}

struct SensorArgs {
  int height = 64;
  int width = 1024;
  double fov_up = 3.0;
  double fov_down = 25.0;
  double alpha = 6.0;
  double min_range = 1.0;
  double max_range = 80.0;
};

void add_sensor_options(CLI::App* app, SensorArgs& s) {
  app->add_option("--height", s.height, "rows");
  app->add_option("--width", s.width, "columns");
  app->add_option("--fov-up", s.fov_up, "degrees above the horizon");
  app->add_option("--fov-down", s.fov_down, "degrees below the horizon (magnitude)");
  app->add_option("--alpha", s.alpha, "depth normalization constant");
  app->add_option("--min-range", s.min_range, "meters");
  app->add_option("--max-range", s.max_range, "meters");
}

SensorPtr make_sensor(const SensorArgs& s) {
  sdf_sensor* raw = nullptr;
  check(sdf_sensor_create(s.height, s.width, s.fov_up, s.fov_down, s.alpha, &raw));
  SensorPtr sensor(raw);
  check(sdf_sensor_set_ranges(sensor.get(), s.min_range, s.max_range));
  return sensor;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simultaneous multi-view diffusion sampling for LiDAR range images"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sdf_version()));

  const std::vector<std::pair<std::string, std::string>> tasks = {
      {"densify", "fill missing beams of a scan"},
      {"inpaint", "fill an angular gap of a scan"},
      {"novel-view", "render scans at poses along a trajectory"},
      {"scene-complete", "complete a scene from a single scan"},
      {"recast-eval", "compare recast views with ground-truth scans"},
      {"sweep", "run a task over a range of one setting"},
  };
  std::vector<std::unique_ptr<TaskCommand>> commands;
  for (const auto& [name, help] : tasks) {
    auto cmd = std::make_unique<TaskCommand>();
    cmd->task = name;
    cmd->app = app.add_subcommand(name, help);
    add_task_options(*cmd, name == "sweep");
    commands.push_back(std::move(cmd));
  }

  SensorArgs project_sensor;
  std::string project_in, project_out;
  CLI::App* project = app.add_subcommand("project", "project a .bin scan to an SDRI image");
  project->add_option("input", project_in, "KITTI-style .bin scan")->required();
  project->add_option("output", project_out, "SDRI file")->required();
  add_sensor_options(project, project_sensor);

  SensorArgs back_sensor;
  std::string back_in, back_out;
  CLI::App* back = app.add_subcommand("backproject", "backproject an SDRI image to a .bin scan");
  back->add_option("input", back_in, "SDRI file")->required();
  back->add_option("output", back_out, ".bin scan")->required();
  add_sensor_options(back, back_sensor);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (const auto& cmd : commands) {
      if (cmd->app->parsed()) return run_task_command(*cmd);
    }
    if (project->parsed()) {
      SensorPtr sensor = make_sensor(project_sensor);
      sdf_cloud* raw_cloud = nullptr;
      check(sdf_cloud_read(project_in.c_str(), &raw_cloud));
      CloudPtr cloud(raw_cloud);
      sdf_image* raw_image = nullptr;
      check(sdf_project(sensor.get(), cloud.get(), &raw_image));
      ImagePtr image(raw_image);
      check(sdf_image_write(image.get(), project_out.c_str()));
      std::cout << "points=" << sdf_cloud_size(cloud.get())
                << "\nvalid_pixels=" << sdf_image_valid_count(image.get()) << '\n';
      return kExitOk;
    }
    if (back->parsed()) {
      SensorPtr sensor = make_sensor(back_sensor);
      sdf_image* raw_image = nullptr;
      check(sdf_image_read(back_in.c_str(), &raw_image));
      ImagePtr image(raw_image);
      sdf_cloud* raw_cloud = nullptr;
      check(sdf_backproject(sensor.get(), image.get(), &raw_cloud));
      CloudPtr cloud(raw_cloud);
      check(sdf_cloud_write(cloud.get(), back_out.c_str()));
      std::cout << "points=" << sdf_cloud_size(cloud.get()) << '\n';
      return kExitOk;
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << sdf_last_error() << '\n';
    return exit_code(f.status);
  }
  return kExitUsage;
}
