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

#ifndef SIMDIFF_TASKS_HPP_
#define SIMDIFF_TASKS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "simdiff/io.hpp"
#include "simdiff/metrics.hpp"
#include "simdiff/projection.hpp"
#include "simdiff/sampler.hpp"
#include "simdiff/views.hpp"

namespace simdiff {

enum class TaskKind { kDensify, kInpaint, kNovelView, kSceneComplete, kRecastEval, kSweep };

TaskKind parse_task_kind(const std::string& name);
std::string to_string(TaskKind kind);

// Synthetic view placement.
//   none
//   circle:<radius>[,<count>]
//   circles:<r1>+<r2>[+...][,<count>]   count views per circle
//   road:<offset>,<offset>,...          signed meters along the fitted road
//   trajectory:<stride>,<count>         frames of the pose sequence
struct Placement {
  enum class Kind { kNone, kCircle, kRoad, kTrajectory };
  Kind kind = Kind::kNone;
  std::vector<double> radii;
  int count = 4;
  std::vector<double> offsets;
  int stride = 5;

  static Placement Parse(const std::string& text);
  std::string ToString() const;
};

// Sampler knobs as they appear in configs; turned into a SamplerConfig per run.
struct SamplerSettings {
  double omega = 0.1;
  double delta = 5.0;
  int steps = 100;
  double beta_start = 0.0;  // 0 selects the scaled default for `steps`
  double beta_end = 0.0;
  std::uint64_t seed = 0;
  bool stochastic = true;
  bool consistency_zbuffer = true;
  bool condition_synthetic_views = true;
  bool noise_at_last_step = false;

  SamplerConfig ToConfig() const;
};

struct TaskSpec {
  TaskKind task = TaskKind::kDensify;
  SensorModel sensor;
  SamplerSettings sampler;

  // Input: a KITTI-style scan (sensor frame) or a synthetic scene.
  std::string input;
  std::string scene;
  std::uint64_t scene_seed = 7;
  std::string poses;     // pose file (world_from_sensor per frame)
  std::string scans;     // directory of <frame>.bin ground-truth scans
  std::string gt_world;  // world-frame ground-truth cloud for scene completion
  int frame = 0;
  double frame_spacing = 0.88;  // meters per frame on synthetic trajectories

  // Masks.
  int beam_keep = 4;
  double gap_center_deg = -72.0;  // azimuth; negative is to the right
  double gap_width_deg = 90.0;

  Placement placement;
  int max_views = -1;  // keep only the first N synthetic views
  std::vector<int> view_order;

  // diffusion | nearest | bilinear | bicubic (the latter three densify only)
  std::string method = "diffusion";
  std::string denoiser = "oracle";  // oracle | zero | remote:<endpoint>
  std::string oracle_target = "gt";  // gt | observed
  double tau = 0.2;

  // Sweep.
  TaskKind sweep_task = TaskKind::kInpaint;
  std::string sweep_axis;
  std::vector<std::string> sweep_values;

  // Accepts "key", "section.key" and CLI spellings ("fov-up").
  void Set(const std::string& key, const std::string& value);
  static TaskSpec FromConfig(const ConfigMap& config);
  void Validate() const;
};

struct ViewResult {
  std::string label;
  RigidTransform pose;
  RangeImage condition;
  RangeImage output;
  std::optional<RangeImage> ground_truth;
  std::optional<MetricReport> full;    // whole image vs ground truth
  std::optional<MetricReport> masked;  // pixels the condition did not provide
};

struct SweepRow {
  std::string value;
  std::vector<std::pair<std::string, double>> metrics;
};

struct TaskResult {
  TaskKind task = TaskKind::kDensify;
  std::vector<ViewResult> views;
  std::optional<WorldPointSet> world;
  std::optional<CompletionScore> completion;
  std::optional<CompletionScore> input_completion;
  std::string sweep_axis;
  std::vector<SweepRow> sweep;

  std::string ToKeyValue() const;
  std::string ToJson() const;
  std::string SweepTable() const;
  std::string SweepCsv() const;
};

TaskResult run_task(const TaskSpec& spec);
TaskResult run_densify(const TaskSpec& spec);
TaskResult run_inpaint(const TaskSpec& spec);
TaskResult run_novel_view(const TaskSpec& spec);
TaskResult run_scene_complete(const TaskSpec& spec);
TaskResult run_recast_eval(const TaskSpec& spec);
TaskResult run_sweep(const TaskSpec& spec);

// Beam mask keeping rows v with v % keep == 0.
Mask beam_mask(const SensorModel& sensor, int keep);
// Mask with a contiguous band of round(width/360 * w) columns removed,
// centered on the given azimuth.
Mask angular_gap_mask(const SensorModel& sensor, double center_deg, double width_deg);

// Writes reports, SDRI outputs, PGM rasters and clouds into `out_dir`.
void render_outputs(const TaskResult& result, const SensorModel& sensor,
                    const std::filesystem::path& out_dir);

}  // namespace simdiff

#endif  // SIMDIFF_TASKS_HPP_
