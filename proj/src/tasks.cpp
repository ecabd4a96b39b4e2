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

#include "simdiff/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "simdiff/denoiser.hpp"
#include "simdiff/error.hpp"
#include "simdiff/remote.hpp"
#include "simdiff/scene.hpp"

namespace simdiff {
namespace {

using json = nlohmann::ordered_json;

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw UsageError("'" + key + "' expects a number, got '" + value + "'");
  }
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  const double d = parse_double(key, value);
  if (d != std::floor(d) || std::abs(d) > 1e9) {
    throw UsageError("'" + key + "' expects an integer, got '" + value + "'");
  }
  return static_cast<int>(d);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw UsageError("'" + key + "' expects a boolean, got '" + value + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double parse_delta(const std::string& key, const std::string& value) {
  if (value == "none" || value == "inf" || value == "infinity" || value == "no-limit" ||
      value == "nolimit") {
    return kNoDeltaLimit;
  }
  return parse_double(key, value);
}

std::string format_double(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream s;
  s << v;
  return s.str();
}

// ---------------------------------------------------------------------------
// Inputs and ground truth.

struct Source {
  std::optional<SyntheticScene> scene;
  std::vector<PoseRecord> poses;
  RigidTransform input_pose;
  PointCloud input_cloud;
  RangeImage input_image;
};

RigidTransform frame_pose(const TaskSpec& spec, const Source& src, int frame) {
  if (src.scene) return RigidTransform::Translation(frame * spec.frame_spacing, 0.0, 0.0);
  if (src.poses.empty()) {
    if (frame == spec.frame) return RigidTransform::Identity();
    throw UsageError("a pose file is required for trajectory placement");
  }
  auto pose = find_pose(src.poses, frame);
  if (!pose) throw DataError("no pose for frame " + std::to_string(frame));
  return *pose;
}

std::filesystem::path scan_path(const TaskSpec& spec, int frame) {
  char name[32];
  std::snprintf(name, sizeof(name), "%010d.bin", frame);
  std::filesystem::path p = std::filesystem::path(spec.scans) / name;
  if (std::filesystem::exists(p)) return p;
  return std::filesystem::path(spec.scans) / (std::to_string(frame) + ".bin");
}

Source load_source(const TaskSpec& spec) {
  Source src;
  if (!spec.poses.empty()) src.poses = read_poses(spec.poses);
  if (!spec.scene.empty()) {
    src.scene.emplace(parse_scene_kind(spec.scene), spec.scene_seed);
    src.input_pose = frame_pose(spec, src, spec.frame);
    src.input_image = src.scene->Render(src.input_pose, spec.sensor);
    src.input_cloud = backproject(src.input_image, spec.sensor);
  } else {
    src.input_cloud = read_cloud_bin(spec.input);
    src.input_pose = src.poses.empty() ? RigidTransform::Identity()
                                       : frame_pose(spec, src, spec.frame);
    src.input_image = project(src.input_cloud, spec.sensor);
  }
  src.input_cloud.frame_id = "input";
  return src;
}

std::optional<RangeImage> ground_truth_at(const TaskSpec& spec, const Source& src,
                                          const RigidTransform& pose, int frame) {
  if (src.scene) return src.scene->Render(pose, spec.sensor);
  if (frame >= 0 && !spec.scans.empty()) {
    return project(read_cloud_bin(scan_path(spec, frame)), spec.sensor);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// View placement.

struct PlacedViews {
  ViewSet views;
  std::vector<int> frames;  // source frame per view, -1 when synthetic
};

PlacedViews place_views(const TaskSpec& spec, const Source& src,
                        const PointCloud& condition_cloud) {
  PlacedViews placed;
  placed.views.Add(src.input_pose, "input");
  placed.frames.push_back(spec.frame);

  const Placement& p = spec.placement;
  switch (p.kind) {
    case Placement::Kind::kNone:
      break;
    case Placement::Kind::kCircle:
      for (double r : p.radii) {
        const ViewSet circle = place_views_circle(src.input_pose, r, p.count);
        placed.views.AppendSynthetic(circle);
        placed.frames.insert(placed.frames.end(), circle.synthetic_count(), -1);
      }
      break;
    case Placement::Kind::kRoad: {
      const ViewSet road = place_views_road(condition_cloud, p.offsets, src.input_pose);
      placed.views.AppendSynthetic(road);
      placed.frames.insert(placed.frames.end(), road.synthetic_count(), -1);
      break;
    }
    case Placement::Kind::kTrajectory: {
      std::vector<RigidTransform> poses;
      for (int k = 0; k <= p.count; ++k) {
        poses.push_back(frame_pose(spec, src, spec.frame + k * p.stride));
      }
      const ViewSet traj = place_views_trajectory(poses, 0, 1, p.count);
      placed.views.AppendSynthetic(traj);
      for (int k = 1; k <= p.count; ++k) placed.frames.push_back(spec.frame + k * p.stride);
      break;
    }
  }

  if (!spec.view_order.empty()) {
    PlacedViews ordered;
    ordered.views.Add(placed.views.poses[0], placed.views.labels[0]);
    ordered.frames.push_back(placed.frames[0]);
    for (int k : spec.view_order) {
      if (k < 1 || static_cast<std::size_t>(k) >= placed.views.size()) {
        throw UsageError("view_order entry " + std::to_string(k) + " out of range");
      }
      ordered.views.Add(placed.views.poses[static_cast<std::size_t>(k)],
                        placed.views.labels[static_cast<std::size_t>(k)]);
      ordered.frames.push_back(placed.frames[static_cast<std::size_t>(k)]);
    }
    placed = std::move(ordered);
  }
  if (spec.max_views >= 0) {
    placed.views = placed.views.Truncated(static_cast<std::size_t>(spec.max_views));
    placed.frames.resize(placed.views.size());
  }
  return placed;
}

std::unique_ptr<Denoiser> make_denoiser(const TaskSpec& spec, const NoiseSchedule& schedule,
                                        std::vector<DenseImage> targets) {
  if (spec.denoiser == "oracle") {
    return std::make_unique<OracleDenoiser>(schedule, std::move(targets));
  }
  if (spec.denoiser == "zero") return std::make_unique<ZeroDenoiser>();
  if (spec.denoiser.rfind("remote:", 0) == 0) {
    return RemoteDenoiser::Connect(spec.denoiser.substr(7));
  }
  throw UsageError("unknown denoiser '" + spec.denoiser + "'");
}

Mask invert_mask(const Mask& m) {
  Mask out = m;
  for (auto& b : out.bits) b = b ? 0 : 1;
  return out;
}

std::optional<MetricReport> try_mae(const RangeImage& pred, const RangeImage& gt,
                                    const SensorModel& sensor, const Mask* region = nullptr) {
  try {
    return mae(pred, gt, sensor, region);
  } catch (const DataError&) {
    return std::nullopt;
  }
}

// Conditions every view from the view-0 condition, samples, and scores each
// view against its ground truth where one exists.
TaskResult run_conditioned(const TaskSpec& spec, const Source& src, const RangeImage& condition0,
                           const Mask& known0) {
  const SensorModel& sensor = spec.sensor;
  const PointCloud condition_cloud = backproject(condition0, sensor);
  const PlacedViews placed = place_views(spec, src, condition_cloud);
  const ViewSet& views = placed.views;

  std::vector<RangeImage> conditions{condition0};
  const auto recast_clouds = recast(condition_cloud, views);
  for (std::size_t k = 1; k < views.size(); ++k) {
    conditions.push_back(project(recast_clouds[k], sensor));
  }
  std::vector<Mask> masks;
  for (const auto& c : conditions) masks.push_back(c.ValidMask());

  std::vector<std::optional<RangeImage>> truths;
  for (std::size_t k = 0; k < views.size(); ++k) {
    truths.push_back(k == 0 ? std::optional<RangeImage>(src.input_image)
                            : ground_truth_at(spec, src, views.poses[k], placed.frames[k]));
  }

  const SamplerConfig config = spec.sampler.ToConfig();
  std::vector<RangeImage> outputs;
  if (spec.method != "diffusion") {
    InterpolationMethod m = spec.method == "nearest"    ? InterpolationMethod::kNearest
                            : spec.method == "bilinear" ? InterpolationMethod::kBilinear
                                                        : InterpolationMethod::kBicubic;
    outputs.push_back(interpolate_densify(condition0, m, sensor));
    for (std::size_t k = 1; k < views.size(); ++k) outputs.push_back(conditions[k]);
  } else {
    std::vector<DenseImage> targets;
    for (std::size_t k = 0; k < views.size(); ++k) {
      if (spec.oracle_target == "gt" && truths[k]) {
        targets.push_back(DenseImage::FromRangeImage(*truths[k]));
      } else {
        targets.push_back(observed_target(conditions[k], sensor));
      }
    }
    auto denoiser = make_denoiser(spec, config.schedule, std::move(targets));
    if (views.size() == 1) {
      outputs.push_back(sample_single(conditions[0], masks[0], sensor, *denoiser, config));
    } else {
      outputs = sample_simultaneous(conditions, masks, views, sensor, *denoiser, config);
    }
  }

  TaskResult result;
  result.task = spec.task;
  for (std::size_t k = 0; k < views.size(); ++k) {
    ViewResult v;
    v.label = views.labels[k];
    v.pose = views.poses[k];
    v.condition = conditions[k];
    v.output = outputs[k];
    v.ground_truth = truths[k];
    if (truths[k]) {
      v.full = try_mae(outputs[k], *truths[k], sensor);
      const Mask unknown = invert_mask(k == 0 ? known0 : masks[k]);
      v.masked = try_mae(outputs[k], *truths[k], sensor, &unknown);
    }
    result.views.push_back(std::move(v));
  }
  return result;
}

json report_json(const MetricReport& r) {
  return json{{"depth_mae", r.depth_mae},
              {"remission_mae", r.remission_mae},
              {"valid_pixel_count", r.valid_pixel_count},
              {"coverage_fraction", r.coverage_fraction}};
}

json score_json(const CompletionScore& s) {
  return json{{"accuracy", s.accuracy},
              {"completeness", s.completeness},
              {"f1", s.f1},
              {"tau", s.tau}};
}

void write_pgm(const std::filesystem::path& path, int height, int width,
               const std::vector<std::uint8_t>& pixels) {
  std::ostringstream header;
  header << "P5\n" << width << ' ' << height << "\n255\n";
  const std::string h = header.str();
  std::vector<std::uint8_t> bytes(h.begin(), h.end());
  bytes.insert(bytes.end(), pixels.begin(), pixels.end());
  write_file_bytes(path, bytes);
}

std::vector<std::uint8_t> channel_raster(const RangeImage& img, bool depth) {
  std::vector<std::uint8_t> px(img.pixel_count(), 0);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    if (!img.valid[i]) continue;
    const double v = depth ? img.depth[i] : img.remission[i];
    px[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 1.0) * 254.0 + 1.0);
  }
  return px;
}

void write_topdown(const std::filesystem::path& path, std::span<const Point3> points) {
  constexpr int kSize = 512;
  std::vector<std::uint8_t> px(static_cast<std::size_t>(kSize) * kSize, 0);
  if (!points.empty()) {
    double x0 = points[0].x(), x1 = x0, y0 = points[0].y(), y1 = y0;
    for (const auto& p : points) {
      x0 = std::min(x0, p.x());
      x1 = std::max(x1, p.x());
      y0 = std::min(y0, p.y());
      y1 = std::max(y1, p.y());
    }
    const double span = std::max({x1 - x0, y1 - y0, 1e-6});
    for (const auto& p : points) {
      const int col = std::min(kSize - 1, static_cast<int>((p.x() - x0) / span * (kSize - 1)));
      const int row = std::min(kSize - 1, static_cast<int>((y1 - p.y()) / span * (kSize - 1)));
      auto& v = px[static_cast<std::size_t>(row) * kSize + col];
      v = static_cast<std::uint8_t>(std::min(255, v + 64));
    }
  }
  write_pgm(path, kSize, kSize, px);
}

}  // namespace

// ---------------------------------------------------------------------------

TaskKind parse_task_kind(const std::string& name) {
  if (name == "densify") return TaskKind::kDensify;
  if (name == "inpaint") return TaskKind::kInpaint;
  if (name == "novel-view" || name == "novel_view") return TaskKind::kNovelView;
  if (name == "scene-complete" || name == "scene_complete") return TaskKind::kSceneComplete;
  if (name == "recast-eval" || name == "recast_eval") return TaskKind::kRecastEval;
  if (name == "sweep") return TaskKind::kSweep;
  throw UsageError("unknown task '" + name + "'");
}

std::string to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::kDensify: return "densify";
    case TaskKind::kInpaint: return "inpaint";
    case TaskKind::kNovelView: return "novel-view";
    case TaskKind::kSceneComplete: return "scene-complete";
    case TaskKind::kRecastEval: return "recast-eval";
    case TaskKind::kSweep: return "sweep";
  }
  return "unknown";
}

Placement Placement::Parse(const std::string& text) {
  Placement p;
  if (text.empty() || text == "none") return p;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  const auto parts = split(args, ',');
  if (kind == "circle" || kind == "circles") {
    if (parts.empty()) throw UsageError("placement '" + text + "' needs a radius");
    p.kind = Kind::kCircle;
    for (const auto& r : split(parts[0], '+')) p.radii.push_back(parse_double("radius", r));
    if (parts.size() > 1) p.count = parse_int("count", parts[1]);
    if (parts.size() > 2) throw UsageError("placement '" + text + "' has extra fields");
  } else if (kind == "road") {
    p.kind = Kind::kRoad;
    for (const auto& o : parts) p.offsets.push_back(parse_double("offset", o));
  } else if (kind == "trajectory") {
    p.kind = Kind::kTrajectory;
    if (parts.size() != 2) throw UsageError("trajectory placement is trajectory:<stride>,<count>");
    p.stride = parse_int("stride", parts[0]);
    p.count = parse_int("count", parts[1]);
  } else {
    throw UsageError("unknown placement '" + text + "'");
  }
  for (double r : p.radii) {
    if (!(r > 0.0)) throw UsageError("circle radius must be positive");
  }
  if (p.count < 0 || (p.kind == Kind::kCircle && p.count < 1)) {
    throw UsageError("placement count out of range");
  }
  if (p.stride < 0) throw UsageError("trajectory stride must be non-negative");
  return p;
}

std::string Placement::ToString() const {
  std::ostringstream s;
  switch (kind) {
    case Kind::kNone: return "none";
    case Kind::kCircle:
      s << "circle:";
      for (std::size_t i = 0; i < radii.size(); ++i) s << (i ? "+" : "") << radii[i];
      s << ',' << count;
      break;
    case Kind::kRoad:
      s << "road:";
      for (std::size_t i = 0; i < offsets.size(); ++i) s << (i ? "," : "") << offsets[i];
      break;
    case Kind::kTrajectory:
      s << "trajectory:" << stride << ',' << count;
      break;
  }
  return s.str();
}

SamplerConfig SamplerSettings::ToConfig() const {
  SamplerConfig c;
  c.omega = omega;
  c.delta = delta;
  c.master_seed = seed;
  c.stochastic = stochastic;
  c.consistency_zbuffer = consistency_zbuffer;
  c.condition_synthetic_views = condition_synthetic_views;
  c.noise_at_last_step = noise_at_last_step;
  double end = beta_end;
  double start = beta_start;
  if (end == 0.0) end = std::min(0.02 * 1000.0 / steps, 0.999);
  if (start == 0.0) start = std::min(1e-4 * 1000.0 / steps, end);
  c.schedule = schedule_linear(steps, start, end);
  c.Validate();
  return c;
}

void TaskSpec::Set(const std::string& raw_key, const std::string& value) {
  std::string key = raw_key;
  if (const auto dot = key.rfind('.'); dot != std::string::npos) key = key.substr(dot + 1);
  std::replace(key.begin(), key.end(), '-', '_');

  if (key == "height") sensor.height = parse_int(key, value);
  else if (key == "width") sensor.width = parse_int(key, value);
  else if (key == "fov_up") sensor.fov_up_deg = parse_double(key, value);
  else if (key == "fov_down") sensor.fov_down_deg = std::abs(parse_double(key, value));
  else if (key == "alpha") sensor.alpha = parse_double(key, value);
  else if (key == "min_range") sensor.min_range = parse_double(key, value);
  else if (key == "max_range") sensor.max_range = parse_double(key, value);
  else if (key == "omega") sampler.omega = parse_double(key, value);
  else if (key == "delta") sampler.delta = parse_delta(key, value);
  else if (key == "steps") sampler.steps = parse_int(key, value);
  else if (key == "beta_start") sampler.beta_start = parse_double(key, value);
  else if (key == "beta_end") sampler.beta_end = parse_double(key, value);
  else if (key == "seed") sampler.seed = static_cast<std::uint64_t>(parse_double(key, value));
  else if (key == "stochastic") sampler.stochastic = parse_bool(key, value);
  else if (key == "zbuffer") sampler.consistency_zbuffer = parse_bool(key, value);
  else if (key == "condition_synthetic") sampler.condition_synthetic_views = parse_bool(key, value);
  else if (key == "noise_last_step") sampler.noise_at_last_step = parse_bool(key, value);
  else if (key == "task") task = parse_task_kind(value);
  else if (key == "input") input = value;
  else if (key == "scene") scene = value;
  else if (key == "scene_seed") scene_seed = static_cast<std::uint64_t>(parse_double(key, value));
  else if (key == "poses") poses = value;
  else if (key == "scans") scans = value;
  else if (key == "gt_world") gt_world = value;
  else if (key == "frame") frame = parse_int(key, value);
  else if (key == "frame_spacing") frame_spacing = parse_double(key, value);
  else if (key == "beam_keep") beam_keep = parse_int(key, value);
  else if (key == "gap_center") gap_center_deg = parse_double(key, value);
  else if (key == "gap_width") gap_width_deg = parse_double(key, value);
  else if (key == "missing_fraction") gap_width_deg = 360.0 * parse_double(key, value);
  else if (key == "placement") placement = Placement::Parse(value);
  else if (key == "views") max_views = parse_int(key, value);
  else if (key == "view_order") {
    view_order.clear();
    for (const auto& k : split(value, ',')) view_order.push_back(parse_int(key, k));
  } else if (key == "method") method = value;
  else if (key == "denoiser") denoiser = value;
  else if (key == "oracle_target") oracle_target = value;
  else if (key == "tau") tau = parse_double(key, value);
  else if (key == "sweep_task") sweep_task = parse_task_kind(value);
  else if (key == "sweep_axis" || key == "axis") sweep_axis = value;
  else if (key == "sweep_values" || key == "values") sweep_values = split(value, ',');
  else throw UsageError("unknown setting '" + raw_key + "'");
}

TaskSpec TaskSpec::FromConfig(const ConfigMap& config) {
  TaskSpec spec;
  for (const auto& [key, value] : config) spec.Set(key, value);
  return spec;
}

void TaskSpec::Validate() const {
  sensor.Validate();
  if (!(sampler.omega >= 0.0 && sampler.omega <= 1.0)) throw UsageError("omega must lie in [0, 1]");
  if (!(sampler.delta > 0.0)) throw UsageError("delta must be positive or 'none'");
  if (sampler.steps < 1) throw UsageError("steps must be at least 1");
  if (beam_keep < 1) throw UsageError("beam_keep must be at least 1");
  if (!(gap_width_deg >= 0.0 && gap_width_deg < 360.0)) {
    throw UsageError("gap width must lie in [0, 360) degrees");
  }
  if (input.empty() == scene.empty()) {
    throw UsageError("exactly one of 'input' (scan file) or 'scene' (synthetic) is required");
  }
  if (method != "diffusion" && method != "nearest" && method != "bilinear" &&
      method != "bicubic") {
    throw UsageError("unknown method '" + method + "'");
  }
  if (method != "diffusion" && task != TaskKind::kDensify &&
      !(task == TaskKind::kSweep && sweep_task == TaskKind::kDensify)) {
    throw UsageError("interpolation methods apply to densify only");
  }
  if (denoiser != "oracle" && denoiser != "zero" && denoiser.rfind("remote:", 0) != 0) {
    throw UsageError("denoiser must be oracle, zero or remote:<endpoint>");
  }
  if (oracle_target != "gt" && oracle_target != "observed") {
    throw UsageError("oracle_target must be gt or observed");
  }
  if (!(tau > 0.0)) throw UsageError("tau must be positive");
  if (task == TaskKind::kSweep) {
    if (sweep_task == TaskKind::kSweep) throw UsageError("cannot sweep a sweep");
    if (sweep_axis != "omega" && sweep_axis != "delta" && sweep_axis != "views" &&
        sweep_axis != "placement") {
      throw UsageError("sweep axis must be omega, delta, views or placement");
    }
    if (sweep_values.empty()) throw UsageError("sweep needs at least one value");
  }
}

Mask beam_mask(const SensorModel& sensor, int keep) {
  if (keep < 1) throw UsageError("beam keep ratio must be at least 1");
  Mask m = Mask::Filled(sensor.height, sensor.width, false);
  for (int v = 0; v < sensor.height; v += keep) {
    std::fill_n(m.bits.begin() + static_cast<std::ptrdiff_t>(v) * sensor.width, sensor.width, 1);
  }
  return m;
}

Mask angular_gap_mask(const SensorModel& sensor, double center_deg, double width_deg) {
  if (!(width_deg >= 0.0 && width_deg < 360.0)) {
    throw UsageError("gap width must lie in [0, 360) degrees");
  }
  Mask m = Mask::Filled(sensor.height, sensor.width, true);
  const int w = sensor.width;
  const long missing = std::lround(width_deg / 360.0 * w);
  const double center_col = 0.5 * (1.0 - center_deg / 180.0) * w;
  const long start = std::lround(center_col - missing / 2.0);
  for (long c = 0; c < missing; ++c) {
    const int u = static_cast<int>(((start + c) % w + w) % w);
    for (int v = 0; v < sensor.height; ++v) m.bits[static_cast<std::size_t>(v) * w + u] = 0;
  }
  return m;
}

TaskResult run_densify(const TaskSpec& spec) {
  spec.Validate();
  const Source src = load_source(spec);
  const Mask known = beam_mask(spec.sensor, spec.beam_keep);
  const RangeImage condition = apply_condition_mask(src.input_image, known);
  TaskResult r = run_conditioned(spec, src, condition, known);
  r.task = TaskKind::kDensify;
  return r;
}

TaskResult run_inpaint(const TaskSpec& spec) {
  spec.Validate();
  const Source src = load_source(spec);
  const Mask known = angular_gap_mask(spec.sensor, spec.gap_center_deg, spec.gap_width_deg);
  const RangeImage condition = apply_condition_mask(src.input_image, known);
  TaskResult r = run_conditioned(spec, src, condition, known);
  r.task = TaskKind::kInpaint;
  return r;
}

TaskResult run_novel_view(const TaskSpec& spec) {
  spec.Validate();
  if (spec.placement.kind != Placement::Kind::kTrajectory) {
    throw UsageError("novel-view needs a trajectory placement");
  }
  if (spec.scene.empty() && (spec.poses.empty() || spec.scans.empty())) {
    throw UsageError("novel-view on real data needs 'poses' and 'scans'");
  }
  const Source src = load_source(spec);
  const Mask known = src.input_image.ValidMask();
  TaskResult r = run_conditioned(spec, src, src.input_image, known);
  r.task = TaskKind::kNovelView;
  return r;
}

TaskResult run_scene_complete(const TaskSpec& spec) {
  spec.Validate();
  const Source src = load_source(spec);
  WorldPointSet gt;
  if (src.scene) {
    gt = src.scene->SamplePoints(spec.tau / 2.0);
  } else {
    if (spec.gt_world.empty()) throw UsageError("scene-complete needs 'gt_world'");
    const PointCloud c = read_cloud_bin(spec.gt_world);
    gt.points = c.points;
    gt.remissions = c.remissions;
    gt.source_view.assign(c.size(), 0);
  }
  if (gt.empty()) throw DataError("scene-complete: ground truth is empty");

  const Mask known = src.input_image.ValidMask();
  TaskResult r = run_conditioned(spec, src, src.input_image, known);
  r.task = TaskKind::kSceneComplete;

  std::vector<PointCloud> clouds;
  std::vector<RigidTransform> poses;
  for (const auto& v : r.views) {
    clouds.push_back(backproject(v.output, spec.sensor));
    poses.push_back(v.pose);
  }
  r.world = merge_to_world(clouds, poses);
  if (r.world->empty()) throw DataError("scene-complete: generated no points");
  r.completion = completion_score(*r.world, gt, spec.tau);

  const PointCloud input_world = transform_cloud(src.input_pose, src.input_cloud);
  if (!input_world.empty()) {
    r.input_completion = completion_score(input_world.points, gt.points, spec.tau);
  }
  return r;
}

TaskResult run_recast_eval(const TaskSpec& spec) {
  spec.Validate();
  const Source src = load_source(spec);
  const PlacedViews placed = place_views(spec, src, src.input_cloud);
  const auto clouds = recast(src.input_cloud, placed.views);

  TaskResult r;
  r.task = TaskKind::kRecastEval;
  for (std::size_t k = 0; k < placed.views.size(); ++k) {
    ViewResult v;
    v.label = placed.views.labels[k];
    v.pose = placed.views.poses[k];
    v.condition = k == 0 ? src.input_image : project(clouds[k], spec.sensor);
    v.output = v.condition;
    v.ground_truth = k == 0 ? std::optional<RangeImage>(src.input_image)
                            : ground_truth_at(spec, src, v.pose, placed.frames[k]);
    if (v.ground_truth) v.full = try_mae(v.output, *v.ground_truth, spec.sensor);
    r.views.push_back(std::move(v));
  }
  return r;
}

TaskResult run_sweep(const TaskSpec& spec) {
  spec.Validate();
  TaskResult out;
  out.task = TaskKind::kSweep;
  out.sweep_axis = spec.sweep_axis;
  for (const auto& value : spec.sweep_values) {
    TaskSpec run = spec;
    run.task = spec.sweep_task;
    if (spec.sweep_axis == "omega") run.sampler.omega = parse_double("omega", value);
    else if (spec.sweep_axis == "delta") run.sampler.delta = parse_delta("delta", value);
    else if (spec.sweep_axis == "views") run.max_views = parse_int("views", value);
    else run.placement = Placement::Parse(value);

    const TaskResult r = run_task(run);
    SweepRow row;
    row.value = value;
    if (r.completion) {
      row.metrics.emplace_back("accuracy", r.completion->accuracy);
      row.metrics.emplace_back("completeness", r.completion->completeness);
      row.metrics.emplace_back("f1", r.completion->f1);
    } else if (run.task == TaskKind::kDensify || run.task == TaskKind::kInpaint) {
      const auto& v0 = r.views.front();
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.metrics.emplace_back("depth_mae", v0.masked ? v0.masked->depth_mae : nan);
      row.metrics.emplace_back("remission_mae", v0.masked ? v0.masked->remission_mae : nan);
      row.metrics.emplace_back("full_depth_mae", v0.full ? v0.full->depth_mae : nan);
      row.metrics.emplace_back("full_remission_mae", v0.full ? v0.full->remission_mae : nan);
    } else {
      for (std::size_t k = 1; k < r.views.size(); ++k) {
        const auto& v = r.views[k];
        if (!v.full) continue;
        row.metrics.emplace_back(v.label + ".depth_mae", v.full->depth_mae);
        row.metrics.emplace_back(v.label + ".remission_mae", v.full->remission_mae);
        if (run.task == TaskKind::kRecastEval) {
          row.metrics.emplace_back(v.label + ".coverage", v.full->coverage_fraction);
        }
      }
    }
    out.sweep.push_back(std::move(row));
  }
  return out;
}

TaskResult run_task(const TaskSpec& spec) {
  switch (spec.task) {
    case TaskKind::kDensify: return run_densify(spec);
    case TaskKind::kInpaint: return run_inpaint(spec);
    case TaskKind::kNovelView: return run_novel_view(spec);
    case TaskKind::kSceneComplete: return run_scene_complete(spec);
    case TaskKind::kRecastEval: return run_recast_eval(spec);
    case TaskKind::kSweep: return run_sweep(spec);
  }
  throw UsageError("unknown task");
}

std::string TaskResult::ToKeyValue() const {
  std::ostringstream out;
  out << "task=" << to_string(task) << '\n';
  for (std::size_t k = 0; k < views.size(); ++k) {
    const auto& v = views[k];
    const std::string p = "view." + std::to_string(k) + ".";
    out << p << "label=" << v.label << '\n';
    out << p << "condition_valid=" << v.condition.ValidCount() << '\n';
    out << p << "output_valid=" << v.output.ValidCount() << '\n';
    if (v.full) out << to_key_value(*v.full, p + "full.");
    if (v.masked) out << to_key_value(*v.masked, p + "masked.");
  }
  if (world) out << "world.points=" << world->size() << '\n';
  if (completion) out << to_key_value(*completion, "completion.");
  if (input_completion) out << to_key_value(*input_completion, "input_completion.");
  for (const auto& row : sweep) {
    for (const auto& [name, value] : row.metrics) {
      out << "sweep." << sweep_axis << '=' << row.value << '.' << name << '='
          << format_double(value) << '\n';
    }
  }
  return out.str();
}

std::string TaskResult::ToJson() const {
  json doc;
  doc["task"] = to_string(task);
  json jviews = json::array();
  for (const auto& v : views) {
    json jv{{"label", v.label},
            {"condition_valid", v.condition.ValidCount()},
            {"output_valid", v.output.ValidCount()}};
    if (v.full) jv["full"] = report_json(*v.full);
    if (v.masked) jv["masked"] = report_json(*v.masked);
    jviews.push_back(std::move(jv));
  }
  doc["views"] = std::move(jviews);
  if (world) doc["world_points"] = world->size();
  if (completion) doc["completion"] = score_json(*completion);
  if (input_completion) doc["input_completion"] = score_json(*input_completion);
  if (!sweep.empty()) {
    json rows = json::array();
    for (const auto& row : sweep) {
      json jr{{sweep_axis, row.value}};
      for (const auto& [name, value] : row.metrics) {
        jr[name] = std::isnan(value) ? json(nullptr) : json(value);
      }
      rows.push_back(std::move(jr));
    }
    doc["sweep"] = std::move(rows);
  }
  return doc.dump(2) + "\n";
}

std::string TaskResult::SweepTable() const {
  if (sweep.empty()) return {};
  std::vector<std::string> columns;
  for (const auto& row : sweep) {
    for (const auto& m : row.metrics) {
      if (std::find(columns.begin(), columns.end(), m.first) == columns.end()) {
        columns.push_back(m.first);
      }
    }
  }
  std::ostringstream out;
  char cell[64];
  std::snprintf(cell, sizeof(cell), "%-12s", sweep_axis.c_str());
  out << cell;
  for (const auto& c : columns) {
    std::snprintf(cell, sizeof(cell), " %16s", c.c_str());
    out << cell;
  }
  out << '\n';
  for (const auto& row : sweep) {
    std::snprintf(cell, sizeof(cell), "%-12s", row.value.c_str());
    out << cell;
    for (const auto& c : columns) {
      auto it = std::find_if(row.metrics.begin(), row.metrics.end(),
                             [&](const auto& m) { return m.first == c; });
      if (it == row.metrics.end() || std::isnan(it->second)) {
        std::snprintf(cell, sizeof(cell), " %16s", "-");
      } else {
        std::snprintf(cell, sizeof(cell), " %16.4f", it->second);
      }
      out << cell;
    }
    out << '\n';
  }
  return out.str();
}

std::string TaskResult::SweepCsv() const {
  if (sweep.empty()) return {};
  std::ostringstream out;
  out << sweep_axis;
  std::vector<std::string> columns;
  for (const auto& row : sweep) {
    for (const auto& m : row.metrics) {
      if (std::find(columns.begin(), columns.end(), m.first) == columns.end()) {
        columns.push_back(m.first);
      }
    }
  }
  for (const auto& c : columns) out << ',' << c;
  out << '\n';
  out.precision(10);
  for (const auto& row : sweep) {
    out << row.value;
    for (const auto& c : columns) {
      auto it = std::find_if(row.metrics.begin(), row.metrics.end(),
                             [&](const auto& m) { return m.first == c; });
      out << ',';
      if (it != row.metrics.end() && !std::isnan(it->second)) out << it->second;
    }
    out << '\n';
  }
  return out.str();
}

void render_outputs(const TaskResult& result, const SensorModel& sensor,
                    const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create " + out_dir.string() + ": " + ec.message());

  auto write_text = [&](const std::string& name, const std::string& text) {
    write_file_bytes(out_dir / name, std::vector<std::uint8_t>(text.begin(), text.end()));
  };
  write_text("report.txt", result.ToKeyValue());
  write_text("report.json", result.ToJson());
  if (!result.sweep.empty()) {
    write_text("sweep.txt", result.SweepTable());
    write_text("sweep.csv", result.SweepCsv());
  }

  for (std::size_t k = 0; k < result.views.size(); ++k) {
    const auto& v = result.views[k];
    const std::string p = "view" + std::to_string(k) + "_";
    write_range_image(v.output, out_dir / (p + "output.sdri"));
    write_range_image(v.condition, out_dir / (p + "condition.sdri"));
    write_pgm(out_dir / (p + "depth.pgm"), v.output.height, v.output.width,
              channel_raster(v.output, true));
    write_pgm(out_dir / (p + "remission.pgm"), v.output.height, v.output.width,
              channel_raster(v.output, false));
    const PointCloud cloud = backproject(v.output, sensor);
    write_cloud_bin(cloud, out_dir / (p + "output.bin"));
  }
  if (result.world) {
    PointCloud c;
    c.points = result.world->points;
    c.remissions = result.world->remissions;
    write_cloud_bin(c, out_dir / "world.bin");
    write_topdown(out_dir / "world_topdown.pgm", result.world->points);
  }
}

}  // namespace simdiff
