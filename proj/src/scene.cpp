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

#include "simdiff/scene.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "simdiff/error.hpp"

namespace simdiff {
namespace {

// Indices of the two in-plane axes of a quad.
constexpr int kInPlane[3][2] = {{1, 2}, {0, 2}, {0, 1}};

Quad make_quad(int axis, double offset, double lo0, double hi0, double lo1, double hi1,
               double remission) {
  Quad q;
  q.axis = axis;
  q.offset = offset;
  q.lo[0] = lo0;
  q.hi[0] = hi0;
  q.lo[1] = lo1;
  q.hi[1] = hi1;
  q.remission = remission;
  return q;
}

}  // namespace

SceneKind parse_scene_kind(const std::string& name) {
  if (name == "room") return SceneKind::kRoom;
  if (name == "corridor") return SceneKind::kCorridor;
  if (name == "occluders") return SceneKind::kOccluders;
  throw UsageError("unknown synthetic scene '" + name + "' (room|corridor|occluders)");
}

std::string to_string(SceneKind kind) {
  switch (kind) {
    case SceneKind::kRoom: return "room";
    case SceneKind::kCorridor: return "corridor";
    case SceneKind::kOccluders: return "occluders";
  }
  return "unknown";
}

void SyntheticScene::AddBox(double x0, double x1, double y0, double y1, double height,
                            double remission) {
  const double z0 = kGroundZ;
  const double z1 = kGroundZ + height;
  quads_.push_back(make_quad(2, z1, x0, x1, y0, y1, remission));
  quads_.push_back(make_quad(0, x0, y0, y1, z0, z1, remission));
  quads_.push_back(make_quad(0, x1, y0, y1, z0, z1, remission));
  quads_.push_back(make_quad(1, y0, x0, x1, z0, z1, remission));
  quads_.push_back(make_quad(1, y1, x0, x1, z0, z1, remission));
}

SyntheticScene::SyntheticScene(SceneKind kind, std::uint64_t seed) : kind_(kind) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  switch (kind) {
    case SceneKind::kRoom: {
      // 20 x 10 m room, 3 m high.
      const double x0 = -10.0, x1 = 10.0, y0 = -5.0, y1 = 5.0;
      const double z0 = kGroundZ, z1 = kGroundZ + 3.0;
      quads_.push_back(make_quad(2, z0, x0, x1, y0, y1, 60.0));
      quads_.push_back(make_quad(2, z1, x0, x1, y0, y1, 90.0));
      quads_.push_back(make_quad(0, x0, y0, y1, z0, z1, 120.0));
      quads_.push_back(make_quad(0, x1, y0, y1, z0, z1, 130.0));
      quads_.push_back(make_quad(1, y0, x0, x1, z0, z1, 140.0));
      quads_.push_back(make_quad(1, y1, x0, x1, z0, z1, 150.0));
      // Two boxes, kept clear of the central 6 x 6 m area.
      for (int placed = 0; placed < 2;) {
        const double sx = uniform(0.8, 1.5), sy = uniform(0.8, 1.5), h = uniform(0.7, 1.2);
        const double cx = uniform(-8.0, 8.0), cy = uniform(-3.8, 3.8);
        if (std::abs(cx) < 3.0 + sx && std::abs(cy) < 3.0 + sy) continue;
        AddBox(cx - sx / 2, cx + sx / 2, cy - sy / 2, cy + sy / 2, h, uniform(170.0, 230.0));
        ++placed;
      }
      break;
    }
    case SceneKind::kCorridor: {
      // 200 m straight corridor along x, 6 m wide, open to the sky.
      const double x0 = -100.0, x1 = 100.0, half = 3.0;
      const double z0 = kGroundZ, z1 = kGroundZ + 4.0;
      quads_.push_back(make_quad(2, z0, x0, x1, -half, half, 60.0));
      quads_.push_back(make_quad(1, -half, x0, x1, z0, z1, 140.0));
      quads_.push_back(make_quad(1, half, x0, x1, z0, z1, 150.0));
      // Pillars against the walls.
      for (double x = -96.0; x < 96.0; x += uniform(8.0, 16.0)) {
        const double side = uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
        const double depth = uniform(0.4, 0.9);
        const double y_in = side * (half - depth);
        AddBox(x, x + uniform(0.5, 1.2), std::min(y_in, side * half),
               std::max(y_in, side * half), uniform(1.0, 3.0), uniform(170.0, 230.0));
      }
      break;
    }
    case SceneKind::kOccluders: {
      // Open 120 x 120 m yard with boundary walls and scattered boxes. A strip
      // along +x (x in [-3, 35], |y| < 3) stays free for synthetic views.
      const double lim = 60.0;
      const double z0 = kGroundZ, z1 = kGroundZ + 6.0;
      quads_.push_back(make_quad(2, z0, -lim, lim, -lim, lim, 60.0));
      quads_.push_back(make_quad(0, -lim, -lim, lim, z0, z1, 120.0));
      quads_.push_back(make_quad(0, lim, -lim, lim, z0, z1, 130.0));
      quads_.push_back(make_quad(1, -lim, -lim, lim, z0, z1, 140.0));
      quads_.push_back(make_quad(1, lim, -lim, lim, z0, z1, 150.0));
      for (int placed = 0; placed < 40;) {
        const double sx = uniform(1.5, 4.0), sy = uniform(1.5, 4.0), h = uniform(1.5, 3.5);
        const double cx = uniform(-40.0, 40.0), cy = uniform(-40.0, 40.0);
        const bool blocks_strip = cx + sx / 2 > -3.0 - 1.0 && cx - sx / 2 < 35.0 + 1.0 &&
                                  std::abs(cy) - sy / 2 < 3.0 + 1.0;
        if (blocks_strip) continue;
        AddBox(cx - sx / 2, cx + sx / 2, cy - sy / 2, cy + sy / 2, h, uniform(170.0, 230.0));
        ++placed;
      }
      break;
    }
  }
}

std::optional<RayHit> SyntheticScene::Raycast(const Point3& origin,
                                              const Point3& unit_dir) const {
  double best = std::numeric_limits<double>::infinity();
  double remission = 0.0;
  for (const Quad& q : quads_) {
    const double dir = unit_dir[q.axis];
    if (dir == 0.0) continue;
    const double t = (q.offset - origin[q.axis]) / dir;
    if (!(t > 1e-9) || t >= best) continue;
    const int a = kInPlane[q.axis][0];
    const int b = kInPlane[q.axis][1];
    const double pa = origin[a] + t * unit_dir[a];
    const double pb = origin[b] + t * unit_dir[b];
    if (pa < q.lo[0] || pa > q.hi[0] || pb < q.lo[1] || pb > q.hi[1]) continue;
    best = t;
    remission = q.remission;
  }
  if (!std::isfinite(best)) return std::nullopt;
  return RayHit{best, remission};
}

RangeImage SyntheticScene::Render(const RigidTransform& world_from_sensor,
                                  const SensorModel& sensor) const {
  sensor.Validate();
  RangeImage img = RangeImage::Empty(sensor.height, sensor.width);
  for (int v = 0; v < sensor.height; ++v) {
    for (int u = 0; u < sensor.width; ++u) {
      const std::size_t i = img.index(v, u);
      if (sensor.IsDead(i)) continue;
      const Point3 dir = world_from_sensor.rotation() * sensor.RayDirection(v, u);
      const auto hit = Raycast(world_from_sensor.translation(), dir);
      if (!hit || !sensor.InRange(hit->distance)) continue;
      img.Set(i, static_cast<float>(sensor.NormalizeDepth(hit->distance)),
              static_cast<float>(hit->remission / 255.0));
    }
  }
  return img;
}

WorldPointSet SyntheticScene::SamplePoints(double spacing) const {
  if (!(spacing > 0.0)) throw UsageError("sample spacing must be positive");
  WorldPointSet out;
  for (const Quad& q : quads_) {
    const int a = kInPlane[q.axis][0];
    const int b = kInPlane[q.axis][1];
    const int na = std::max(1, static_cast<int>(std::floor((q.hi[0] - q.lo[0]) / spacing)));
    const int nb = std::max(1, static_cast<int>(std::floor((q.hi[1] - q.lo[1]) / spacing)));
    const double step_a = (q.hi[0] - q.lo[0]) / na;
    const double step_b = (q.hi[1] - q.lo[1]) / nb;
    for (int i = 0; i < na; ++i) {
      for (int j = 0; j < nb; ++j) {
        Point3 p;
        p[q.axis] = q.offset;
        p[a] = q.lo[0] + (i + 0.5) * step_a;
        p[b] = q.lo[1] + (j + 0.5) * step_b;
        out.points.push_back(p);
        out.remissions.push_back(q.remission);
        out.source_view.push_back(0);
      }
    }
  }
  return out;
}

}  // namespace simdiff
