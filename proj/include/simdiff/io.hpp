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

#ifndef SIMDIFF_IO_HPP_
#define SIMDIFF_IO_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "simdiff/geometry.hpp"
#include "simdiff/projection.hpp"

namespace simdiff {

// KITTI velodyne layout: float32 LE (x, y, z, reflectance) records, with
// reflectance in [0, 1]. Remission is scaled to [0, 255] on read.
PointCloud read_cloud_bin(const std::filesystem::path& path);
void write_cloud_bin(const PointCloud& cloud, const std::filesystem::path& path);

struct PoseRecord {
  int frame_index = 0;
  RigidTransform world_from_sensor;
};

// One record per line: frame index followed by a row-major 3x4 [R|t].
// Blank lines and lines starting with '#' are skipped.
std::vector<PoseRecord> read_poses(const std::filesystem::path& path);
std::vector<PoseRecord> parse_poses(const std::string& text);
void write_poses(const std::vector<PoseRecord>& poses, const std::filesystem::path& path);
std::optional<RigidTransform> find_pose(const std::vector<PoseRecord>& poses, int frame);

// SDRI container: "SDRI", u16 version, u16 height, u16 width, u16 reserved,
// depth plane, remission plane (float32 LE), validity bitmap (row-major,
// LSB-first, byte-padded).
inline constexpr std::uint16_t kRangeImageVersion = 1;
void write_range_image(const RangeImage& image, const std::filesystem::path& path);
RangeImage read_range_image(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_range_image(const RangeImage& image);
RangeImage decode_range_image(const std::vector<std::uint8_t>& bytes);

// Flat key=value text with optional [section] headers. Keys are returned as
// "section.key" (or "key" before any section).
using ConfigMap = std::map<std::string, std::string>;
ConfigMap parse_config(const std::string& text);
ConfigMap read_config(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

}  // namespace simdiff

#endif  // SIMDIFF_IO_HPP_
