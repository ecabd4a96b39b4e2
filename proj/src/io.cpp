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

#include "simdiff/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "simdiff/error.hpp"

namespace simdiff {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

class ByteWriter {
 public:
  void U16(std::uint16_t v) { Raw(&v, 2); }
  void F32(float v) { Raw(&v, 4); }
  void Bytes(const void* p, std::size_t n) { Raw(p, n); }
  std::vector<std::uint8_t> Take() { return std::move(out_); }

 private:
  void Raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  std::vector<std::uint8_t> out_;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::filesystem::path& path,
                      const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

PointCloud read_cloud_bin(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  if (bytes.size() % 16 != 0) {
    throw DataError(path.string() + ": size " + std::to_string(bytes.size()) +
                    " is not a multiple of 16 bytes");
  }
  PointCloud cloud;
  cloud.frame_id = path.stem().string();
  const std::size_t n = bytes.size() / 16;
  cloud.points.reserve(n);
  cloud.remissions.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    float rec[4];
    std::memcpy(rec, bytes.data() + 16 * j, 16);
    for (float v : rec) {
      if (!std::isfinite(v)) {
        throw DataError(path.string() + ": non-finite value in point " + std::to_string(j));
      }
    }
    if (rec[3] < 0.0f || rec[3] > 1.0f) {
      throw DataError(path.string() + ": reflectance outside [0, 1] in point " +
                      std::to_string(j));
    }
    cloud.Add(Point3(rec[0], rec[1], rec[2]), rec[3] * 255.0);
  }
  return cloud;
}

void write_cloud_bin(const PointCloud& cloud, const std::filesystem::path& path) {
  cloud.Validate();
  ByteWriter w;
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    w.F32(static_cast<float>(cloud.points[j].x()));
    w.F32(static_cast<float>(cloud.points[j].y()));
    w.F32(static_cast<float>(cloud.points[j].z()));
    w.F32(static_cast<float>(cloud.remissions[j] / 255.0));
  }
  write_file_bytes(path, w.Take());
}

std::vector<PoseRecord> parse_poses(const std::string& text) {
  std::vector<PoseRecord> poses;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream fields(t);
    long frame = 0;
    double v[12];
    const auto where = "pose line " + std::to_string(line_no);
    if (!(fields >> frame) || frame < 0) throw DataError(where + ": bad frame index");
    for (double& x : v) {
      if (!(fields >> x) || !std::isfinite(x)) {
        throw DataError(where + ": expected 12 finite numbers after the frame index");
      }
    }
    std::string extra;
    if (fields >> extra) throw DataError(where + ": trailing field '" + extra + "'");
    Matrix3 r;
    r << v[0], v[1], v[2], v[4], v[5], v[6], v[8], v[9], v[10];
    try {
      poses.push_back({static_cast<int>(frame), RigidTransform(r, Point3(v[3], v[7], v[11]), 1e-6)});
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return poses;
}

std::vector<PoseRecord> read_poses(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return parse_poses(std::string(bytes.begin(), bytes.end()));
}

void write_poses(const std::vector<PoseRecord>& poses, const std::filesystem::path& path) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& p : poses) {
    const Matrix3& r = p.world_from_sensor.rotation();
    const Point3& t = p.world_from_sensor.translation();
    out << p.frame_index;
    for (int i = 0; i < 3; ++i) out << ' ' << r(i, 0) << ' ' << r(i, 1) << ' ' << r(i, 2) << ' ' << t(i);
    out << '\n';
  }
  const std::string s = out.str();
  write_file_bytes(path, std::vector<std::uint8_t>(s.begin(), s.end()));
}

std::optional<RigidTransform> find_pose(const std::vector<PoseRecord>& poses, int frame) {
  for (const auto& p : poses) {
    if (p.frame_index == frame) return p.world_from_sensor;
  }
  return std::nullopt;
}

std::vector<std::uint8_t> encode_range_image(const RangeImage& image) {
  if (image.height < 1 || image.width < 1 || image.height > 65535 || image.width > 65535) {
    throw UsageError("range image dimensions do not fit the container");
  }
  ByteWriter w;
  w.Bytes("SDRI", 4);
  w.U16(kRangeImageVersion);
  w.U16(static_cast<std::uint16_t>(image.height));
  w.U16(static_cast<std::uint16_t>(image.width));
  w.U16(0);
  w.Bytes(image.depth.data(), image.depth.size() * sizeof(float));
  w.Bytes(image.remission.data(), image.remission.size() * sizeof(float));
  std::vector<std::uint8_t> bitmap((image.pixel_count() + 7) / 8, 0);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    if (image.valid[i]) bitmap[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  w.Bytes(bitmap.data(), bitmap.size());
  return w.Take();
}

RangeImage decode_range_image(const std::vector<std::uint8_t>& bytes) {
  constexpr std::size_t kHeader = 12;
  if (bytes.size() < kHeader) throw DataError("range image: truncated header");
  if (std::memcmp(bytes.data(), "SDRI", 4) != 0) throw DataError("range image: bad magic");
  std::uint16_t version, h, w;
  std::memcpy(&version, bytes.data() + 4, 2);
  std::memcpy(&h, bytes.data() + 6, 2);
  std::memcpy(&w, bytes.data() + 8, 2);
  if (version != kRangeImageVersion) {
    throw DataError("range image: unsupported version " + std::to_string(version));
  }
  if (h == 0 || w == 0) throw DataError("range image: zero dimension");
  RangeImage img = RangeImage::Empty(h, w);
  const std::size_t n = img.pixel_count();
  const std::size_t expected = kHeader + 2 * n * sizeof(float) + (n + 7) / 8;
  if (bytes.size() != expected) {
    throw DataError("range image: expected " + std::to_string(expected) + " bytes, got " +
                    std::to_string(bytes.size()));
  }
  const std::uint8_t* p = bytes.data() + kHeader;
  std::memcpy(img.depth.data(), p, n * sizeof(float));
  p += n * sizeof(float);
  std::memcpy(img.remission.data(), p, n * sizeof(float));
  p += n * sizeof(float);
  for (std::size_t i = 0; i < n; ++i) img.valid[i] = (p[i / 8] >> (i % 8)) & 1u;
  return img;
}

void write_range_image(const RangeImage& image, const std::filesystem::path& path) {
  write_file_bytes(path, encode_range_image(image));
}

RangeImage read_range_image(const std::filesystem::path& path) {
  try {
    return decode_range_image(read_file_bytes(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

ConfigMap parse_config(const std::string& text) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) {
        throw DataError("config line " + std::to_string(line_no) + ": malformed section");
      }
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw DataError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw DataError("config line " + std::to_string(line_no) + ": empty key");
    out[section.empty() ? key : section + "." + key] = trim(t.substr(eq + 1));
  }
  return out;
}

ConfigMap read_config(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return parse_config(std::string(bytes.begin(), bytes.end()));
}

}  // namespace simdiff
