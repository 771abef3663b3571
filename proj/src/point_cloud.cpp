// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/point_cloud.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {

constexpr std::size_t kRecordSize = 16;  // 4 x float32

float read_f32le(const std::uint8_t* p) {
  std::uint32_t u = std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
                    std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
  return std::bit_cast<float>(u);
}

void write_f32le(float v, std::vector<std::uint8_t>& out) {
  const std::uint32_t u = std::bit_cast<std::uint32_t>(v);
  out.push_back(std::uint8_t(u & 0xff));
  out.push_back(std::uint8_t((u >> 8) & 0xff));
  out.push_back(std::uint8_t((u >> 16) & 0xff));
  out.push_back(std::uint8_t((u >> 24) & 0xff));
}

}  // namespace

void CropBounds::validate() const {
  if (!(x_min < x_max && y_min < y_max && z_min < z_max)) {
    throw ConfigError("crop bounds must have min < max on every axis");
  }
}

bool CropBounds::contains(const Point& p) const {
  return p.x >= x_min && p.x < x_max && p.y >= y_min && p.y < y_max &&
         p.z >= z_min && p.z < z_max;
}

PointCloud crop_filter(const PointCloud& cloud, const CropBounds& bounds) {
  bounds.validate();
  PointCloud out;
  out.frame_id = cloud.frame_id;
  out.points.reserve(cloud.points.size());
  for (const Point& p : cloud.points) {
    if (bounds.contains(p)) out.points.push_back(p);
  }
  return out;
}

PointCloud read_point_cloud(std::span<const std::uint8_t> bytes,
                            std::size_t* dropped) {
  if (bytes.size() % kRecordSize != 0) {
    const std::size_t offset = (bytes.size() / kRecordSize) * kRecordSize;
    throw ParseError("truncated point record at byte offset " +
                     std::to_string(offset));
  }
  PointCloud cloud;
  cloud.points.reserve(bytes.size() / kRecordSize);
  std::size_t skipped = 0;
  for (std::size_t off = 0; off < bytes.size(); off += kRecordSize) {
    Point p;
    p.x = read_f32le(bytes.data() + off);
    p.y = read_f32le(bytes.data() + off + 4);
    p.z = read_f32le(bytes.data() + off + 8);
    p.intensity = read_f32le(bytes.data() + off + 12);
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z) ||
        !std::isfinite(p.intensity)) {
      ++skipped;
      continue;
    }
    cloud.points.push_back(p);
  }
  if (dropped) *dropped = skipped;
  return cloud;
}

std::vector<std::uint8_t> write_point_cloud(const PointCloud& cloud) {
  std::vector<std::uint8_t> out;
  out.reserve(cloud.points.size() * kRecordSize);
  for (const Point& p : cloud.points) {
    write_f32le(p.x, out);
    write_f32le(p.y, out);
    write_f32le(p.z, out);
    write_f32le(p.intensity, out);
  }
  return out;
}

PointCloud load_point_cloud(const std::filesystem::path& path,
                            std::size_t* dropped) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open point cloud file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    PointCloud cloud = read_point_cloud(bytes, dropped);
    cloud.frame_id = path.stem().string();
    return cloud;
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_point_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = write_point_cloud(cloud);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write point cloud file: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            std::streamsize(bytes.size()));
  if (!out) throw DataError("short write to " + path.string());
}

}  // namespace bevkit
