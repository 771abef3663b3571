// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace bevkit {

// One return: sensor-frame position plus reflectance in [0, 1]. Fields stay
// float so that read -> write reproduces input bytes exactly.
struct Point {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;
  float intensity = 0.0f;
};

struct PointCloud {
  std::string frame_id;
  std::vector<Point> points;
};

// Half-open crop volume [x_min,x_max) x [y_min,y_max) x [z_min,z_max).
// Defaults cover the forward detection area: 70 m ahead, 35 m to each side,
// and a 3 m vertical band starting at the ground under the sensor.
struct CropBounds {
  double x_min = 0.0;
  double x_max = 70.0;
  double y_min = -35.0;
  double y_max = 35.0;
  double z_min = -1.73;
  double z_max = 1.27;

  void validate() const;
  bool contains(const Point& p) const;
};

PointCloud crop_filter(const PointCloud& cloud, const CropBounds& bounds);

// Decodes packed little-endian float32 quadruples (x, y, z, intensity).
// A trailing partial record raises ParseError naming the byte offset where
// it starts. Records with any non-finite field are dropped; *dropped, when
// given, receives their count.
PointCloud read_point_cloud(std::span<const std::uint8_t> bytes,
                            std::size_t* dropped = nullptr);

std::vector<std::uint8_t> write_point_cloud(const PointCloud& cloud);

PointCloud load_point_cloud(const std::filesystem::path& path,
                            std::size_t* dropped = nullptr);
void save_point_cloud(const PointCloud& cloud, const std::filesystem::path& path);

}  // namespace bevkit
