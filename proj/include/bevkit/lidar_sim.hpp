// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bevkit/calibration.hpp"
#include "bevkit/labels.hpp"
#include "bevkit/point_cloud.hpp"

namespace bevkit {

// Spinning scanner model: a regular angular grid of rays from the origin.
// Defaults match a 64-beam roof scanner limited to the forward camera wedge.
struct SensorModel {
  double horizontal_resolution_deg = 0.09;
  double vertical_resolution_deg = 0.4;
  double vertical_fov_min_deg = -23.2;
  double vertical_fov_max_deg = 2.0;
  double horizontal_fov_min_deg = -45.0;
  double horizontal_fov_max_deg = 45.0;
  double mount_height = 1.73;  // sensor origin above ground, meters
  double max_range = 120.0;
  double range_noise_sigma = 0.0;  // meters, 0 disables noise

  void validate() const;
  int beam_count() const;     // elevation steps, inclusive of both ends
  int azimuth_count() const;  // azimuth steps, inclusive of both ends
};

// Axis-aligned-when-unrotated box in the sensor frame (z up, origin at the
// scanner). Rotation is yaw about +z around the center.
struct Cuboid {
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0;
  double length = 0.0;  // x extent at yaw 0
  double width = 0.0;   // y extent at yaw 0
  double height = 0.0;  // z extent
  double yaw_deg = 0.0;
  double reflectance = 0.5;
};

struct Scene {
  std::vector<Cuboid> cuboids;
  bool has_ground = false;
  double ground_z = -1.73;
  double ground_reflectance = 0.2;
};

// Scene text format: one directive per line, '#' starts a comment.
//   ground <z> <reflectance>
//   box <cx> <cy> <cz> <length> <width> <height> <yaw_deg> <reflectance>
Scene parse_scene(const std::string& text);
std::string write_scene(const Scene& scene);
Scene load_scene(const std::filesystem::path& path);

struct ScanResult {
  PointCloud cloud;
  std::vector<GroundTruthObject> objects;  // one per cuboid, in scene order
};

// Casts the full angular grid and keeps the nearest surface hit per ray.
// Rays run elevation-major, azimuth-minor, both ascending, so output order
// is reproducible. With range_noise_sigma > 0, each hit distance gets
// Gaussian noise from the seeded generator; equal seeds give equal clouds.
// Ground-truth entries derive their image box from label_calib (the fixed
// default rig when omitted).
ScanResult simulate_scan(const Scene& scene, const SensorModel& sensor,
                         std::uint64_t seed = 0,
                         const Calibration* label_calib = nullptr);

// Point spacing inside one box footprint: distances between returns on
// angularly adjacent rays, split into same-ring (horizontal) and same-column
// (vertical) pairs. The sensor model supplies the angular grid for
// adjacency.
struct SpacingStats {
  std::size_t point_count = 0;
  std::optional<double> median_horizontal_gap;
  std::optional<double> median_vertical_gap;
};

SpacingStats spacing_stats(const PointCloud& cloud, const RotatedBox& box,
                           const SensorModel& sensor = {});

}  // namespace bevkit
