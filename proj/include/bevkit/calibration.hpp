// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>

namespace bevkit {

// Sensor-to-camera calibration in the KITTI text layout: a rigid transform
// from the scanner frame into the reference camera frame, a rectifying
// rotation, and the projection of the rectified frame onto the left color
// image. Calib files carry no image size, so width/height default to the
// usual 1242 x 375 and may be overridden by an image_size line.
struct Calibration {
  Eigen::Matrix<double, 3, 4> velo_to_cam = Eigen::Matrix<double, 3, 4>::Zero();
  Eigen::Matrix3d rect = Eigen::Matrix3d::Identity();
  Eigen::Matrix<double, 3, 4> projection = Eigen::Matrix<double, 3, 4>::Zero();
  int image_width = 1242;
  int image_height = 375;

  // Checks that both rotation blocks are orthonormal within 1e-6 and the
  // image size is positive.
  void validate() const;

  Eigen::Vector3d sensor_to_rect(const Eigen::Vector3d& p) const;
  Eigen::Vector3d rect_to_sensor(const Eigen::Vector3d& p) const;

  struct ImagePoint {
    double u = 0.0;
    double v = 0.0;
    double depth = 0.0;  // rectified-camera z, meters
  };

  // Projects a sensor-frame point onto the image plane. Points at or behind
  // the camera plane get depth <= 0 and meaningless pixel coordinates.
  ImagePoint project(const Eigen::Vector3d& sensor_point) const;

  bool in_image(const ImagePoint& p) const;
};

// Parses the key-matrix text form. P2, R0_rect and Tr_velo_to_cam are
// required; unknown keys are ignored; an image_size line overrides the
// default dimensions. Throws ParseError on malformed input.
Calibration parse_calibration(const std::string& text);

std::string write_calibration(const Calibration& calib);

Calibration load_calibration(const std::filesystem::path& path);
void save_calibration(const Calibration& calib, const std::filesystem::path& path);

// Fixed camera rig used when no per-frame calibration exists: camera looking
// along +x of the sensor, focal length and image size of the usual road rig.
Calibration default_calibration();

}  // namespace bevkit
