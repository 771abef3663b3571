// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bevkit/calibration.hpp"
#include "bevkit/geometry.hpp"

namespace bevkit {

struct ImageBox2D {
  double left = 0.0;
  double top = 0.0;
  double right = 0.0;
  double bottom = 0.0;

  double height() const { return bottom - top; }
  double width() const { return right - left; }
  double area() const { return height() * width(); }
};

// An annotated car. The box lives in the sensor ground plane (canonical
// form); z_center and z_height recover the vertical extent. The 2D image
// box, occlusion and truncation feed the difficulty rules.
struct GroundTruthObject {
  RotatedBox box;
  double z_center = 0.0;
  double z_height = 0.0;
  ImageBox2D bbox2d;
  int occlusion = 0;       // 0 visible .. 3 unknown
  double truncation = 0.0; // fraction of the object outside the image
  double alpha = 0.0;      // observation angle, radians

  double bbox2d_height() const { return bbox2d.height(); }
};

struct LabelFile {
  std::vector<GroundTruthObject> cars;
  std::vector<ImageBox2D> dont_care;
};

// Reads KITTI-style object label text. Camera-frame poses are converted to
// the sensor frame through the calibration; the label location is the bottom
// center of the object. Only Car entries populate cars; DontCare regions are
// kept separately; all other classes are dropped. Throws ParseError with the
// line number on malformed lines.
LabelFile parse_labels(const std::string& text, const Calibration& calib);

// Writes cars (then DontCare regions) back in the camera-frame text layout.
// Formatting is fixed so write -> parse -> write reproduces bytes exactly.
std::string write_labels(const LabelFile& labels, const Calibration& calib);

LabelFile load_labels(const std::filesystem::path& path, const Calibration& calib);
void save_labels(const LabelFile& labels, const Calibration& calib,
                 const std::filesystem::path& path);

}  // namespace bevkit
