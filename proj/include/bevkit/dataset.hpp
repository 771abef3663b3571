// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bevkit/calibration.hpp"
#include "bevkit/labels.hpp"
#include "bevkit/point_cloud.hpp"

namespace bevkit {

// Dataset directory layout: ROOT/velodyne/<id>.bin, ROOT/label_2/<id>.txt,
// ROOT/calib/<id>.txt. Clouds define the frame set; labels and calibration
// are optional per frame (empty path when missing).
struct FrameRef {
  std::string id;
  std::filesystem::path cloud_path;
  std::filesystem::path label_path;
  std::filesystem::path calib_path;
};

// Frames sorted by id. Throws DataError when the velodyne directory is
// missing or empty.
std::vector<FrameRef> list_frames(const std::filesystem::path& root);

struct Frame {
  std::string id;
  PointCloud cloud;
  LabelFile labels;       // empty when the frame has no label file
  Calibration calib;      // default rig when the frame has no calib file
  bool has_labels = false;
  bool has_calib = false;
};

Frame load_frame(const FrameRef& ref);

// Writes one complete frame, creating subdirectories as needed. Returns the
// three file paths written (cloud, labels, calib).
std::vector<std::filesystem::path> write_frame(const std::filesystem::path& root,
                                               const std::string& id,
                                               const PointCloud& cloud,
                                               const LabelFile& labels,
                                               const Calibration& calib);

}  // namespace bevkit
