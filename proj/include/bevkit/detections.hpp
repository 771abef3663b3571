// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bevkit/geometry.hpp"

namespace bevkit {

// One detection in the interchange text format, one per line:
//   frame_id cx cy w h theta confidence
// Numbers are written with six decimals so write -> parse -> write is
// byte-stable.
struct DetectionRecord {
  std::string frame_id;
  RotatedBox box;  // confidence carried inside the box
};

std::vector<DetectionRecord> parse_detections(const std::string& text);
std::string write_detections(const std::vector<DetectionRecord>& dets);

std::vector<DetectionRecord> load_detections(const std::filesystem::path& path);
void save_detections(const std::vector<DetectionRecord>& dets,
                     const std::filesystem::path& path);

}  // namespace bevkit
