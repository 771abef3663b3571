// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "bevkit/bev_grid.hpp"
#include "bevkit/bev_image.hpp"
#include "bevkit/eval.hpp"
#include "bevkit/lidar_sim.hpp"
#include "bevkit/point_cloud.hpp"
#include "bevkit/range_split.hpp"

namespace bevkit {

// How tools pick the visibility mask: "auto" uses the frame calibration
// when present and falls back to the wedge, the other modes force one
// behavior.
struct FovSettings {
  std::string mode = "auto";  // auto | camera | wedge | none
  double wedge_half_angle_deg = 45.0;
  double sample_height = 0.0;

  void validate() const;
};

// Everything the command-line tools read from a config file. Defaults
// reproduce the standard forward-camera car setup end to end.
struct ToolConfig {
  CropBounds crop;
  BevGrid grid;
  BevEncoding encoding = BevEncoding::kMaxHeight3;
  EncoderParams encoder;
  FovSettings fov;
  RangeSplitParams range_split;
  EvalConfig eval;
  SensorModel sensor;
  double nms_iou_threshold = 0.3;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = one per hardware thread

  void validate() const;
};

// Parses a JSON config (// comments allowed). Missing keys keep their
// defaults; unknown keys raise ConfigError so typos cannot silently pass.
ToolConfig parse_config(const std::string& text);
ToolConfig load_config(const std::filesystem::path& path);

// Serializes the full effective config, all keys present.
std::string config_json(const ToolConfig& config);

}  // namespace bevkit
