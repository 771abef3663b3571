// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/anchors.hpp"

#include <string>

#include "bevkit/errors.hpp"

namespace bevkit {

void AnchorSpec::validate() const {
  grid.validate();
  if (!(width_px > 0.0 && height_px > 0.0)) {
    throw ConfigError("anchor size must be positive");
  }
  if (orientation_count < 1) {
    throw ConfigError("orientation_count must be at least 1");
  }
  if (grid_stride_px < 1 || grid_stride_px > grid.rows ||
      grid_stride_px > grid.cols) {
    throw ConfigError("grid_stride_px must fit inside the grid");
  }
}

std::vector<RotatedBox> generate_anchors(const AnchorSpec& spec) {
  spec.validate();
  const int n_rows = spec.grid.rows / spec.grid_stride_px;
  const int n_cols = spec.grid.cols / spec.grid_stride_px;
  const double res = spec.grid.resolution;
  const double step_deg = 180.0 / spec.orientation_count;

  std::vector<RotatedBox> anchors;
  anchors.reserve(std::size_t(n_rows) * n_cols * spec.orientation_count);
  for (int i = 0; i < n_rows; ++i) {
    const double x = spec.grid.x_max - (i + 0.5) * spec.grid_stride_px * res;
    for (int j = 0; j < n_cols; ++j) {
      const double y = spec.grid.y_max - (j + 0.5) * spec.grid_stride_px * res;
      for (int k = 0; k < spec.orientation_count; ++k) {
        RotatedBox b;
        b.cx = x;
        b.cy = y;
        b.w = spec.width_px * res;
        b.h = spec.height_px * res;
        b.theta = k * step_deg;
        anchors.push_back(canonicalize(b));
      }
    }
  }
  return anchors;
}

std::vector<AnchorMatch> match_anchors(const std::vector<RotatedBox>& anchors,
                                       const std::vector<RotatedBox>& gts,
                                       double positive_iou, double negative_iou) {
  if (!(positive_iou > 0.0 && positive_iou <= 1.0) ||
      !(negative_iou > 0.0 && negative_iou <= 1.0) ||
      negative_iou > positive_iou) {
    throw ConfigError("anchor thresholds need 0 < negative <= positive <= 1");
  }
  std::vector<AnchorMatch> out(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    AnchorMatch m;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double iou = rotated_iou(anchors[i], gts[g]);
      if (iou > m.iou) {
        m.iou = iou;
        m.gt_index = int(g);
      }
    }
    if (m.iou >= positive_iou) {
      m.label = AnchorLabel::kPositive;
    } else if (m.iou < negative_iou) {
      m.label = AnchorLabel::kNegative;
      m.gt_index = -1;
    } else {
      m.label = AnchorLabel::kIgnore;
    }
    out[i] = m;
  }
  return out;
}

}  // namespace bevkit
