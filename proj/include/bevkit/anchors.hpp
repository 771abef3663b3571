// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "bevkit/bev_grid.hpp"
#include "bevkit/geometry.hpp"

namespace bevkit {

// Anchor layout over a BEV grid: one box per (position, orientation), sized
// for a car seen from above (45 x 20 pixels at 0.1 m resolution), with
// orientations evenly covering the 180-degree heading range. Positions sit
// at every grid_stride_px pixels, matching a feature map downsampled by
// that stride.
struct AnchorSpec {
  double width_px = 45.0;
  double height_px = 20.0;
  int orientation_count = 16;
  int grid_stride_px = 4;
  BevGrid grid;

  void validate() const;
};

// Anchors in position-major, orientation-minor order. Every box is
// canonical.
std::vector<RotatedBox> generate_anchors(const AnchorSpec& spec);

enum class AnchorLabel { kPositive, kNegative, kIgnore };

struct AnchorMatch {
  AnchorLabel label = AnchorLabel::kNegative;
  int gt_index = -1;  // best-overlap ground truth for positives
  double iou = 0.0;   // best overlap
};

// Classic two-threshold assignment: an anchor is positive when its best
// overlap reaches positive_iou, negative when it stays under negative_iou,
// ignored in between. With no ground truth every anchor is negative.
std::vector<AnchorMatch> match_anchors(const std::vector<RotatedBox>& anchors,
                                       const std::vector<RotatedBox>& gts,
                                       double positive_iou = 0.7,
                                       double negative_iou = 0.3);

}  // namespace bevkit
