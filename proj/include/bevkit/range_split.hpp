// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "bevkit/bev_image.hpp"
#include "bevkit/labels.hpp"

namespace bevkit {

// Two-branch range split. Objects go to the near or far branch by radial
// center distance against label_threshold. Each branch sees a radially
// masked copy of the input: the near branch keeps pixels under
// inside_mask_max, the far branch keeps pixels from outside_mask_min on, so
// the branches share an overlap band and neither trains against objects it
// cannot see. At inference the merged output takes near-branch boxes below
// the longitudinal boundary and far-branch boxes from it on.
struct RangeSplitParams {
  double label_threshold = 25.0;   // radial, meters
  double inside_mask_max = 30.0;   // radial, meters
  double outside_mask_min = 25.0;  // radial, meters
  double inference_boundary = 35.0;  // longitudinal (x), meters

  void validate() const;
};

struct ObjectPartition {
  std::vector<GroundTruthObject> inside;
  std::vector<GroundTruthObject> outside;
};

// Splits by radial distance of the box center: strictly under the threshold
// goes inside, at or beyond goes outside. Order within each part follows the
// input.
ObjectPartition assign_objects(const std::vector<GroundTruthObject>& objects,
                               const RangeSplitParams& params);

// Zeroes every channel of pixels whose cell center radius falls outside
// [r_min, r_max); a missing bound is unbounded on that side. The visibility
// mask is unchanged. Masking twice equals masking with the tighter band.
BevImage mask_bev(const BevImage& image, std::optional<double> r_min,
                  std::optional<double> r_max);

struct RangeSample {
  BevImage image;
  std::vector<GroundTruthObject> labels;
};

struct SplitFrame {
  RangeSample inside;
  RangeSample outside;
};

// Builds both branch samples of one frame: rasterize once, mask per branch,
// split the labels per branch.
SplitFrame split_frame(const PointCloud& cloud,
                       const std::vector<GroundTruthObject>& labels,
                       const RangeSplitParams& params, BevEncoding encoding,
                       const BevGrid& grid,
                       const std::vector<std::uint8_t>& fov_mask,
                       const EncoderParams& encoder = {});

// Merges branch outputs for one frame: near-branch boxes with
// cx < inference_boundary, far-branch boxes with cx >= inference_boundary,
// in that order, original order preserved within each branch.
std::vector<RotatedBox> merge_detections(const std::vector<RotatedBox>& inside,
                                         const std::vector<RotatedBox>& outside,
                                         const RangeSplitParams& params);

// Combines per-branch average precisions weighted by ground-truth counts.
// Throws std::domain_error when both counts are zero.
double weighted_map(double ap_near, std::size_t n_near, double ap_far,
                    std::size_t n_far);

}  // namespace bevkit
