// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/range_split.hpp"

#include <cmath>
#include <stdexcept>

#include "bevkit/errors.hpp"

namespace bevkit {

void RangeSplitParams::validate() const {
  if (!(label_threshold > 0.0)) {
    throw ConfigError("label_threshold must be positive");
  }
  if (!(outside_mask_min <= label_threshold && label_threshold <= inside_mask_max)) {
    throw ConfigError(
        "range split needs outside_mask_min <= label_threshold <= "
        "inside_mask_max so each branch sees its own objects");
  }
  if (!(inference_boundary > 0.0)) {
    throw ConfigError("inference_boundary must be positive");
  }
}

ObjectPartition assign_objects(const std::vector<GroundTruthObject>& objects,
                               const RangeSplitParams& params) {
  params.validate();
  ObjectPartition out;
  for (const GroundTruthObject& o : objects) {
    const double r = std::hypot(o.box.cx, o.box.cy);
    if (r < params.label_threshold) {
      out.inside.push_back(o);
    } else {
      out.outside.push_back(o);
    }
  }
  return out;
}

BevImage mask_bev(const BevImage& image, std::optional<double> r_min,
                  std::optional<double> r_max) {
  if (r_min && r_max && !(*r_min < *r_max)) {
    throw ConfigError("radial mask needs r_min < r_max");
  }
  BevImage out = image;
  for (int r = 0; r < out.grid.rows; ++r) {
    for (int c = 0; c < out.grid.cols; ++c) {
      const double radius = out.grid.center_radius(r, c);
      const bool keep = (!r_min || radius >= *r_min) && (!r_max || radius < *r_max);
      if (keep) continue;
      for (int ch = 0; ch < out.channels; ++ch) out.at(r, c, ch) = 0.0f;
    }
  }
  return out;
}

SplitFrame split_frame(const PointCloud& cloud,
                       const std::vector<GroundTruthObject>& labels,
                       const RangeSplitParams& params, BevEncoding encoding,
                       const BevGrid& grid,
                       const std::vector<std::uint8_t>& fov_mask,
                       const EncoderParams& encoder) {
  params.validate();
  const BevImage full = rasterize(cloud, encoding, grid, fov_mask, encoder);
  ObjectPartition parts = assign_objects(labels, params);
  SplitFrame out;
  out.inside.image = mask_bev(full, std::nullopt, params.inside_mask_max);
  out.inside.labels = std::move(parts.inside);
  out.outside.image = mask_bev(full, params.outside_mask_min, std::nullopt);
  out.outside.labels = std::move(parts.outside);
  return out;
}

std::vector<RotatedBox> merge_detections(const std::vector<RotatedBox>& inside,
                                         const std::vector<RotatedBox>& outside,
                                         const RangeSplitParams& params) {
  params.validate();
  std::vector<RotatedBox> out;
  out.reserve(inside.size() + outside.size());
  for (const RotatedBox& b : inside) {
    if (b.cx < params.inference_boundary) out.push_back(b);
  }
  for (const RotatedBox& b : outside) {
    if (b.cx >= params.inference_boundary) out.push_back(b);
  }
  return out;
}

double weighted_map(double ap_near, std::size_t n_near, double ap_far,
                    std::size_t n_far) {
  if (n_near + n_far == 0) {
    throw std::domain_error("weighted map needs at least one ground truth");
  }
  return (double(n_near) * ap_near + double(n_far) * ap_far) /
         double(n_near + n_far);
}

}  // namespace bevkit
