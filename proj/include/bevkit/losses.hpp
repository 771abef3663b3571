// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "bevkit/geometry.hpp"
#include "bevkit/labels.hpp"

namespace bevkit {

// Fieldwise offsets between a predicted (or anchor) box and a ground-truth
// box: meters for position and size, degrees for heading.
struct RegressionTargets {
  double dx = 0.0;
  double dy = 0.0;
  double dh = 0.0;
  double dw = 0.0;
  std::optional<double> dtheta;
};

// Offsets are prediction minus ground truth, fieldwise, with no scale
// normalization. Both boxes must be canonical. dtheta is produced only when
// rotational is set; the proposal stage regresses axis-aligned fields only.
RegressionTargets regression_targets(const RotatedBox& pred, const RotatedBox& gt,
                                     bool rotational);
RegressionTargets regression_targets(const RotatedBox& pred,
                                     const GroundTruthObject& gt, bool rotational);

// Inverse of regression_targets: subtracting the offsets from the anchor
// recovers the ground truth. The result is canonicalized; offsets that drive
// a dimension to zero or below raise InvalidBoxError. Without dtheta the
// anchor keeps its heading.
RotatedBox apply_deltas(const RotatedBox& anchor, const RegressionTargets& t);

// Piecewise smooth L1 with curvature parameter sigma > 0:
//   0.5 x^2 sigma     for |x| < 1/sigma
//   |x| - 0.5/sigma   otherwise
// The branches meet at |x| = 1/sigma with matching value and slope.
double smooth_l1(double x, double sigma);

// Curvature used by the two stages: proposals train with the sharper 3.0,
// refinement heads with 1.0.
inline constexpr double kProposalSigma = 3.0;
inline constexpr double kHeadSigma = 1.0;

// Loss terms of the full pipeline: the proposal stage plus the horizontal
// and rotational refinement heads, each with a regression and a
// classification part.
struct LossBreakdown {
  double proposal_reg = 0.0;
  double proposal_cls = 0.0;
  double horizontal_reg = 0.0;
  double horizontal_cls = 0.0;
  double rotational_reg = 0.0;
  double rotational_cls = 0.0;
};

// Regression counts double relative to classification.
struct LossWeights {
  double regression = 2.0;
  double classification = 1.0;
};

// Weighted sum of the six terms. Throws std::domain_error on negative or
// non-finite terms, ConfigError on negative weights.
double total_loss(const LossBreakdown& terms, const LossWeights& weights = {});

}  // namespace bevkit
