// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/losses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bevkit/errors.hpp"

namespace bevkit {

RegressionTargets regression_targets(const RotatedBox& pred, const RotatedBox& gt,
                                     bool rotational) {
  validate_box(pred);
  validate_box(gt);
  RegressionTargets t;
  t.dx = pred.cx - gt.cx;
  t.dy = pred.cy - gt.cy;
  t.dh = pred.h - gt.h;
  t.dw = pred.w - gt.w;
  if (rotational) t.dtheta = pred.theta - gt.theta;
  return t;
}

RegressionTargets regression_targets(const RotatedBox& pred,
                                     const GroundTruthObject& gt, bool rotational) {
  return regression_targets(pred, gt.box, rotational);
}

RotatedBox apply_deltas(const RotatedBox& anchor, const RegressionTargets& t) {
  validate_box(anchor);
  RotatedBox out = anchor;
  out.cx = anchor.cx - t.dx;
  out.cy = anchor.cy - t.dy;
  out.h = anchor.h - t.dh;
  out.w = anchor.w - t.dw;
  if (t.dtheta) out.theta = anchor.theta - *t.dtheta;
  if (!(out.w > 0.0) || !(out.h > 0.0)) {
    throw InvalidBoxError("deltas drive a box dimension to zero or below");
  }
  return canonicalize(out);
}

double smooth_l1(double x, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("smooth_l1 sigma must be positive, got " +
                            std::to_string(sigma));
  }
  const double ax = std::abs(x);
  if (ax < 1.0 / sigma) return 0.5 * x * x * sigma;
  return ax - 0.5 / sigma;
}

double total_loss(const LossBreakdown& terms, const LossWeights& weights) {
  if (!(weights.regression >= 0.0) || !(weights.classification >= 0.0)) {
    throw ConfigError("loss weights must be non-negative");
  }
  const double reg[] = {terms.proposal_reg, terms.horizontal_reg,
                        terms.rotational_reg};
  const double cls[] = {terms.proposal_cls, terms.horizontal_cls,
                        terms.rotational_cls};
  double sum = 0.0;
  for (double v : reg) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::domain_error("loss terms must be finite and non-negative");
    }
    sum += weights.regression * v;
  }
  for (double v : cls) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::domain_error("loss terms must be finite and non-negative");
    }
    sum += weights.classification * v;
  }
  return sum;
}

}  // namespace bevkit
