// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/fov.hpp"

#include <cmath>
#include <numbers>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

FieldOfView FieldOfView::none() {
  FieldOfView f;
  f.mode_ = FovMode::kNone;
  return f;
}

FieldOfView FieldOfView::wedge(double half_angle_deg) {
  if (!(half_angle_deg > 0.0 && half_angle_deg < 180.0)) {
    throw ConfigError("wedge half angle must lie in (0, 180) degrees");
  }
  FieldOfView f;
  f.mode_ = FovMode::kWedge;
  f.half_angle_deg_ = half_angle_deg;
  return f;
}

FieldOfView FieldOfView::camera(const Calibration& calib, double sample_height) {
  calib.validate();
  FieldOfView f;
  f.mode_ = FovMode::kCamera;
  f.calib_ = calib;
  f.sample_height_ = sample_height;
  return f;
}

bool FieldOfView::contains(double x, double y) const {
  switch (mode_) {
    case FovMode::kNone:
      return true;
    case FovMode::kWedge: {
      const double ang = std::atan2(y, x) / kDegToRad;
      return std::abs(ang) <= half_angle_deg_;
    }
    case FovMode::kCamera: {
      const auto p = calib_->project(Eigen::Vector3d(x, y, sample_height_));
      return calib_->in_image(p);
    }
  }
  return false;
}

double FieldOfView::surface_fraction(const RotatedBox& box,
                                     double sample_resolution) const {
  validate_box(box);
  if (!(sample_resolution > 0.0)) {
    throw ConfigError("sample resolution must be positive");
  }
  if (mode_ == FovMode::kNone) return 1.0;

  const int nu = std::max(1, int(std::ceil(box.w / sample_resolution)));
  const int nv = std::max(1, int(std::ceil(box.h / sample_resolution)));
  const double c = std::cos(box.theta * kDegToRad);
  const double s = std::sin(box.theta * kDegToRad);
  int inside = 0;
  for (int i = 0; i < nu; ++i) {
    const double u = (-0.5 + (i + 0.5) / nu) * box.w;
    for (int j = 0; j < nv; ++j) {
      const double v = (-0.5 + (j + 0.5) / nv) * box.h;
      const double x = box.cx + c * u - s * v;
      const double y = box.cy + s * u + c * v;
      if (contains(x, y)) ++inside;
    }
  }
  return double(inside) / (double(nu) * double(nv));
}

}  // namespace bevkit
