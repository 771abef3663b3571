// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "bevkit/calibration.hpp"
#include "bevkit/geometry.hpp"

namespace bevkit {

enum class FovMode {
  kNone,    // everything visible
  kWedge,   // forward wedge of +- half_angle degrees around +x
  kCamera,  // positions that project into the camera image
};

// Ground-plane visibility test. Camera mode samples positions at a fixed
// height (default 0, roughly mid-car) because visibility of a ground
// position depends on the height it is evaluated at.
class FieldOfView {
 public:
  static FieldOfView none();
  static FieldOfView wedge(double half_angle_deg = 45.0);
  static FieldOfView camera(const Calibration& calib, double sample_height = 0.0);

  FovMode mode() const { return mode_; }

  bool contains(double x, double y) const;

  // Fraction of the box footprint that is visible, estimated on a regular
  // grid of sample points no coarser than sample_resolution meters. A box
  // entirely behind the sensor scores 0.
  double surface_fraction(const RotatedBox& box, double sample_resolution = 0.1) const;

 private:
  FieldOfView() = default;

  FovMode mode_ = FovMode::kNone;
  double half_angle_deg_ = 45.0;
  double sample_height_ = 0.0;
  std::optional<Calibration> calib_;
};

}  // namespace bevkit
