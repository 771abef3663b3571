// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <optional>

#include "bevkit/errors.hpp"

namespace bevkit {

struct PixelIndex {
  int row = 0;
  int col = 0;
};

// Maps ground-plane positions to image pixels. Row 0 is the far edge
// (largest x) and column 0 the left edge (largest y), so the sensor sits at
// the bottom center of the image. Pixels cover half-open squares; the
// defaults are a 70 x 70 m area at 0.1 m per pixel.
struct BevGrid {
  int rows = 700;
  int cols = 700;
  double resolution = 0.1;
  double x_max = 70.0;
  double y_max = 35.0;

  double x_min() const { return x_max - rows * resolution; }
  double y_min() const { return y_max - cols * resolution; }

  void validate() const {
    if (rows <= 0 || cols <= 0 || !(resolution > 0.0)) {
      throw ConfigError("grid needs positive rows, cols and resolution");
    }
  }

  std::optional<PixelIndex> point_to_pixel(double x, double y) const {
    if (!(x >= x_min() && x < x_max && y >= y_min() && y < y_max)) {
      return std::nullopt;
    }
    // The in-grid test above is authoritative; the clamps only absorb the
    // rounding at the exact lower bounds.
    int r = int(std::floor((x_max - x) / resolution));
    int c = int(std::floor((y_max - y) / resolution));
    if (r >= rows) r = rows - 1;
    if (c >= cols) c = cols - 1;
    return PixelIndex{r, c};
  }

  double center_x(int row) const { return x_max - (row + 0.5) * resolution; }
  double center_y(int col) const { return y_max - (col + 0.5) * resolution; }

  double center_radius(int row, int col) const {
    return std::hypot(center_x(row), center_y(col));
  }
};

}  // namespace bevkit
