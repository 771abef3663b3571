// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "bevkit/geometry.hpp"

// Shared helpers for the test binaries: reproducible random boxes and
// scratch directories.
namespace bevkit::testing {

inline RotatedBox random_box(std::mt19937_64& rng, double pos_lo = 0.0,
                             double pos_hi = 60.0) {
  std::uniform_real_distribution<double> fwd(pos_lo, pos_hi);
  std::uniform_real_distribution<double> lat(-30.0, 30.0);
  std::uniform_real_distribution<double> len(0.8, 7.0);
  std::uniform_real_distribution<double> ang(-180.0, 180.0);
  RotatedBox b;
  b.cx = fwd(rng);
  b.cy = lat(rng);
  b.w = len(rng);
  b.h = len(rng);
  b.theta = ang(rng);
  return canonicalize(b);
}

// A second box overlapping the first more often than not.
inline RotatedBox nearby_box(const RotatedBox& base, std::mt19937_64& rng,
                             double shift = 1.0) {
  std::normal_distribution<double> jitter(0.0, shift);
  std::uniform_real_distribution<double> ang(-30.0, 30.0);
  RotatedBox b = base;
  b.cx += jitter(rng);
  b.cy += jitter(rng);
  b.theta += ang(rng);
  return canonicalize(b);
}

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    dir_ = std::filesystem::temp_directory_path() /
           ("bevkit_test_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(dir_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  const std::filesystem::path& path() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

}  // namespace bevkit::testing
