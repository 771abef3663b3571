// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bevkit/bev_grid.hpp"
#include "bevkit/fov.hpp"
#include "bevkit/point_cloud.hpp"

namespace bevkit {

// Channel layouts for the rasterized ground-plane image. Values live on a
// 0..100 scale so the images sit in the brightness range classifiers
// pretrained on photos expect.
enum class BevEncoding {
  kMaxHeight3,              // top height per third of the vertical crop
  kBinary,                  // 100 where the slice is occupied
  kMultiHeight9,            // top height per ninth of the vertical crop
  kHeightIntensityDensity,  // top height, its reflectance, point density
};

BevEncoding parse_encoding(const std::string& name);
std::string encoding_name(BevEncoding enc);
int channel_count(BevEncoding enc);

// Vertical slicing and density normalization. The three-slice cuts follow
// the vertical crop: ground band, mid band up to typical car roof height,
// and everything above it.
struct EncoderParams {
  double z_min = -1.73;
  double z_max = 1.27;
  std::array<double, 4> height3_cuts{-1.73, -0.73, 0.23, 1.27};
  double density_norm = 64.0;

  void validate() const;
};

struct BevImage {
  BevGrid grid;
  BevEncoding encoding = BevEncoding::kMaxHeight3;
  int channels = 0;
  std::vector<float> values;         // (row * cols + col) * channels + ch
  std::vector<std::uint8_t> fov_mask;  // rows * cols, 1 = visible

  float at(int row, int col, int ch) const {
    return values[std::size_t(row * grid.cols + col) * channels + ch];
  }
  float& at(int row, int col, int ch) {
    return values[std::size_t(row * grid.cols + col) * channels + ch];
  }
  bool in_fov(int row, int col) const {
    return fov_mask[std::size_t(row) * grid.cols + col] != 0;
  }
};

std::vector<std::uint8_t> make_fov_mask(const BevGrid& grid, const FieldOfView& fov);

// Rasterizes a cloud into a BEV image. Points outside the grid, outside the
// vertical range, or on masked pixels are skipped. Output is independent of
// point order: height channels keep the maximum z (ties resolved toward the
// larger reflectance), density counts all in-column points.
BevImage rasterize(const PointCloud& cloud, BevEncoding encoding,
                   const BevGrid& grid, const std::vector<std::uint8_t>& fov_mask,
                   const EncoderParams& params = {});

// Raw raster container: header of rows, cols, channels (little-endian
// uint32) followed by row-major, channel-interleaved float32 values.
struct RawRaster {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::uint32_t channels = 0;
  std::vector<float> values;
};

void save_raster(const BevImage& image, const std::filesystem::path& path);
RawRaster load_raster(const std::filesystem::path& path);

}  // namespace bevkit
