// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/bev_image.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {

// Per-pixel running maximum of (z, intensity), lexicographic so the result
// does not depend on point order.
struct TopHit {
  float z = -std::numeric_limits<float>::infinity();
  float intensity = 0.0f;
  bool hit = false;

  void update(float pz, float pi) {
    if (!hit || pz > z || (pz == z && pi > intensity)) {
      z = pz;
      intensity = pi;
      hit = true;
    }
  }
};

void write_u32le(std::uint32_t v, std::ofstream& out) {
  const std::uint8_t b[4] = {std::uint8_t(v & 0xff), std::uint8_t((v >> 8) & 0xff),
                             std::uint8_t((v >> 16) & 0xff),
                             std::uint8_t((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32le(std::ifstream& in, const std::filesystem::path& path) {
  std::uint8_t b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw ParseError("truncated raster header in " + path.string());
  }
  return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 |
         std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
}

}  // namespace

BevEncoding parse_encoding(const std::string& name) {
  if (name == "max_height3") return BevEncoding::kMaxHeight3;
  if (name == "binary") return BevEncoding::kBinary;
  if (name == "multi_height9") return BevEncoding::kMultiHeight9;
  if (name == "height_intensity_density") return BevEncoding::kHeightIntensityDensity;
  throw ConfigError("unknown encoding '" + name +
                    "' (want max_height3, binary, multi_height9 or "
                    "height_intensity_density)");
}

std::string encoding_name(BevEncoding enc) {
  switch (enc) {
    case BevEncoding::kMaxHeight3: return "max_height3";
    case BevEncoding::kBinary: return "binary";
    case BevEncoding::kMultiHeight9: return "multi_height9";
    case BevEncoding::kHeightIntensityDensity: return "height_intensity_density";
  }
  throw ConfigError("bad encoding value");
}

int channel_count(BevEncoding enc) {
  return enc == BevEncoding::kMultiHeight9 ? 9 : 3;
}

void EncoderParams::validate() const {
  if (!(z_min < z_max)) throw ConfigError("encoder z range must have z_min < z_max");
  for (std::size_t i = 0; i + 1 < height3_cuts.size(); ++i) {
    if (!(height3_cuts[i] < height3_cuts[i + 1])) {
      throw ConfigError("three-slice cuts must increase strictly");
    }
  }
  if (!(density_norm > 1.0)) throw ConfigError("density_norm must exceed 1");
}

std::vector<std::uint8_t> make_fov_mask(const BevGrid& grid, const FieldOfView& fov) {
  grid.validate();
  std::vector<std::uint8_t> mask(std::size_t(grid.rows) * grid.cols, 0);
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      mask[std::size_t(r) * grid.cols + c] =
          fov.contains(grid.center_x(r), grid.center_y(c)) ? 1 : 0;
    }
  }
  return mask;
}

BevImage rasterize(const PointCloud& cloud, BevEncoding encoding,
                   const BevGrid& grid, const std::vector<std::uint8_t>& fov_mask,
                   const EncoderParams& params) {
  grid.validate();
  params.validate();
  const std::size_t n_pixels = std::size_t(grid.rows) * grid.cols;
  if (fov_mask.size() != n_pixels) {
    throw ConfigError("fov mask size does not match the grid");
  }

  BevImage img;
  img.grid = grid;
  img.encoding = encoding;
  img.channels = channel_count(encoding);
  img.values.assign(n_pixels * img.channels, 0.0f);
  img.fov_mask = fov_mask;

  const bool multi9 = encoding == BevEncoding::kMultiHeight9;
  const bool hid = encoding == BevEncoding::kHeightIntensityDensity;
  const int n_slices = hid ? 1 : (multi9 ? 9 : 3);
  const double span = params.z_max - params.z_min;

  std::vector<TopHit> top(n_pixels * std::size_t(n_slices));
  std::vector<std::uint32_t> counts;
  if (hid) counts.assign(n_pixels, 0);

  auto slice_lo = [&](int k) {
    return multi9 ? params.z_min + span * k / 9.0 : params.height3_cuts[std::size_t(k)];
  };
  auto slice_hi = [&](int k) {
    return multi9 ? params.z_min + span * (k + 1) / 9.0
                  : params.height3_cuts[std::size_t(k) + 1];
  };

  for (const Point& p : cloud.points) {
    const auto pix = grid.point_to_pixel(p.x, p.y);
    if (!pix) continue;
    const std::size_t at = std::size_t(pix->row) * grid.cols + pix->col;
    if (fov_mask[at] == 0) continue;
    if (!(p.z >= params.z_min && p.z < params.z_max)) continue;
    if (hid) {
      top[at].update(p.z, p.intensity);
      ++counts[at];
      continue;
    }
    int k = n_slices - 1;
    while (k > 0 && p.z < slice_lo(k)) --k;
    // Points below the first cut can only occur with custom cuts narrower
    // than the z range; they fall into slice 0 by the scan above, so guard.
    if (p.z < slice_lo(0) || p.z >= slice_hi(n_slices - 1)) continue;
    top[at * n_slices + k].update(p.z, p.intensity);
  }

  for (std::size_t at = 0; at < n_pixels; ++at) {
    if (hid) {
      const TopHit& t = top[at];
      if (!t.hit) continue;
      float* v = img.values.data() + at * 3;
      v[0] = float(100.0 * (double(t.z) - params.z_min) / span);
      v[1] = float(100.0 * double(t.intensity));
      const double d =
          std::log1p(double(counts[at])) / std::log(params.density_norm);
      v[2] = float(100.0 * std::min(1.0, d));
      continue;
    }
    for (int k = 0; k < n_slices; ++k) {
      const TopHit& t = top[at * n_slices + k];
      if (!t.hit) continue;
      if (encoding == BevEncoding::kBinary) {
        img.values[at * n_slices + k] = 100.0f;
      } else {
        const double lo = slice_lo(k);
        const double hi = slice_hi(k);
        img.values[at * n_slices + k] =
            float(100.0 * (double(t.z) - lo) / (hi - lo));
      }
    }
  }
  return img;
}

void save_raster(const BevImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write raster file: " + path.string());
  write_u32le(std::uint32_t(image.grid.rows), out);
  write_u32le(std::uint32_t(image.grid.cols), out);
  write_u32le(std::uint32_t(image.channels), out);
  for (float v : image.values) {
    const std::uint32_t u = std::bit_cast<std::uint32_t>(v);
    const std::uint8_t b[4] = {std::uint8_t(u & 0xff), std::uint8_t((u >> 8) & 0xff),
                               std::uint8_t((u >> 16) & 0xff),
                               std::uint8_t((u >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 4);
  }
  if (!out) throw DataError("short write to " + path.string());
}

RawRaster load_raster(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open raster file: " + path.string());
  RawRaster r;
  r.rows = read_u32le(in, path);
  r.cols = read_u32le(in, path);
  r.channels = read_u32le(in, path);
  const std::size_t n = std::size_t(r.rows) * r.cols * r.channels;
  r.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) {
      throw ParseError("truncated raster values in " + path.string());
    }
    const std::uint32_t u = std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 |
                            std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
    r.values[i] = std::bit_cast<float>(u);
  }
  return r;
}

}  // namespace bevkit
