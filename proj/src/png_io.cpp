// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {

std::uint8_t to_byte(float v) {
  const double scaled = std::round(double(v) * 255.0 / 100.0);
  return std::uint8_t(std::clamp(scaled, 0.0, 255.0));
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

}  // namespace

void render_png(const BevImage& image, const std::filesystem::path& path) {
  const bool gray = image.channels == 9;
  const int out_channels = gray ? 1 : 3;
  if (!gray && image.channels != 3) {
    throw ConfigError("png rendering expects 3 or 9 channels, got " +
                      std::to_string(image.channels));
  }

  std::vector<std::uint8_t> pixels(std::size_t(image.grid.rows) *
                                   image.grid.cols * out_channels);
  for (int r = 0; r < image.grid.rows; ++r) {
    for (int c = 0; c < image.grid.cols; ++c) {
      std::uint8_t* px =
          pixels.data() + (std::size_t(r) * image.grid.cols + c) * out_channels;
      if (gray) {
        float m = 0.0f;
        for (int ch = 0; ch < image.channels; ++ch) {
          m = std::max(m, image.at(r, c, ch));
        }
        px[0] = to_byte(m);
      } else {
        for (int ch = 0; ch < 3; ++ch) px[ch] = to_byte(image.at(r, c, ch));
      }
    }
  }

  std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw DataError("cannot write png file: " + path.string());

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw DataError("png writer allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw DataError("png info allocation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw DataError("png encoding failed for " + path.string());
  }

  png_init_io(png, fp.get());
  png_set_IHDR(png, info, png_uint_32(image.grid.cols), png_uint_32(image.grid.rows),
               8, gray ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < image.grid.rows; ++r) {
    png_write_row(png, pixels.data() + std::size_t(r) * image.grid.cols * out_channels);
  }
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
}

}  // namespace bevkit
