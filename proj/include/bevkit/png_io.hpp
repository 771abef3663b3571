// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "bevkit/bev_image.hpp"

namespace bevkit {

// Renders a BEV image to PNG for inspection. Three-channel encodings map to
// RGB; the nine-slice encoding collapses to grayscale by per-pixel maximum.
// Values scale from 0..100 to 0..255. Output bytes are deterministic for
// identical input.
void render_png(const BevImage& image, const std::filesystem::path& path);

}  // namespace bevkit
