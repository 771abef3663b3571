// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace bevkit {

// Geometrically invalid box: non-finite field or non-positive dimension.
struct InvalidBoxError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed input bytes or text (point clouds, labels, calib, scenes).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Out-of-range or inconsistent configuration value.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Missing or unreadable files, inconsistent dataset contents.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bevkit
