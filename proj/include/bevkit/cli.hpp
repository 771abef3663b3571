// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace bevkit::cli {

// Command-line entry point, callable in-process for testing. Exit codes:
// 0 success, 1 usage error, 2 data or configuration error, 3 failed
// selfcheck.
int run(int argc, const char* const* argv);

}  // namespace bevkit::cli
