// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/cli.hpp"

int main(int argc, char** argv) { return bevkit::cli::run(argc, argv); }
