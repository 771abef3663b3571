// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bevkit/eval.hpp"
#include "bevkit/geometry.hpp"

// Independent reference implementations used to cross-check the analytic
// geometry and the evaluator, both in tests and in the CLI selfcheck. These
// deliberately avoid the code paths they validate: IoU comes from sampling,
// scoring from direct nested loops over the definitions.
namespace bevkit::oracle {

// Monte-Carlo IoU estimate. Samples uniformly inside the smaller box and
// counts hits inside the other; the standard error of the IoU is at most
// about 0.5 / sqrt(samples).
double mc_rotated_iou(const RotatedBox& a, const RotatedBox& b,
                      std::size_t samples, std::uint64_t seed);

struct NaiveCell {
  std::optional<double> ap;
  std::size_t gt_count = 0;
};

struct NaiveReport {
  // Same shape as EvalReport: [difficulty][bucket][threshold], last bucket
  // combined.
  std::vector<std::vector<std::vector<NaiveCell>>> cells;
};

NaiveReport naive_evaluate(const std::vector<FrameGroundTruth>& gt_frames,
                           const std::vector<DetectionRecord>& detections,
                           const EvalConfig& config);

struct SelfCheckResult {
  bool passed = false;
  std::string summary;  // one line per check
};

// Quick built-in validation: fixed analytic IoU cases, randomized
// Monte-Carlo IoU agreement, and exact evaluator agreement on random
// micro-datasets.
SelfCheckResult run_selfcheck(std::uint64_t seed = 0);

}  // namespace bevkit::oracle
