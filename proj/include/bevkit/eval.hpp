// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bevkit/detections.hpp"
#include "bevkit/geometry.hpp"
#include "bevkit/labels.hpp"

namespace bevkit {

// Difficulty buckets in the usual benchmark sense. A ground truth that fails
// even the hard rule is ignored: it is never a target, but detections
// overlapping it are not penalized either.
enum class Difficulty { kEasy = 0, kModerate = 1, kHard = 2, kIgnored = 3 };

struct DifficultyRule {
  double min_bbox_height = 0.0;  // image pixels, inclusive
  int max_occlusion = 0;
  double max_truncation = 0.0;
};

struct DifficultyTable {
  std::array<DifficultyRule, 3> levels{{{40.0, 0, 0.15}, {25.0, 1, 0.30}, {25.0, 2, 0.50}}};
};

Difficulty classify_difficulty(const GroundTruthObject& gt,
                               const DifficultyTable& table = {});
std::string difficulty_name(Difficulty d);

enum class DetOutcome { kTruePositive, kFalsePositive, kNeutral };

// A ground truth offered to the matcher: targets count toward recall,
// neutral entries (harder than the evaluated level, or ignored) absorb
// detections without reward or penalty.
struct GtRole {
  RotatedBox box;
  bool neutral = false;
};

struct MatchResult {
  std::vector<DetOutcome> outcomes;  // per detection, input order
  std::vector<bool> gt_matched;      // per ground truth
};

// Greedy one-to-one matching within one frame. Detections are processed in
// descending confidence (ties keep input order); each takes the unmatched
// target with the highest IoU at or above the threshold, else the unmatched
// neutral the same way (making it neutral), else it is a false positive.
MatchResult match_detections(const std::vector<RotatedBox>& dets,
                             const std::vector<GtRole>& gts, double iou_threshold);

// Precision/recall at every distinct confidence cut, strongest cut first.
struct PrCurve {
  std::vector<double> recall;
  std::vector<double> precision;
};

struct DetPoint {
  double confidence = 0.0;
  bool true_positive = false;
};

inline constexpr int kRecallSamples = 41;

// Interpolated average precision on the 0..100 scale, sampled at 41 evenly
// spaced recall grid points; precision at a grid point is the maximum
// precision among curve points with recall at or beyond it. Zero ground
// truths make the metric undefined and return nullopt. Neutral detections
// must not appear in points.
std::optional<double> average_precision_41(std::vector<DetPoint> points,
                                           std::size_t gt_count,
                                           PrCurve* curve = nullptr);

struct FrameGroundTruth {
  std::string frame_id;
  std::vector<GroundTruthObject> objects;
};

struct EvalConfig {
  std::vector<double> iou_thresholds{0.5, 0.7};
  // Longitudinal bucket edges; [0, 35, 70] gives near and far buckets plus
  // the combined 0-70 summary.
  std::vector<double> range_edges{0.0, 35.0, 70.0};
  DifficultyTable difficulty;

  void validate() const;
  std::size_t bucket_count() const { return range_edges.size() - 1; }
};

struct EvalCell {
  std::optional<double> ap;  // absent when the cell has no ground truth
  std::size_t gt_count = 0;
  std::size_t det_count = 0;
  PrCurve curve;  // empty for the combined bucket
};

// cells[difficulty][bucket][threshold]; bucket bucket_count() is the
// combined summary, whose AP is the gt-count-weighted mean of the buckets
// that have ground truth.
struct EvalReport {
  EvalConfig config;
  std::vector<std::vector<std::vector<EvalCell>>> cells;
  std::vector<std::string> warnings;

  const EvalCell& cell(std::size_t difficulty, std::size_t bucket,
                       std::size_t threshold) const {
    return cells[difficulty][bucket][threshold];
  }
};

// Full benchmark pass: detections are bucketed by longitudinal center,
// matched greedily per frame against difficulty-filtered ground truth, and
// scored per (difficulty, bucket, IoU threshold). Detections for unknown
// frames are skipped with a warning.
EvalReport evaluate(const std::vector<FrameGroundTruth>& gt_frames,
                    const std::vector<DetectionRecord>& detections,
                    const EvalConfig& config = {});

std::string format_report(const EvalReport& report);
std::string report_json(const EvalReport& report);
std::string pr_curve_csv(const EvalReport& report);

}  // namespace bevkit
