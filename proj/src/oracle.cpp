// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>

#include "bevkit/errors.hpp"

namespace bevkit::oracle {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

int naive_bucket(double cx, const std::vector<double>& edges) {
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (cx >= edges[i] && cx < edges[i + 1]) return int(i);
  }
  return -1;
}

int naive_difficulty(const GroundTruthObject& gt, const DifficultyTable& table) {
  for (std::size_t i = 0; i < table.levels.size(); ++i) {
    if (gt.bbox2d_height() >= table.levels[i].min_bbox_height &&
        gt.occlusion <= table.levels[i].max_occlusion &&
        gt.truncation <= table.levels[i].max_truncation) {
      return int(i);
    }
  }
  return 3;
}

struct NaivePoint {
  double confidence = 0.0;
  bool tp = false;
};

// Direct transcription of the matching rules, one frame at a time: repeat
// picking the strongest unprocessed detection, give it the best still-free
// target at or over the threshold, else the best still-free neutral.
void naive_match(const std::vector<const RotatedBox*>& dets,
                 const std::vector<const RotatedBox*>& target_gts,
                 const std::vector<const RotatedBox*>& neutral_gts,
                 double threshold, std::vector<NaivePoint>& out) {
  std::vector<bool> det_done(dets.size(), false);
  std::vector<bool> target_used(target_gts.size(), false);
  std::vector<bool> neutral_used(neutral_gts.size(), false);
  for (std::size_t round = 0; round < dets.size(); ++round) {
    int pick = -1;
    for (std::size_t d = 0; d < dets.size(); ++d) {
      if (det_done[d]) continue;
      if (pick < 0 || dets[d]->confidence > dets[std::size_t(pick)]->confidence) {
        pick = int(d);
      }
    }
    det_done[std::size_t(pick)] = true;
    const RotatedBox& det = *dets[std::size_t(pick)];

    int best_target = -1;
    double best_target_iou = 0.0;
    for (std::size_t g = 0; g < target_gts.size(); ++g) {
      if (target_used[g]) continue;
      const double iou = rotated_iou(det, *target_gts[g]);
      if (iou >= threshold && iou > best_target_iou) {
        best_target_iou = iou;
        best_target = int(g);
      }
    }
    if (best_target >= 0) {
      target_used[std::size_t(best_target)] = true;
      out.push_back({det.confidence, true});
      continue;
    }
    int best_neutral = -1;
    double best_neutral_iou = 0.0;
    for (std::size_t g = 0; g < neutral_gts.size(); ++g) {
      if (neutral_used[g]) continue;
      const double iou = rotated_iou(det, *neutral_gts[g]);
      if (iou >= threshold && iou > best_neutral_iou) {
        best_neutral_iou = iou;
        best_neutral = int(g);
      }
    }
    if (best_neutral >= 0) {
      neutral_used[std::size_t(best_neutral)] = true;
      continue;  // neutral: no point recorded
    }
    out.push_back({det.confidence, false});
  }
}

std::optional<double> naive_ap(const std::vector<NaivePoint>& points,
                               std::size_t gt_count) {
  if (gt_count == 0) return std::nullopt;
  std::vector<double> cuts;
  for (const NaivePoint& p : points) cuts.push_back(p.confidence);
  std::sort(cuts.begin(), cuts.end(), std::greater<double>());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> recalls, precisions;
  for (double c : cuts) {
    std::size_t tp = 0, fp = 0;
    for (const NaivePoint& p : points) {
      if (p.confidence >= c) p.tp ? ++tp : ++fp;
    }
    recalls.push_back(double(tp) / double(gt_count));
    precisions.push_back(double(tp) / double(tp + fp));
  }

  double sum = 0.0;
  for (int k = 0; k <= 40; ++k) {
    const double r = double(k) / 40.0;
    double best = 0.0;
    for (std::size_t i = 0; i < recalls.size(); ++i) {
      if (recalls[i] >= r) best = std::max(best, precisions[i]);
    }
    sum += best;
  }
  return 100.0 * sum / 41.0;
}

RotatedBox random_box(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(5.0, 60.0);
  std::uniform_real_distribution<double> lat(-25.0, 25.0);
  std::uniform_real_distribution<double> len(1.0, 6.0);
  std::uniform_real_distribution<double> ang(-90.0, 90.0);
  RotatedBox b;
  b.cx = pos(rng);
  b.cy = lat(rng);
  b.w = len(rng);
  b.h = std::uniform_real_distribution<double>(0.5, b.w)(rng);
  b.theta = ang(rng);
  return canonicalize(b);
}

RotatedBox jittered(const RotatedBox& base, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, scale);
  RotatedBox b = base;
  b.cx += n(rng);
  b.cy += n(rng);
  b.theta += 5.0 * n(rng);
  return canonicalize(b);
}

}  // namespace

double mc_rotated_iou(const RotatedBox& a, const RotatedBox& b,
                      std::size_t samples, std::uint64_t seed) {
  validate_box(a);
  validate_box(b);
  if (samples == 0) throw ConfigError("mc_rotated_iou needs samples > 0");

  // Sample inside the smaller box: the relative error of the intersection
  // estimate then bounds the IoU error.
  const RotatedBox& small = a.area() <= b.area() ? a : b;
  const RotatedBox& big = a.area() <= b.area() ? b : a;
  const ConvexPolygon big_poly = box_corners(big);

  const double c = std::cos(small.theta * kDegToRad);
  const double s = std::sin(small.theta * kDegToRad);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> du(-0.5 * small.w, 0.5 * small.w);
  std::uniform_real_distribution<double> dv(-0.5 * small.h, 0.5 * small.h);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double u = du(rng);
    const double v = dv(rng);
    const Vec2 p{small.cx + c * u - s * v, small.cy + s * u + c * v};
    if (big_poly.contains(p)) ++hits;
  }
  const double inter = small.area() * double(hits) / double(samples);
  const double uni = small.area() + big.area() - inter;
  return inter / uni;
}

NaiveReport naive_evaluate(const std::vector<FrameGroundTruth>& gt_frames,
                           const std::vector<DetectionRecord>& detections,
                           const EvalConfig& config) {
  config.validate();
  const std::size_t n_buckets = config.range_edges.size() - 1;
  const std::size_t n_thresholds = config.iou_thresholds.size();
  NaiveReport report;
  report.cells.assign(
      3, std::vector<std::vector<NaiveCell>>(n_buckets + 1,
                                             std::vector<NaiveCell>(n_thresholds)));

  for (std::size_t diff = 0; diff < 3; ++diff) {
    for (std::size_t b = 0; b < n_buckets; ++b) {
      for (std::size_t t = 0; t < n_thresholds; ++t) {
        NaiveCell& cell = report.cells[diff][b][t];
        std::vector<NaivePoint> points;
        for (const FrameGroundTruth& frame : gt_frames) {
          std::vector<const RotatedBox*> targets, neutrals;
          for (const GroundTruthObject& o : frame.objects) {
            if (naive_bucket(o.box.cx, config.range_edges) != int(b)) continue;
            if (std::size_t(naive_difficulty(o, config.difficulty)) <= diff) {
              targets.push_back(&o.box);
              ++cell.gt_count;
            } else {
              neutrals.push_back(&o.box);
            }
          }
          std::vector<const RotatedBox*> dets;
          for (const DetectionRecord& d : detections) {
            if (d.frame_id != frame.frame_id) continue;
            if (naive_bucket(d.box.cx, config.range_edges) != int(b)) continue;
            dets.push_back(&d.box);
          }
          naive_match(dets, targets, neutrals, config.iou_thresholds[t], points);
        }
        cell.ap = naive_ap(points, cell.gt_count);
      }
    }
    for (std::size_t t = 0; t < n_thresholds; ++t) {
      NaiveCell& all = report.cells[diff][n_buckets][t];
      double weighted = 0.0;
      std::size_t total_gt = 0;
      for (std::size_t b = 0; b < n_buckets; ++b) {
        const NaiveCell& cell = report.cells[diff][b][t];
        all.gt_count += cell.gt_count;
        if (cell.ap) {
          weighted += double(cell.gt_count) * *cell.ap;
          total_gt += cell.gt_count;
        }
      }
      if (total_gt > 0) all.ap = weighted / double(total_gt);
    }
  }
  return report;
}

SelfCheckResult run_selfcheck(std::uint64_t seed) {
  SelfCheckResult result;
  result.passed = true;
  auto add = [&](bool ok, const std::string& what) {
    result.summary += ok ? "[ok] " : "[FAIL] ";
    result.summary += what;
    result.summary += '\n';
    result.passed = result.passed && ok;
  };

  // Fixed analytic cases.
  {
    const RotatedBox sq{0, 0, 2, 2, 0};
    const RotatedBox sq45{0, 0, 2, 2, 45};
    const RotatedBox cross_a{0, 0, 4, 2, 0};
    const RotatedBox cross_b{0, 0, 4, 2, 90};
    const RotatedBox far_away{20, 0, 2, 2, 0};
    const RotatedBox touching{2, 0, 2, 2, 0};
    const bool ok = rotated_iou(sq, sq) == 1.0 &&
                    std::abs(rotated_iou(sq, sq45) - 1.0 / std::sqrt(2.0)) < 1e-12 &&
                    std::abs(rotated_iou(cross_a, cross_b) - 1.0 / 3.0) < 1e-12 &&
                    rotated_iou(sq, far_away) == 0.0 &&
                    rotated_iou(sq, touching) == 0.0;
    add(ok, "analytic IoU identities");
  }

  // Monte-Carlo agreement on random overlapping pairs.
  {
    std::mt19937_64 rng(seed * 2654435761u + 1);
    double worst = 0.0;
    for (int i = 0; i < 60; ++i) {
      const RotatedBox a = random_box(rng);
      const RotatedBox b = jittered(a, 0.4, rng);
      const double exact = rotated_iou(a, b);
      const double mc = mc_rotated_iou(a, b, 100000, rng());
      worst = std::max(worst, std::abs(exact - mc));
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "analytic vs Monte-Carlo IoU, 60 pairs (max err %.4f)", worst);
    add(worst <= 0.01, detail);
  }

  // Evaluator agreement on random micro-datasets.
  {
    std::mt19937_64 rng(seed * 2654435761u + 2);
    bool ok = true;
    for (int trial = 0; trial < 40 && ok; ++trial) {
      std::vector<FrameGroundTruth> frames;
      std::vector<DetectionRecord> dets;
      std::uniform_int_distribution<int> n_gt(0, 5);
      std::uniform_real_distribution<double> conf(0.05, 1.0);
      std::uniform_real_distribution<double> px_height(10.0, 60.0);
      std::uniform_int_distribution<int> occ(0, 3);
      std::uniform_real_distribution<double> trunc(0.0, 0.6);
      for (int f = 0; f < 3; ++f) {
        FrameGroundTruth frame;
        frame.frame_id = "f" + std::to_string(f);
        const int n = n_gt(rng);
        for (int g = 0; g < n; ++g) {
          GroundTruthObject o;
          o.box = random_box(rng);
          o.bbox2d = {0.0, 0.0, 10.0, px_height(rng)};
          o.occlusion = occ(rng);
          o.truncation = trunc(rng);
          frame.objects.push_back(o);
          if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.8) {
            DetectionRecord d;
            d.frame_id = frame.frame_id;
            d.box = jittered(o.box, 0.25, rng);
            d.box.confidence = conf(rng);
            dets.push_back(d);
          }
          if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.3) {
            DetectionRecord d;
            d.frame_id = frame.frame_id;
            d.box = random_box(rng);
            d.box.confidence = conf(rng);
            dets.push_back(d);
          }
        }
        frames.push_back(std::move(frame));
      }
      const EvalConfig config;
      const EvalReport fast = evaluate(frames, dets, config);
      const NaiveReport slow = naive_evaluate(frames, dets, config);
      for (std::size_t d = 0; d < 3 && ok; ++d) {
        for (std::size_t b = 0; b < fast.cells[d].size() && ok; ++b) {
          for (std::size_t t = 0; t < fast.cells[d][b].size() && ok; ++t) {
            const EvalCell& fc = fast.cells[d][b][t];
            const NaiveCell& nc = slow.cells[d][b][t];
            ok = fc.gt_count == nc.gt_count && fc.ap.has_value() == nc.ap.has_value() &&
                 (!fc.ap || *fc.ap == *nc.ap);
          }
        }
      }
    }
    add(ok, "evaluator vs brute-force scoring, 40 micro-datasets");
  }

  return result;
}

}  // namespace bevkit::oracle
