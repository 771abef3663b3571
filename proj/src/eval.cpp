// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {

int bucket_of(double cx, const std::vector<double>& edges) {
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (cx >= edges[i] && cx < edges[i + 1]) return int(i);
  }
  return -1;
}

std::string bucket_name(const EvalConfig& cfg, std::size_t bucket) {
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return std::string(buf);
  };
  if (bucket < cfg.bucket_count()) {
    return fmt(cfg.range_edges[bucket]) + "-" + fmt(cfg.range_edges[bucket + 1]);
  }
  return fmt(cfg.range_edges.front()) + "-" + fmt(cfg.range_edges.back());
}

}  // namespace

Difficulty classify_difficulty(const GroundTruthObject& gt,
                               const DifficultyTable& table) {
  for (std::size_t i = 0; i < table.levels.size(); ++i) {
    const DifficultyRule& r = table.levels[i];
    if (gt.bbox2d_height() >= r.min_bbox_height && gt.occlusion <= r.max_occlusion &&
        gt.truncation <= r.max_truncation) {
      return Difficulty(i);
    }
  }
  return Difficulty::kIgnored;
}

std::string difficulty_name(Difficulty d) {
  switch (d) {
    case Difficulty::kEasy: return "easy";
    case Difficulty::kModerate: return "moderate";
    case Difficulty::kHard: return "hard";
    case Difficulty::kIgnored: return "ignored";
  }
  return "?";
}

MatchResult match_detections(const std::vector<RotatedBox>& dets,
                             const std::vector<GtRole>& gts, double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw ConfigError("match iou_threshold must lie in (0, 1]");
  }
  MatchResult result;
  result.outcomes.assign(dets.size(), DetOutcome::kFalsePositive);
  result.gt_matched.assign(gts.size(), false);

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].confidence > dets[b].confidence;
  });

  for (std::size_t d : order) {
    int best_target = -1, best_neutral = -1;
    double best_target_iou = 0.0, best_neutral_iou = 0.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (result.gt_matched[g]) continue;
      const double iou = rotated_iou(dets[d], gts[g].box);
      if (iou < iou_threshold) continue;
      if (!gts[g].neutral && iou > best_target_iou) {
        best_target_iou = iou;
        best_target = int(g);
      } else if (gts[g].neutral && iou > best_neutral_iou) {
        best_neutral_iou = iou;
        best_neutral = int(g);
      }
    }
    if (best_target >= 0) {
      result.outcomes[d] = DetOutcome::kTruePositive;
      result.gt_matched[std::size_t(best_target)] = true;
    } else if (best_neutral >= 0) {
      result.outcomes[d] = DetOutcome::kNeutral;
      result.gt_matched[std::size_t(best_neutral)] = true;
    }
  }
  return result;
}

std::optional<double> average_precision_41(std::vector<DetPoint> points,
                                           std::size_t gt_count, PrCurve* curve) {
  if (curve) {
    curve->recall.clear();
    curve->precision.clear();
  }
  if (gt_count == 0) return std::nullopt;

  std::stable_sort(points.begin(), points.end(),
                   [](const DetPoint& a, const DetPoint& b) {
                     return a.confidence > b.confidence;
                   });

  // One curve point per distinct confidence cut: the cut at confidence c
  // admits every detection scoring at least c.
  PrCurve local;
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < points.size();) {
    std::size_t j = i;
    while (j < points.size() && points[j].confidence == points[i].confidence) {
      points[j].true_positive ? ++tp : ++fp;
      ++j;
    }
    local.recall.push_back(double(tp) / double(gt_count));
    local.precision.push_back(double(tp) / double(tp + fp));
    i = j;
  }

  double sum = 0.0;
  for (int k = 0; k < kRecallSamples; ++k) {
    const double r = double(k) / double(kRecallSamples - 1);
    double best = 0.0;
    for (std::size_t i = 0; i < local.recall.size(); ++i) {
      if (local.recall[i] >= r) best = std::max(best, local.precision[i]);
    }
    sum += best;
  }
  if (curve) *curve = std::move(local);
  return 100.0 * sum / double(kRecallSamples);
}

void EvalConfig::validate() const {
  if (iou_thresholds.empty()) throw ConfigError("need at least one IoU threshold");
  for (double t : iou_thresholds) {
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("IoU thresholds must lie in (0, 1]");
  }
  if (range_edges.size() < 2) throw ConfigError("need at least two range edges");
  for (std::size_t i = 0; i + 1 < range_edges.size(); ++i) {
    if (!(range_edges[i] < range_edges[i + 1])) {
      throw ConfigError("range edges must increase strictly");
    }
  }
}

EvalReport evaluate(const std::vector<FrameGroundTruth>& gt_frames,
                    const std::vector<DetectionRecord>& detections,
                    const EvalConfig& config) {
  config.validate();

  EvalReport report;
  report.config = config;

  std::map<std::string, std::size_t> frame_index;
  for (std::size_t i = 0; i < gt_frames.size(); ++i) {
    if (!frame_index.emplace(gt_frames[i].frame_id, i).second) {
      throw DataError("duplicate ground-truth frame id: " + gt_frames[i].frame_id);
    }
  }

  // Detections grouped per frame, keeping input order within a frame.
  std::vector<std::vector<const DetectionRecord*>> frame_dets(gt_frames.size());
  std::set<std::string> unknown;
  for (const DetectionRecord& d : detections) {
    const auto it = frame_index.find(d.frame_id);
    if (it == frame_index.end()) {
      if (unknown.insert(d.frame_id).second) {
        report.warnings.push_back("detections reference unknown frame '" +
                                  d.frame_id + "'; skipped");
      }
      continue;
    }
    frame_dets[it->second].push_back(&d);
  }

  const std::size_t n_buckets = config.bucket_count();
  const std::size_t n_thresholds = config.iou_thresholds.size();

  // Per-object difficulty and bucket are fixed across the sweep.
  std::vector<std::vector<Difficulty>> gt_difficulty(gt_frames.size());
  std::vector<std::vector<int>> gt_bucket(gt_frames.size());
  for (std::size_t f = 0; f < gt_frames.size(); ++f) {
    for (const GroundTruthObject& o : gt_frames[f].objects) {
      gt_difficulty[f].push_back(classify_difficulty(o, config.difficulty));
      gt_bucket[f].push_back(bucket_of(o.box.cx, config.range_edges));
    }
  }

  report.cells.assign(
      3, std::vector<std::vector<EvalCell>>(n_buckets + 1,
                                            std::vector<EvalCell>(n_thresholds)));

  for (std::size_t diff = 0; diff < 3; ++diff) {
    for (std::size_t b = 0; b < n_buckets; ++b) {
      for (std::size_t t = 0; t < n_thresholds; ++t) {
        EvalCell& cell = report.cells[diff][b][t];
        std::vector<DetPoint> points;
        for (std::size_t f = 0; f < gt_frames.size(); ++f) {
          std::vector<GtRole> roles;
          for (std::size_t g = 0; g < gt_frames[f].objects.size(); ++g) {
            if (gt_bucket[f][g] != int(b)) continue;
            GtRole role;
            role.box = gt_frames[f].objects[g].box;
            role.neutral = std::size_t(gt_difficulty[f][g]) > diff;
            roles.push_back(role);
            if (!role.neutral) ++cell.gt_count;
          }
          std::vector<RotatedBox> dets;
          for (const DetectionRecord* d : frame_dets[f]) {
            if (bucket_of(d->box.cx, config.range_edges) == int(b)) {
              dets.push_back(d->box);
            }
          }
          cell.det_count += dets.size();
          if (dets.empty()) continue;
          const MatchResult match =
              match_detections(dets, roles, config.iou_thresholds[t]);
          for (std::size_t d = 0; d < dets.size(); ++d) {
            if (match.outcomes[d] == DetOutcome::kNeutral) continue;
            points.push_back(
                {dets[d].confidence,
                 match.outcomes[d] == DetOutcome::kTruePositive});
          }
        }
        cell.ap = average_precision_41(std::move(points), cell.gt_count, &cell.curve);
      }
    }
    // Combined bucket: gt-count-weighted mean over buckets with ground truth.
    for (std::size_t t = 0; t < n_thresholds; ++t) {
      EvalCell& all = report.cells[diff][n_buckets][t];
      double weighted = 0.0;
      std::size_t total_gt = 0;
      for (std::size_t b = 0; b < n_buckets; ++b) {
        const EvalCell& cell = report.cells[diff][b][t];
        all.gt_count += cell.gt_count;
        all.det_count += cell.det_count;
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

std::string format_report(const EvalReport& report) {
  std::string out;
  char buf[128];
  const std::size_t n_buckets = report.config.bucket_count();
  for (std::size_t t = 0; t < report.config.iou_thresholds.size(); ++t) {
    std::snprintf(buf, sizeof(buf), "AP at IoU %.2f\n",
                  report.config.iou_thresholds[t]);
    out += buf;
    out += "  difficulty";
    for (std::size_t b = 0; b <= n_buckets; ++b) {
      std::snprintf(buf, sizeof(buf), " %12s", bucket_name(report.config, b).c_str());
      out += buf;
    }
    out += "\n";
    for (std::size_t diff = 0; diff < 3; ++diff) {
      std::snprintf(buf, sizeof(buf), "  %-10s",
                    difficulty_name(Difficulty(diff)).c_str());
      out += buf;
      for (std::size_t b = 0; b <= n_buckets; ++b) {
        const EvalCell& cell = report.cell(diff, b, t);
        if (cell.ap) {
          std::snprintf(buf, sizeof(buf), " %12.2f", *cell.ap);
        } else {
          std::snprintf(buf, sizeof(buf), " %12s", "absent");
        }
        out += buf;
      }
      out += "\n";
    }
  }
  for (const std::string& w : report.warnings) out += "warning: " + w + "\n";
  return out;
}

std::string report_json(const EvalReport& report) {
  nlohmann::json j;
  j["iou_thresholds"] = report.config.iou_thresholds;
  j["range_edges"] = report.config.range_edges;
  j["warnings"] = report.warnings;
  nlohmann::json results = nlohmann::json::array();
  const std::size_t n_buckets = report.config.bucket_count();
  for (std::size_t t = 0; t < report.config.iou_thresholds.size(); ++t) {
    for (std::size_t diff = 0; diff < 3; ++diff) {
      for (std::size_t b = 0; b <= n_buckets; ++b) {
        const EvalCell& cell = report.cell(diff, b, t);
        nlohmann::json r;
        r["iou"] = report.config.iou_thresholds[t];
        r["difficulty"] = difficulty_name(Difficulty(diff));
        r["bucket"] = bucket_name(report.config, b);
        r["combined"] = b == n_buckets;
        if (cell.ap) {
          r["ap"] = *cell.ap;
        } else {
          r["ap"] = nullptr;
        }
        r["gt_count"] = cell.gt_count;
        r["det_count"] = cell.det_count;
        results.push_back(std::move(r));
      }
    }
  }
  j["results"] = std::move(results);
  return j.dump(2) + "\n";
}

std::string pr_curve_csv(const EvalReport& report) {
  std::string out = "iou,difficulty,bucket,recall,precision\n";
  char buf[160];
  const std::size_t n_buckets = report.config.bucket_count();
  for (std::size_t t = 0; t < report.config.iou_thresholds.size(); ++t) {
    for (std::size_t diff = 0; diff < 3; ++diff) {
      for (std::size_t b = 0; b < n_buckets; ++b) {
        const EvalCell& cell = report.cell(diff, b, t);
        for (std::size_t i = 0; i < cell.curve.recall.size(); ++i) {
          std::snprintf(buf, sizeof(buf), "%.2f,%s,%s,%.9f,%.9f\n",
                        report.config.iou_thresholds[t],
                        difficulty_name(Difficulty(diff)).c_str(),
                        bucket_name(report.config, b).c_str(),
                        cell.curve.recall[i], cell.curve.precision[i]);
          out += buf;
        }
      }
    }
  }
  return out;
}

}  // namespace bevkit
