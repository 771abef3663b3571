// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/cli.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bevkit/config.hpp"
#include "bevkit/dataset.hpp"
#include "bevkit/detections.hpp"
#include "bevkit/errors.hpp"
#include "bevkit/eval.hpp"
#include "bevkit/lidar_sim.hpp"
#include "bevkit/oracle.hpp"
#include "bevkit/png_io.hpp"
#include "bevkit/range_split.hpp"

namespace bevkit::cli {

namespace {

namespace fs = std::filesystem;

// Files created by the running command; discarded when it fails so a bad
// run leaves no partial outputs behind.
class OutputTracker {
 public:
  void add(const fs::path& p) {
    std::lock_guard<std::mutex> lock(mutex_);
    paths_.push_back(p);
  }
  void add_all(const std::vector<fs::path>& ps) {
    std::lock_guard<std::mutex> lock(mutex_);
    paths_.insert(paths_.end(), ps.begin(), ps.end());
  }
  void discard_all() {
    std::lock_guard<std::mutex> lock(mutex_);
    for (const fs::path& p : paths_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    paths_.clear();
  }

 private:
  std::mutex mutex_;
  std::vector<fs::path> paths_;
};

void parallel_frames(std::size_t n, int workers,
                     const std::function<void(std::size_t)>& fn) {
  std::size_t n_threads = workers > 0
                              ? std::size_t(workers)
                              : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min(n_threads, n);
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

FieldOfView make_fov(const ToolConfig& cfg, const Frame& frame) {
  if (cfg.fov.mode == "none") return FieldOfView::none();
  if (cfg.fov.mode == "wedge") {
    return FieldOfView::wedge(cfg.fov.wedge_half_angle_deg);
  }
  if (cfg.fov.mode == "camera") {
    if (!frame.has_calib) {
      throw DataError("frame " + frame.id +
                      " has no calibration but fov.mode is camera");
    }
    return FieldOfView::camera(frame.calib, cfg.fov.sample_height);
  }
  // auto
  return frame.has_calib ? FieldOfView::camera(frame.calib, cfg.fov.sample_height)
                         : FieldOfView::wedge(cfg.fov.wedge_half_angle_deg);
}

std::string frame_name(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06zu", index);
  return buf;
}

std::map<std::string, std::vector<RotatedBox>> group_by_frame(
    const std::vector<DetectionRecord>& dets) {
  std::map<std::string, std::vector<RotatedBox>> groups;
  for (const DetectionRecord& d : dets) groups[d.frame_id].push_back(d.box);
  return groups;
}

std::vector<DetectionRecord> ungroup(
    const std::map<std::string, std::vector<RotatedBox>>& groups) {
  std::vector<DetectionRecord> out;
  for (const auto& [frame_id, boxes] : groups) {
    for (const RotatedBox& b : boxes) out.push_back({frame_id, b});
  }
  return out;
}

int cmd_simulate(const ToolConfig& cfg, const std::vector<std::string>& scenes,
                 const fs::path& out_dir, std::size_t start_index,
                 OutputTracker& outputs) {
  const Calibration calib = default_calibration();
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    const Scene scene = load_scene(scenes[i]);
    const ScanResult scan =
        simulate_scan(scene, cfg.sensor, cfg.seed + i, &calib);
    LabelFile labels;
    labels.cars = scan.objects;
    const std::string id = frame_name(start_index + i);
    outputs.add_all(write_frame(out_dir, id, scan.cloud, labels, calib));
    std::printf("wrote frame %s: %zu points, %zu objects\n", id.c_str(),
                scan.cloud.points.size(), scan.objects.size());
  }
  return 0;
}

int cmd_stats(const ToolConfig& cfg, const fs::path& scene_path,
              const std::vector<double>& distances, const fs::path& out_path,
              OutputTracker& outputs) {
  const Scene base = load_scene(scene_path);
  if (base.cuboids.empty()) {
    throw DataError("stats needs a scene with at least one box");
  }
  for (const double d : distances) {
    if (!(d > 0.0)) throw ConfigError("distances must be positive");
  }
  std::string csv =
      "distance_m,point_count,median_horizontal_gap_m,median_vertical_gap_m\n";
  for (const double d : distances) {
    Scene scene = base;
    scene.cuboids[0].cx = d;  // slide the measured box along the forward axis
    const ScanResult scan = simulate_scan(scene, cfg.sensor, cfg.seed);
    const SpacingStats stats =
        spacing_stats(scan.cloud, scan.objects[0].box, cfg.sensor);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g,%zu", d, stats.point_count);
    csv += buf;
    for (const auto& gap :
         {stats.median_horizontal_gap, stats.median_vertical_gap}) {
      if (gap) {
        std::snprintf(buf, sizeof(buf), ",%.6f", *gap);
        csv += buf;
      } else {
        csv += ",";
      }
    }
    csv += "\n";
  }
  if (out_path.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + out_path.string());
    out << csv;
    outputs.add(out_path);
  }
  return 0;
}

int cmd_rasterize(const ToolConfig& cfg, const fs::path& data_dir,
                  const fs::path& out_dir, bool png, OutputTracker& outputs) {
  const std::vector<FrameRef> refs = list_frames(data_dir);
  fs::create_directories(out_dir);
  std::mutex print_mutex;
  parallel_frames(refs.size(), cfg.workers, [&](std::size_t i) {
    const Frame frame = load_frame(refs[i]);
    const PointCloud cropped = crop_filter(frame.cloud, cfg.crop);
    const auto mask = make_fov_mask(cfg.grid, make_fov(cfg, frame));
    const BevImage img =
        rasterize(cropped, cfg.encoding, cfg.grid, mask, cfg.encoder);
    const fs::path raster_path = out_dir / (frame.id + ".bev");
    save_raster(img, raster_path);
    outputs.add(raster_path);
    if (png) {
      const fs::path png_path = out_dir / (frame.id + ".png");
      render_png(img, png_path);
      outputs.add(png_path);
    }
    std::lock_guard<std::mutex> lock(print_mutex);
    std::printf("rasterized %s: %zu points in crop\n", frame.id.c_str(),
                cropped.points.size());
  });
  return 0;
}

int cmd_split(const ToolConfig& cfg, const fs::path& data_dir,
              const fs::path& out_dir, OutputTracker& outputs) {
  const std::vector<FrameRef> refs = list_frames(data_dir);
  fs::create_directories(out_dir / "inside");
  fs::create_directories(out_dir / "outside");
  std::mutex print_mutex;
  parallel_frames(refs.size(), cfg.workers, [&](std::size_t i) {
    const Frame frame = load_frame(refs[i]);
    if (!frame.has_labels) {
      throw DataError("frame " + frame.id + " has no labels; split needs them");
    }
    const PointCloud cropped = crop_filter(frame.cloud, cfg.crop);
    const auto mask = make_fov_mask(cfg.grid, make_fov(cfg, frame));
    const SplitFrame split =
        split_frame(cropped, frame.labels.cars, cfg.range_split, cfg.encoding,
                    cfg.grid, mask, cfg.encoder);
    for (const char* branch : {"inside", "outside"}) {
      const RangeSample& sample =
          branch == std::string("inside") ? split.inside : split.outside;
      const fs::path raster_path = out_dir / branch / (frame.id + ".bev");
      save_raster(sample.image, raster_path);
      outputs.add(raster_path);
      LabelFile branch_labels;
      branch_labels.cars = sample.labels;
      const fs::path label_path = out_dir / branch / (frame.id + ".txt");
      save_labels(branch_labels, frame.calib, label_path);
      outputs.add(label_path);
    }
    std::lock_guard<std::mutex> lock(print_mutex);
    std::printf("split %s: %zu near, %zu far objects\n", frame.id.c_str(),
                split.inside.labels.size(), split.outside.labels.size());
  });
  return 0;
}

int cmd_merge(const ToolConfig& cfg, const fs::path& inside_path,
              const fs::path& outside_path, const fs::path& out_path,
              OutputTracker& outputs) {
  const auto inside = group_by_frame(load_detections(inside_path));
  const auto outside = group_by_frame(load_detections(outside_path));
  std::set<std::string> ids;
  for (const auto& [id, _] : inside) ids.insert(id);
  for (const auto& [id, _] : outside) ids.insert(id);
  static const std::vector<RotatedBox> kNone;
  std::map<std::string, std::vector<RotatedBox>> merged;
  for (const std::string& id : ids) {
    const auto a = inside.find(id);
    const auto b = outside.find(id);
    merged[id] = merge_detections(a == inside.end() ? kNone : a->second,
                                  b == outside.end() ? kNone : b->second,
                                  cfg.range_split);
  }
  save_detections(ungroup(merged), out_path);
  outputs.add(out_path);
  return 0;
}

int cmd_nms(const ToolConfig& cfg, const fs::path& dets_path,
            const fs::path& out_path, OutputTracker& outputs) {
  std::map<std::string, std::vector<RotatedBox>> groups =
      group_by_frame(load_detections(dets_path));
  for (auto& [id, boxes] : groups) {
    boxes = nms_rotated(boxes, cfg.nms_iou_threshold);
  }
  save_detections(ungroup(groups), out_path);
  outputs.add(out_path);
  return 0;
}

int cmd_eval(const ToolConfig& cfg, const fs::path& data_dir,
             const fs::path& dets_path, const fs::path& out_dir, bool curves,
             OutputTracker& outputs) {
  std::vector<FrameGroundTruth> gt_frames;
  for (const FrameRef& ref : list_frames(data_dir)) {
    if (ref.label_path.empty()) {
      throw DataError("frame " + ref.id + " has no labels; evaluation needs "
                      "ground truth");
    }
    const Frame frame = load_frame(ref);
    gt_frames.push_back({frame.id, frame.labels.cars});
  }
  const std::vector<DetectionRecord> dets = load_detections(dets_path);
  const EvalReport report = evaluate(gt_frames, dets, cfg.eval);
  std::fputs(format_report(report).c_str(), stdout);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    const fs::path json_path = out_dir / "report.json";
    std::ofstream json_out(json_path, std::ios::trunc);
    if (!json_out) throw DataError("cannot write " + json_path.string());
    json_out << report_json(report);
    outputs.add(json_path);
    if (curves) {
      const fs::path csv_path = out_dir / "pr_curves.csv";
      std::ofstream csv_out(csv_path, std::ios::trunc);
      if (!csv_out) throw DataError("cannot write " + csv_path.string());
      csv_out << pr_curve_csv(report);
      outputs.add(csv_path);
    }
  }
  return 0;
}

int cmd_selfcheck(std::uint64_t seed) {
  const oracle::SelfCheckResult result = oracle::run_selfcheck(seed);
  std::fputs(result.summary.c_str(), stdout);
  if (!result.passed) {
    std::fputs("selfcheck FAILED\n", stdout);
    return 3;
  }
  std::fputs("selfcheck passed\n", stdout);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{
      "bevkit: bird's-eye-view pipeline tools for LiDAR car detection"};
  app.require_subcommand(1);
  const std::string footer =
      "Config file keys and their defaults:\n" + config_json(ToolConfig{});
  app.footer(footer);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (// comments allowed)")
      ->check(CLI::ExistingFile);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Scan scene files into dataset frames");
  sim->footer(footer);
  std::vector<std::string> sim_scenes;
  std::string sim_out;
  std::size_t sim_start = 0;
  double sim_noise = -1.0;
  std::uint64_t sim_seed = 0;
  bool sim_seed_set = false;
  sim->add_option("--scene", sim_scenes, "Scene file, repeatable; one frame each")
      ->required()
      ->check(CLI::ExistingFile);
  sim->add_option("--out", sim_out, "Dataset directory to create")->required();
  sim->add_option("--start-index", sim_start, "First frame number");
  sim->add_option("--noise", sim_noise, "Range noise sigma override, meters");
  sim->add_option("--seed", sim_seed, "Seed override")
      ->each([&](const std::string&) { sim_seed_set = true; });

  // stats
  auto* sts = app.add_subcommand(
      "stats", "Tabulate point count and spacing of one scanned box by range");
  sts->footer(footer);
  std::string sts_scene, sts_out;
  std::vector<double> sts_distances;
  sts->add_option("--scene", sts_scene, "Scene whose first box is measured")
      ->required()
      ->check(CLI::ExistingFile);
  sts->add_option("--distances", sts_distances,
                  "Comma-separated box center distances, meters")
      ->required()
      ->delimiter(',');
  sts->add_option("--out", sts_out, "CSV file instead of stdout");

  // rasterize
  auto* ras = app.add_subcommand("rasterize", "Encode dataset frames as BEV rasters");
  ras->footer(footer);
  std::string ras_data, ras_out, ras_encoding;
  bool ras_png = false;
  int ras_workers = -1;
  ras->add_option("--data", ras_data, "Dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  ras->add_option("--out", ras_out, "Output directory")->required();
  ras->add_option("--encoding", ras_encoding,
                  "max_height3 | binary | multi_height9 | height_intensity_density");
  ras->add_flag("--png", ras_png, "Also render a PNG preview per frame");
  ras->add_option("--workers", ras_workers, "Worker threads (0 = all cores)");

  // split
  auto* spl = app.add_subcommand(
      "split", "Build near/far branch rasters and labels per frame");
  spl->footer(footer);
  std::string spl_data, spl_out, spl_encoding;
  int spl_workers = -1;
  spl->add_option("--data", spl_data, "Dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  spl->add_option("--out", spl_out, "Output directory")->required();
  spl->add_option("--encoding", spl_encoding,
                  "max_height3 | binary | multi_height9 | height_intensity_density");
  spl->add_option("--workers", spl_workers, "Worker threads (0 = all cores)");

  // merge
  auto* mrg = app.add_subcommand(
      "merge", "Merge near/far branch detections at the range boundary");
  mrg->footer(footer);
  std::string mrg_inside, mrg_outside, mrg_out;
  mrg->add_option("--inside", mrg_inside, "Near-branch detections file")
      ->required()
      ->check(CLI::ExistingFile);
  mrg->add_option("--outside", mrg_outside, "Far-branch detections file")
      ->required()
      ->check(CLI::ExistingFile);
  mrg->add_option("--out", mrg_out, "Merged detections file")->required();

  // nms
  auto* nms = app.add_subcommand("nms", "Suppress overlapping detections per frame");
  nms->footer(footer);
  std::string nms_dets, nms_out;
  double nms_iou = -1.0;
  nms->add_option("--dets", nms_dets, "Detections file")
      ->required()
      ->check(CLI::ExistingFile);
  nms->add_option("--out", nms_out, "Output detections file")->required();
  nms->add_option("--iou", nms_iou, "Suppression IoU threshold override");

  // eval
  auto* evl = app.add_subcommand("eval", "Score detections against dataset labels");
  evl->footer(footer);
  std::string evl_data, evl_dets, evl_out;
  bool evl_curves = false;
  evl->add_option("--data", evl_data, "Dataset directory with label_2/")
      ->required()
      ->check(CLI::ExistingDirectory);
  evl->add_option("--dets", evl_dets, "Detections file")
      ->required()
      ->check(CLI::ExistingFile);
  evl->add_option("--out", evl_out, "Report directory (report.json)");
  evl->add_flag("--curves", evl_curves, "Also write pr_curves.csv");

  // selfcheck
  auto* chk = app.add_subcommand(
      "selfcheck", "Cross-check geometry and scoring against reference oracles");
  chk->footer(footer);
  std::uint64_t chk_seed = 0;
  chk->add_option("--seed", chk_seed, "Seed for the randomized checks");

  // config
  auto* cfg_cmd = app.add_subcommand("config", "Print the effective configuration");
  cfg_cmd->footer(footer);
  std::string cfg_out;
  cfg_cmd->add_option("--out", cfg_out, "Write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Collapse the library's exit-code zoo to the documented 0/1 split.
    return app.exit(e) == 0 ? 0 : 1;
  }

  OutputTracker outputs;
  try {
    ToolConfig cfg =
        config_path.empty() ? ToolConfig{} : load_config(config_path);

    if (app.got_subcommand(sim)) {
      if (sim_seed_set) cfg.seed = sim_seed;
      if (sim_noise >= 0.0) cfg.sensor.range_noise_sigma = sim_noise;
      cfg.validate();
      return cmd_simulate(cfg, sim_scenes, sim_out, sim_start, outputs);
    }
    if (app.got_subcommand(sts)) {
      cfg.validate();
      return cmd_stats(cfg, sts_scene, sts_distances, sts_out, outputs);
    }
    if (app.got_subcommand(ras)) {
      if (!ras_encoding.empty()) cfg.encoding = parse_encoding(ras_encoding);
      if (ras_workers >= 0) cfg.workers = ras_workers;
      cfg.validate();
      return cmd_rasterize(cfg, ras_data, ras_out, ras_png, outputs);
    }
    if (app.got_subcommand(spl)) {
      if (!spl_encoding.empty()) cfg.encoding = parse_encoding(spl_encoding);
      if (spl_workers >= 0) cfg.workers = spl_workers;
      cfg.validate();
      return cmd_split(cfg, spl_data, spl_out, outputs);
    }
    if (app.got_subcommand(mrg)) {
      cfg.validate();
      return cmd_merge(cfg, mrg_inside, mrg_outside, mrg_out, outputs);
    }
    if (app.got_subcommand(nms)) {
      if (nms_iou >= 0.0) cfg.nms_iou_threshold = nms_iou;
      cfg.validate();
      return cmd_nms(cfg, nms_dets, nms_out, outputs);
    }
    if (app.got_subcommand(evl)) {
      cfg.validate();
      return cmd_eval(cfg, evl_data, evl_dets, evl_out, evl_curves, outputs);
    }
    if (app.got_subcommand(chk)) {
      return cmd_selfcheck(chk_seed);
    }
    if (app.got_subcommand(cfg_cmd)) {
      cfg.validate();
      const std::string text = config_json(cfg);
      if (cfg_out.empty()) {
        std::fputs(text.c_str(), stdout);
      } else {
        std::ofstream out(cfg_out, std::ios::trunc);
        if (!out) throw DataError("cannot write config to " + cfg_out);
        out << text;
        outputs.add(cfg_out);
      }
      return 0;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    outputs.discard_all();
    return 2;
  }
}

}  // namespace bevkit::cli
