// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/dataset.hpp"

#include <algorithm>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace fs = std::filesystem;

std::vector<FrameRef> list_frames(const fs::path& root) {
  const fs::path cloud_dir = root / "velodyne";
  if (!fs::is_directory(cloud_dir)) {
    throw DataError("dataset has no velodyne directory: " + cloud_dir.string());
  }
  std::vector<FrameRef> frames;
  for (const auto& entry : fs::directory_iterator(cloud_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".bin") continue;
    FrameRef ref;
    ref.id = entry.path().stem().string();
    ref.cloud_path = entry.path();
    const fs::path label = root / "label_2" / (ref.id + ".txt");
    const fs::path calib = root / "calib" / (ref.id + ".txt");
    if (fs::is_regular_file(label)) ref.label_path = label;
    if (fs::is_regular_file(calib)) ref.calib_path = calib;
    frames.push_back(std::move(ref));
  }
  if (frames.empty()) {
    throw DataError("dataset has no .bin clouds under " + cloud_dir.string());
  }
  std::sort(frames.begin(), frames.end(),
            [](const FrameRef& a, const FrameRef& b) { return a.id < b.id; });
  return frames;
}

Frame load_frame(const FrameRef& ref) {
  Frame f;
  f.id = ref.id;
  f.cloud = load_point_cloud(ref.cloud_path);
  f.cloud.frame_id = ref.id;
  if (!ref.calib_path.empty()) {
    f.calib = load_calibration(ref.calib_path);
    f.has_calib = true;
  } else {
    f.calib = default_calibration();
  }
  if (!ref.label_path.empty()) {
    f.labels = load_labels(ref.label_path, f.calib);
    f.has_labels = true;
  }
  return f;
}

std::vector<fs::path> write_frame(const fs::path& root, const std::string& id,
                                  const PointCloud& cloud, const LabelFile& labels,
                                  const Calibration& calib) {
  fs::create_directories(root / "velodyne");
  fs::create_directories(root / "label_2");
  fs::create_directories(root / "calib");
  const fs::path cloud_path = root / "velodyne" / (id + ".bin");
  const fs::path label_path = root / "label_2" / (id + ".txt");
  const fs::path calib_path = root / "calib" / (id + ".txt");
  save_point_cloud(cloud, cloud_path);
  save_labels(labels, calib, label_path);
  save_calibration(calib, calib_path);
  return {cloud_path, label_path, calib_path};
}

}  // namespace bevkit
