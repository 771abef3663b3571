// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/labels.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kDegToRad = std::numbers::pi / 180.0;

double to_number(const std::string& token, int line_no) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) {
    throw ParseError("label line " + std::to_string(line_no) +
                     ": bad number '" + token + "'");
  }
  return v;
}

std::string format_car(const GroundTruthObject& o, const Calibration& calib) {
  // Label location is the bottom center of the object in the rectified
  // camera frame.
  const Eigen::Vector3d cam = calib.sensor_to_rect(Eigen::Vector3d(
      o.box.cx, o.box.cy, o.z_center - 0.5 * o.z_height));
  const double ry = (-o.box.theta - 90.0) * kDegToRad;
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "Car %.2f %d %.6f %.2f %.2f %.2f %.2f "
                "%.6f %.6f %.6f %.6f %.6f %.6f %.6f\n",
                o.truncation, o.occlusion, o.alpha, o.bbox2d.left, o.bbox2d.top,
                o.bbox2d.right, o.bbox2d.bottom, o.z_height, o.box.h, o.box.w,
                cam.x(), cam.y(), cam.z(), ry);
  return buf;
}

std::string format_dont_care(const ImageBox2D& b) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "DontCare -1 -1 -10 %.2f %.2f %.2f %.2f "
                "-1 -1 -1 -1000 -1000 -1000 -10\n",
                b.left, b.top, b.right, b.bottom);
  return buf;
}

}  // namespace

LabelFile parse_labels(const std::string& text, const Calibration& calib) {
  LabelFile out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 15 && tok.size() != 16) {
      throw ParseError("label line " + std::to_string(line_no) +
                       ": expected 15 or 16 fields, got " +
                       std::to_string(tok.size()));
    }
    auto num = [&](std::size_t i) { return to_number(tok[i], line_no); };
    if (tok[0] == "DontCare") {
      out.dont_care.push_back({num(4), num(5), num(6), num(7)});
      continue;
    }
    if (tok[0] != "Car") continue;

    GroundTruthObject o;
    o.truncation = num(1);
    o.occlusion = int(std::lround(num(2)));
    o.alpha = num(3);
    o.bbox2d = {num(4), num(5), num(6), num(7)};
    const double dim_h = num(8);
    const double dim_w = num(9);
    const double dim_l = num(10);
    const Eigen::Vector3d cam(num(11), num(12), num(13));
    const double ry = num(14);

    const Eigen::Vector3d sensor = calib.rect_to_sensor(cam);
    RotatedBox box;
    box.cx = sensor.x();
    box.cy = sensor.y();
    box.w = dim_l;
    box.h = dim_w;
    // Camera yaw turns about the down axis; in the sensor ground plane that
    // flips sign and picks up the 90-degree axis difference.
    box.theta = -ry * kRadToDeg - 90.0;
    o.box = canonicalize(box);
    o.z_height = dim_h;
    o.z_center = sensor.z() + 0.5 * dim_h;
    out.cars.push_back(o);
  }
  return out;
}

std::string write_labels(const LabelFile& labels, const Calibration& calib) {
  std::string out;
  for (const GroundTruthObject& o : labels.cars) out += format_car(o, calib);
  for (const ImageBox2D& b : labels.dont_care) out += format_dont_care(b);
  return out;
}

LabelFile load_labels(const std::filesystem::path& path, const Calibration& calib) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open label file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_labels(buf.str(), calib);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_labels(const LabelFile& labels, const Calibration& calib,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write label file: " + path.string());
  out << write_labels(labels, calib);
}

}  // namespace bevkit
