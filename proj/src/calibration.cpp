// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/calibration.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {

void check_orthonormal(const Eigen::Matrix3d& r, const char* name) {
  const double err = (r.transpose() * r - Eigen::Matrix3d::Identity())
                         .cwiseAbs()
                         .maxCoeff();
  if (err > 1e-6) {
    throw ConfigError(std::string(name) + " is not orthonormal (error " +
                      std::to_string(err) + ")");
  }
}

std::vector<double> parse_values(const std::string& rest, const std::string& key,
                                 std::size_t expected) {
  std::istringstream in(rest);
  std::vector<double> vals;
  double v = 0.0;
  while (in >> v) vals.push_back(v);
  if (vals.size() != expected) {
    throw ParseError("calibration key " + key + " expects " +
                     std::to_string(expected) + " values, got " +
                     std::to_string(vals.size()));
  }
  return vals;
}

std::string format_values(const double* data, std::size_t n) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "%.12e", data[i]);
    out += ' ';
    out += buf;
  }
  return out;
}

}  // namespace

void Calibration::validate() const {
  check_orthonormal(rect, "R0_rect");
  check_orthonormal(velo_to_cam.leftCols<3>(), "Tr_velo_to_cam rotation");
  if (image_width <= 0 || image_height <= 0) {
    throw ConfigError("calibration image size must be positive");
  }
}

Eigen::Vector3d Calibration::sensor_to_rect(const Eigen::Vector3d& p) const {
  return rect * (velo_to_cam.leftCols<3>() * p + velo_to_cam.col(3));
}

Eigen::Vector3d Calibration::rect_to_sensor(const Eigen::Vector3d& p) const {
  const Eigen::Vector3d cam = rect.inverse() * p;
  return velo_to_cam.leftCols<3>().inverse() * (cam - velo_to_cam.col(3));
}

Calibration::ImagePoint Calibration::project(const Eigen::Vector3d& sensor_point) const {
  const Eigen::Vector3d r = sensor_to_rect(sensor_point);
  const Eigen::Vector4d h(r.x(), r.y(), r.z(), 1.0);
  const Eigen::Vector3d img = projection * h;
  ImagePoint out;
  out.depth = img.z();
  if (img.z() != 0.0) {
    out.u = img.x() / img.z();
    out.v = img.y() / img.z();
  }
  return out;
}

bool Calibration::in_image(const ImagePoint& p) const {
  return p.depth > 0.0 && p.u >= 0.0 && p.u < image_width && p.v >= 0.0 &&
         p.v < image_height;
}

Calibration parse_calibration(const std::string& text) {
  Calibration calib;
  bool have_p2 = false, have_rect = false, have_tr = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos) {
      throw ParseError("calibration line has no key: " + line);
    }
    const std::string key = line.substr(0, colon);
    const std::string rest = line.substr(colon + 1);
    if (key == "P2") {
      const auto v = parse_values(rest, key, 12);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) calib.projection(r, c) = v[r * 4 + c];
      have_p2 = true;
    } else if (key == "R0_rect") {
      const auto v = parse_values(rest, key, 9);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) calib.rect(r, c) = v[r * 3 + c];
      have_rect = true;
    } else if (key == "Tr_velo_to_cam") {
      const auto v = parse_values(rest, key, 12);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) calib.velo_to_cam(r, c) = v[r * 4 + c];
      have_tr = true;
    } else if (key == "image_size") {
      const auto v = parse_values(rest, key, 2);
      calib.image_width = int(v[0]);
      calib.image_height = int(v[1]);
    }
    // Other keys (P0, P1, P3, Tr_imu_to_velo, ...) are ignored.
  }
  if (!have_p2 || !have_rect || !have_tr) {
    throw ParseError("calibration is missing P2, R0_rect or Tr_velo_to_cam");
  }
  calib.validate();
  return calib;
}

std::string write_calibration(const Calibration& calib) {
  std::string out;
  out += "P2:" + format_values(Eigen::Matrix<double, 3, 4, Eigen::RowMajor>(
                                   calib.projection)
                                   .data(),
                               12) +
         "\n";
  out += "R0_rect:" +
         format_values(Eigen::Matrix<double, 3, 3, Eigen::RowMajor>(calib.rect).data(), 9) +
         "\n";
  out += "Tr_velo_to_cam:" +
         format_values(Eigen::Matrix<double, 3, 4, Eigen::RowMajor>(
                           calib.velo_to_cam)
                           .data(),
                       12) +
         "\n";
  out += "image_size: " + std::to_string(calib.image_width) + " " +
         std::to_string(calib.image_height) + "\n";
  return out;
}

Calibration load_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open calibration file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_calibration(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_calibration(const Calibration& calib, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write calibration file: " + path.string());
  out << write_calibration(calib);
}

Calibration default_calibration() {
  Calibration c;
  // Camera axes: x right (-y sensor), y down (-z sensor), z forward (+x sensor).
  c.velo_to_cam << 0, -1, 0, 0,
                   0, 0, -1, 0,
                   1, 0, 0, 0;
  c.rect = Eigen::Matrix3d::Identity();
  const double f = 721.5377;
  c.projection << f, 0, 609.5593, 0,
                  0, f, 172.854, 0,
                  0, 0, 1, 0;
  c.image_width = 1242;
  c.image_height = 375;
  return c;
}

}  // namespace bevkit
