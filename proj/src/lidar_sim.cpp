// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/lidar_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kMinHitRange = 1e-6;

// Containment slack for footprint tests, in cross-product units. Points on
// a cuboid face carry float rounding of a few micrometers at long range;
// this admits them without admitting genuinely outside returns.
constexpr double kFootprintEps = 1e-3;

struct LocalBox {
  double cx, cy, cz;
  double cos_yaw, sin_yaw;
  double half[3];
  double reflectance;
};

LocalBox prepare(const Cuboid& c) {
  LocalBox b;
  b.cx = c.cx;
  b.cy = c.cy;
  b.cz = c.cz;
  b.cos_yaw = std::cos(c.yaw_deg * kDegToRad);
  b.sin_yaw = std::sin(c.yaw_deg * kDegToRad);
  b.half[0] = 0.5 * c.length;
  b.half[1] = 0.5 * c.width;
  b.half[2] = 0.5 * c.height;
  b.reflectance = c.reflectance;
  return b;
}

// Nearest entry distance of the origin ray with direction d, or nothing.
// Rays starting inside a box give no return.
std::optional<double> ray_box_entry(const LocalBox& b, const double d[3]) {
  // Into box frame: rotate by -yaw about z.
  const double ox = -(b.cos_yaw * b.cx + b.sin_yaw * b.cy);
  const double oy = -(-b.sin_yaw * b.cx + b.cos_yaw * b.cy);
  const double oz = -b.cz;
  const double o[3] = {ox, oy, oz};
  const double dl[3] = {b.cos_yaw * d[0] + b.sin_yaw * d[1],
                        -b.sin_yaw * d[0] + b.cos_yaw * d[1], d[2]};
  double tmin = -std::numeric_limits<double>::infinity();
  double tmax = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(dl[i]) < 1e-12) {
      if (o[i] < -b.half[i] || o[i] > b.half[i]) return std::nullopt;
      continue;
    }
    double t1 = (-b.half[i] - o[i]) / dl[i];
    double t2 = (b.half[i] - o[i]) / dl[i];
    if (t1 > t2) std::swap(t1, t2);
    tmin = std::max(tmin, t1);
    tmax = std::min(tmax, t2);
    if (tmin > tmax) return std::nullopt;
  }
  if (tmin < kMinHitRange) return std::nullopt;
  return tmin;
}

double to_number(const std::string& token, int line_no) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) {
    throw ParseError("scene line " + std::to_string(line_no) + ": bad number '" +
                     token + "'");
  }
  return v;
}

double wrap_pi(double a) {
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  while (a < -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

GroundTruthObject make_object(const Cuboid& c, const Calibration& calib) {
  GroundTruthObject o;
  RotatedBox box;
  box.cx = c.cx;
  box.cy = c.cy;
  box.w = c.length;
  box.h = c.width;
  box.theta = c.yaw_deg;
  o.box = canonicalize(box);
  o.z_center = c.cz;
  o.z_height = c.height;
  o.occlusion = 0;

  // Image box from the eight corners; only corners in front of the camera
  // contribute. Fully invisible objects get an empty box and are treated as
  // fully truncated.
  const double cy = std::cos(c.yaw_deg * kDegToRad);
  const double sy = std::sin(c.yaw_deg * kDegToRad);
  double u_min = 0, u_max = 0, v_min = 0, v_max = 0;
  bool any = false;
  for (int i = 0; i < 8; ++i) {
    const double lx = (i & 1 ? 0.5 : -0.5) * c.length;
    const double ly = (i & 2 ? 0.5 : -0.5) * c.width;
    const double lz = (i & 4 ? 0.5 : -0.5) * c.height;
    const Eigen::Vector3d corner(c.cx + cy * lx - sy * ly,
                                 c.cy + sy * lx + cy * ly, c.cz + lz);
    const Calibration::ImagePoint p = calib.project(corner);
    if (p.depth <= 1e-9) continue;
    if (!any) {
      u_min = u_max = p.u;
      v_min = v_max = p.v;
      any = true;
    } else {
      u_min = std::min(u_min, p.u);
      u_max = std::max(u_max, p.u);
      v_min = std::min(v_min, p.v);
      v_max = std::max(v_max, p.v);
    }
  }
  if (!any) {
    o.truncation = 1.0;
  } else {
    const double cl = std::max(u_min, 0.0);
    const double ct = std::max(v_min, 0.0);
    const double cr = std::min(u_max, double(calib.image_width));
    const double cb = std::min(v_max, double(calib.image_height));
    const double raw_area = (u_max - u_min) * (v_max - v_min);
    if (cr <= cl || cb <= ct) {
      o.truncation = 1.0;
    } else {
      o.bbox2d = {cl, ct, cr, cb};
      o.truncation =
          raw_area > 0.0
              ? std::clamp(1.0 - ((cr - cl) * (cb - ct)) / raw_area, 0.0, 1.0)
              : 0.0;
    }
  }

  const Eigen::Vector3d cam = calib.sensor_to_rect(Eigen::Vector3d(c.cx, c.cy, c.cz));
  const double ry = (-o.box.theta - 90.0) * kDegToRad;
  o.alpha = wrap_pi(ry - std::atan2(cam.x(), cam.z()));
  return o;
}

double median(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

void SensorModel::validate() const {
  if (!(horizontal_resolution_deg > 0.0) || !(vertical_resolution_deg > 0.0)) {
    throw ConfigError("sensor angular resolutions must be positive");
  }
  if (!(vertical_fov_min_deg < vertical_fov_max_deg) ||
      !(horizontal_fov_min_deg < horizontal_fov_max_deg)) {
    throw ConfigError("sensor FOV must have min < max");
  }
  if (!(max_range > 0.0)) throw ConfigError("sensor max_range must be positive");
  if (range_noise_sigma < 0.0) {
    throw ConfigError("sensor range_noise_sigma must be non-negative");
  }
}

int SensorModel::beam_count() const {
  return int(std::llround((vertical_fov_max_deg - vertical_fov_min_deg) /
                          vertical_resolution_deg)) +
         1;
}

int SensorModel::azimuth_count() const {
  return int(std::llround((horizontal_fov_max_deg - horizontal_fov_min_deg) /
                          horizontal_resolution_deg)) +
         1;
}

Scene parse_scene(const std::string& text) {
  Scene scene;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;
    auto num = [&](std::size_t i) { return to_number(tok[i], line_no); };
    if (tok[0] == "ground") {
      if (tok.size() != 3) {
        throw ParseError("scene line " + std::to_string(line_no) +
                         ": ground wants <z> <reflectance>");
      }
      scene.has_ground = true;
      scene.ground_z = num(1);
      scene.ground_reflectance = num(2);
    } else if (tok[0] == "box") {
      if (tok.size() != 9) {
        throw ParseError("scene line " + std::to_string(line_no) +
                         ": box wants <cx> <cy> <cz> <length> <width> <height> "
                         "<yaw_deg> <reflectance>");
      }
      Cuboid c;
      c.cx = num(1);
      c.cy = num(2);
      c.cz = num(3);
      c.length = num(4);
      c.width = num(5);
      c.height = num(6);
      c.yaw_deg = num(7);
      c.reflectance = num(8);
      scene.cuboids.push_back(c);
    } else {
      throw ParseError("scene line " + std::to_string(line_no) +
                       ": unknown directive '" + tok[0] + "'");
    }
  }
  return scene;
}

std::string write_scene(const Scene& scene) {
  std::string out;
  char buf[256];
  if (scene.has_ground) {
    std::snprintf(buf, sizeof(buf), "ground %.6f %.6f\n", scene.ground_z,
                  scene.ground_reflectance);
    out += buf;
  }
  for (const Cuboid& c : scene.cuboids) {
    std::snprintf(buf, sizeof(buf), "box %.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f\n",
                  c.cx, c.cy, c.cz, c.length, c.width, c.height, c.yaw_deg,
                  c.reflectance);
    out += buf;
  }
  return out;
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open scene file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scene(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

ScanResult simulate_scan(const Scene& scene, const SensorModel& sensor,
                         std::uint64_t seed, const Calibration* label_calib) {
  sensor.validate();
  for (const Cuboid& c : scene.cuboids) {
    if (!(c.length > 0.0 && c.width > 0.0 && c.height > 0.0)) {
      throw ConfigError("scene cuboid dimensions must be positive");
    }
    if (!(c.reflectance >= 0.0 && c.reflectance <= 1.0)) {
      throw ConfigError("cuboid reflectance must lie in [0, 1]");
    }
  }
  if (scene.has_ground &&
      !(scene.ground_reflectance >= 0.0 && scene.ground_reflectance <= 1.0)) {
    throw ConfigError("ground reflectance must lie in [0, 1]");
  }

  std::vector<LocalBox> boxes;
  boxes.reserve(scene.cuboids.size());
  for (const Cuboid& c : scene.cuboids) boxes.push_back(prepare(c));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double sigma = sensor.range_noise_sigma;

  ScanResult result;
  const int n_beams = sensor.beam_count();
  const int n_azimuths = sensor.azimuth_count();
  result.cloud.points.reserve(std::size_t(n_beams) * n_azimuths / 4);

  for (int e = 0; e < n_beams; ++e) {
    const double elev =
        (sensor.vertical_fov_min_deg + e * sensor.vertical_resolution_deg) *
        kDegToRad;
    const double ce = std::cos(elev);
    const double se = std::sin(elev);
    for (int a = 0; a < n_azimuths; ++a) {
      const double az = (sensor.horizontal_fov_min_deg +
                         a * sensor.horizontal_resolution_deg) *
                        kDegToRad;
      const double d[3] = {ce * std::cos(az), ce * std::sin(az), se};

      double best_t = std::numeric_limits<double>::infinity();
      double best_refl = 0.0;
      for (const LocalBox& b : boxes) {
        const auto t = ray_box_entry(b, d);
        if (t && *t <= sensor.max_range && *t < best_t) {
          best_t = *t;
          best_refl = b.reflectance;
        }
      }
      if (scene.has_ground && d[2] < -1e-12) {
        const double t = scene.ground_z / d[2];
        if (t >= kMinHitRange && t <= sensor.max_range && t < best_t) {
          best_t = t;
          best_refl = scene.ground_reflectance;
        }
      }
      if (!std::isfinite(best_t)) continue;

      double t_final = best_t;
      if (sigma > 0.0) t_final += sigma * noise(rng);
      if (t_final < kMinHitRange) continue;
      Point p;
      p.x = float(t_final * d[0]);
      p.y = float(t_final * d[1]);
      p.z = float(t_final * d[2]);
      p.intensity = float(best_refl);
      result.cloud.points.push_back(p);
    }
  }

  const Calibration calib = label_calib ? *label_calib : default_calibration();
  result.objects.reserve(scene.cuboids.size());
  for (const Cuboid& c : scene.cuboids) {
    result.objects.push_back(make_object(c, calib));
  }
  return result;
}

SpacingStats spacing_stats(const PointCloud& cloud, const RotatedBox& box,
                           const SensorModel& sensor) {
  sensor.validate();
  validate_box(box);
  const ConvexPolygon poly = box_corners(box);

  struct Hit {
    int ring;
    int col;
    double x, y, z;
  };
  std::vector<Hit> hits;
  for (const Point& p : cloud.points) {
    if (!poly.contains({p.x, p.y}, kFootprintEps)) continue;
    const double r = std::sqrt(double(p.x) * p.x + double(p.y) * p.y +
                               double(p.z) * p.z);
    if (r < 1e-9) continue;
    const double elev = std::asin(double(p.z) / r) / kDegToRad;
    const double az = std::atan2(double(p.y), double(p.x)) / kDegToRad;
    Hit h;
    h.ring = int(std::lround((elev - sensor.vertical_fov_min_deg) /
                             sensor.vertical_resolution_deg));
    h.col = int(std::lround((az - sensor.horizontal_fov_min_deg) /
                            sensor.horizontal_resolution_deg));
    h.x = p.x;
    h.y = p.y;
    h.z = p.z;
    hits.push_back(h);
  }

  SpacingStats stats;
  stats.point_count = hits.size();

  auto dist3 = [](const Hit& a, const Hit& b) {
    return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                     (a.z - b.z) * (a.z - b.z));
  };

  // Gaps between returns on angularly adjacent rays. Horizontal pairs share
  // a ring and sit one azimuth step apart; vertical pairs the transpose.
  std::map<int, std::vector<const Hit*>> by_ring, by_col;
  for (const Hit& h : hits) {
    by_ring[h.ring].push_back(&h);
    by_col[h.col].push_back(&h);
  }
  std::vector<double> horizontal, vertical;
  for (auto& [ring, group] : by_ring) {
    std::sort(group.begin(), group.end(),
              [](const Hit* a, const Hit* b) { return a->col < b->col; });
    for (std::size_t i = 0; i + 1 < group.size(); ++i) {
      if (group[i + 1]->col == group[i]->col + 1) {
        horizontal.push_back(dist3(*group[i], *group[i + 1]));
      }
    }
  }
  for (auto& [col, group] : by_col) {
    std::sort(group.begin(), group.end(),
              [](const Hit* a, const Hit* b) { return a->ring < b->ring; });
    for (std::size_t i = 0; i + 1 < group.size(); ++i) {
      if (group[i + 1]->ring == group[i]->ring + 1) {
        vertical.push_back(dist3(*group[i], *group[i + 1]));
      }
    }
  }
  if (!horizontal.empty()) stats.median_horizontal_gap = median(horizontal);
  if (!vertical.empty()) stats.median_vertical_gap = median(vertical);
  return stats;
}

}  // namespace bevkit
