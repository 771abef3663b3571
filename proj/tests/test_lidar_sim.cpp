// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "bevkit/errors.hpp"
#include "bevkit/geometry.hpp"
#include "bevkit/lidar_sim.hpp"
#include "support.hpp"

using namespace bevkit;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Cuboid make_box(double cx, double cy, double cz, double l, double w, double h,
                double yaw = 0.0, double refl = 0.5) {
  Cuboid c;
  c.cx = cx;
  c.cy = cy;
  c.cz = cz;
  c.length = l;
  c.width = w;
  c.height = h;
  c.yaw_deg = yaw;
  c.reflectance = refl;
  return c;
}

}  // namespace

TEST_CASE("default sensor spans 64 beams and 1001 azimuth steps") {
  const SensorModel sensor;
  sensor.validate();
  CHECK(sensor.beam_count() == 64);
  CHECK(sensor.azimuth_count() == 1001);
}

TEST_CASE("sensor model rejects bad settings") {
  SensorModel s;
  s.horizontal_resolution_deg = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.vertical_fov_min_deg = s.vertical_fov_max_deg;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.max_range = -1.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.range_noise_sigma = -0.1;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("scene text round trips") {
  const std::string text =
      "# test scene\n"
      "ground -1.73 0.2\n"
      "\n"
      "box 20 -3 -0.9 4.2 1.8 1.5 15 0.8\n";
  const Scene scene = parse_scene(text);
  CHECK(scene.has_ground);
  CHECK(scene.ground_z == doctest::Approx(-1.73));
  REQUIRE(scene.cuboids.size() == 1);
  CHECK(scene.cuboids[0].cy == doctest::Approx(-3.0));
  CHECK(scene.cuboids[0].yaw_deg == doctest::Approx(15.0));

  const Scene again = parse_scene(write_scene(scene));
  REQUIRE(again.cuboids.size() == 1);
  CHECK(again.cuboids[0].length == doctest::Approx(4.2));
  CHECK(again.has_ground);
}

TEST_CASE("scene parser reports the offending line") {
  SUBCASE("unknown directive") {
    try {
      parse_scene("ground -1.73 0.2\nsphere 1 2 3\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("wrong argument count") {
    CHECK_THROWS_AS(parse_scene("box 1 2 3\n"), ParseError);
  }
  SUBCASE("bad number") {
    CHECK_THROWS_AS(parse_scene("ground zero 0.2\n"), ParseError);
  }
}

TEST_CASE("ground plane returns exactly the in-range beams") {
  Scene scene;
  scene.has_ground = true;
  const ScanResult scan = simulate_scan(scene, SensorModel{});
  // Beams hit the ground inside 120 m only below -0.8 degrees elevation:
  // 56 beams of 1001 azimuth steps each.
  CHECK(scan.cloud.points.size() == 56u * 1001u);
  for (const Point& p : scan.cloud.points) {
    CHECK(p.z == doctest::Approx(-1.73).epsilon(1e-5));
    CHECK(p.intensity == doctest::Approx(0.2f));
  }
  CHECK(scan.objects.empty());
}

TEST_CASE("wall hits lie on the facing surface at the slant range") {
  Scene scene;
  scene.cuboids.push_back(make_box(10.0, 0.0, 0.0, 0.2, 30.0, 10.0));
  const ScanResult scan = simulate_scan(scene, SensorModel{});
  REQUIRE(!scan.cloud.points.empty());

  bool found_axis = false;
  for (const Point& p : scan.cloud.points) {
    // Nearest-hit: every return is on the front face.
    CHECK(p.x == doctest::Approx(9.9f).epsilon(1e-4));
    if (std::abs(p.y) < 1e-4f && std::abs(p.z) < 1e-4f) found_axis = true;
    const double range = std::sqrt(double(p.x) * p.x + double(p.y) * p.y +
                                   double(p.z) * p.z);
    const double az = std::atan2(double(p.y), double(p.x));
    const double el = std::asin(double(p.z) / range);
    // Slant range follows the plane geometry.
    CHECK(range == doctest::Approx(9.9 / (std::cos(az) * std::cos(el)))
                       .epsilon(1e-4));
  }
  CHECK(found_axis);  // the boresight ray exists in the grid
}

TEST_CASE("returns lie on the cuboid surface") {
  Scene scene;
  scene.cuboids.push_back(make_box(15.0, -4.0, -0.9, 4.2, 1.8, 1.5, 25.0, 0.7));
  const ScanResult scan = simulate_scan(scene, SensorModel{});
  REQUIRE(scan.cloud.points.size() > 50);
  const Cuboid& c = scene.cuboids[0];
  const double cy_
      = std::cos(-c.yaw_deg * kDeg);
  const double sy = std::sin(-c.yaw_deg * kDeg);
  for (const Point& p : scan.cloud.points) {
    const double dx = double(p.x) - c.cx;
    const double dy = double(p.y) - c.cy;
    const double lx = cy_ * dx - sy * dy;
    const double ly = sy * dx + cy_ * dy;
    const double lz = double(p.z) - c.cz;
    const double m = std::max({std::abs(lx) / (c.length / 2),
                               std::abs(ly) / (c.width / 2),
                               std::abs(lz) / (c.height / 2)});
    CHECK(m == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(p.intensity == doctest::Approx(0.7f));
  }
}

TEST_CASE("a box surrounding the sensor returns nothing") {
  Scene scene;
  scene.cuboids.push_back(make_box(0.0, 0.0, 0.0, 2.0, 2.0, 2.0));
  const ScanResult scan = simulate_scan(scene, SensorModel{});
  CHECK(scan.cloud.points.empty());
}

TEST_CASE("surfaces beyond the range limit are not returned") {
  Scene scene;
  scene.cuboids.push_back(make_box(130.0, 0.0, 0.0, 4.0, 4.0, 4.0));
  const ScanResult scan = simulate_scan(scene, SensorModel{});
  CHECK(scan.cloud.points.empty());
  CHECK(scan.objects.size() == 1);  // truth is listed even without returns
}

TEST_CASE("near surfaces occlude far ones") {
  Scene scene;
  scene.cuboids.push_back(make_box(10.0, 0.0, 0.0, 0.5, 4.0, 2.0));
  scene.cuboids.push_back(make_box(30.0, 0.0, 0.0, 0.5, 4.0, 2.0));
  const ScanResult scan = simulate_scan(scene, SensorModel{});
  REQUIRE(!scan.cloud.points.empty());
  for (const Point& p : scan.cloud.points) {
    CHECK(p.x < 15.0f);
  }
  CHECK(scan.objects.size() == 2);
}

TEST_CASE("equal seeds reproduce noisy scans exactly") {
  Scene scene;
  scene.has_ground = true;
  scene.cuboids.push_back(make_box(20.0, 1.0, -0.9, 4.2, 1.8, 1.5, 30.0));
  SensorModel sensor;
  sensor.range_noise_sigma = 0.03;

  const ScanResult a = simulate_scan(scene, sensor, 42);
  const ScanResult b = simulate_scan(scene, sensor, 42);
  CHECK(write_point_cloud(a.cloud) == write_point_cloud(b.cloud));

  const ScanResult c = simulate_scan(scene, sensor, 43);
  CHECK(write_point_cloud(a.cloud) != write_point_cloud(c.cloud));
}

TEST_CASE("range noise spreads hits around the true surface") {
  Scene scene;
  scene.cuboids.push_back(make_box(10.0, 0.0, 0.0, 0.2, 30.0, 10.0));
  SensorModel sensor;
  sensor.range_noise_sigma = 0.05;
  const ScanResult scan = simulate_scan(scene, sensor, 7);
  REQUIRE(scan.cloud.points.size() > 1000);

  double sum = 0.0, sum2 = 0.0;
  for (const Point& p : scan.cloud.points) {
    const double range = std::sqrt(double(p.x) * p.x + double(p.y) * p.y +
                                   double(p.z) * p.z);
    const double az = std::atan2(double(p.y), double(p.x));
    const double el = std::asin(double(p.z) / range);
    const double err = range - 9.9 / (std::cos(az) * std::cos(el));
    sum += err;
    sum2 += err * err;
  }
  const double n = double(scan.cloud.points.size());
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  CHECK(std::abs(mean) < 0.005);
  CHECK(sd == doctest::Approx(0.05).epsilon(0.15));
}

TEST_CASE("scan truth matches the scene geometry") {
  Scene scene;
  scene.cuboids.push_back(make_box(20.0, 0.0, -0.9, 4.2, 1.8, 1.5));
  const ScanResult scan = simulate_scan(scene, SensorModel{});
  REQUIRE(scan.objects.size() == 1);
  const GroundTruthObject& o = scan.objects[0];
  CHECK(o.box.cx == doctest::Approx(20.0));
  CHECK(o.box.cy == doctest::Approx(0.0));
  CHECK(o.box.w == doctest::Approx(4.2));
  CHECK(o.box.h == doctest::Approx(1.8));
  CHECK(o.box.theta == doctest::Approx(0.0));
  CHECK(o.z_center == doctest::Approx(-0.9));
  CHECK(o.z_height == doctest::Approx(1.5));
  CHECK(o.truncation == doctest::Approx(0.0));
  CHECK(o.occlusion == 0);
  // Heading straight away from the default camera: alpha is -pi/2.
  CHECK(o.alpha == doctest::Approx(-std::numbers::pi / 2).epsilon(1e-6));
  // The image box straddles the image center and has sane extent.
  CHECK(o.bbox2d.left < 609.6);
  CHECK(o.bbox2d.right > 609.5);
  CHECK(o.bbox2d_height() > 20.0);
  CHECK(o.bbox2d_height() < 120.0);
}

TEST_CASE("objects leaving the camera frame gain truncation") {
  Scene scene;
  scene.cuboids.push_back(make_box(9.0, 7.0, -0.9, 4.2, 1.8, 1.5));
  const ScanResult scan = simulate_scan(scene, SensorModel{});
  REQUIRE(scan.objects.size() == 1);
  CHECK(scan.objects[0].truncation > 0.0);
  CHECK(scan.objects[0].truncation < 1.0);
}

TEST_CASE("spacing between adjacent returns on a small target") {
  Scene scene;
  scene.cuboids.push_back(make_box(10.0, 0.0, 0.0, 0.2, 1.0, 1.0));
  const ScanResult scan = simulate_scan(scene, SensorModel{});
  // 65 azimuth columns by 13 rings intersect the 1 x 1 m face.
  CHECK(scan.cloud.points.size() == 65u * 13u);

  const SpacingStats stats =
      spacing_stats(scan.cloud, scan.objects[0].box, SensorModel{});
  CHECK(stats.point_count == scan.cloud.points.size());
  REQUIRE(stats.median_horizontal_gap);
  REQUIRE(stats.median_vertical_gap);
  // Gaps follow range times angular step: 9.9 m at 0.09 and 0.4 degrees.
  CHECK(*stats.median_horizontal_gap ==
        doctest::Approx(9.9 * 0.09 * kDeg).epsilon(0.02));
  CHECK(*stats.median_vertical_gap ==
        doctest::Approx(9.9 * 0.4 * kDeg).epsilon(0.02));
  // Vertical spacing is the 0.4 / 0.09 ratio of horizontal spacing.
  CHECK(*stats.median_vertical_gap / *stats.median_horizontal_gap ==
        doctest::Approx(0.4 / 0.09).epsilon(0.02));
}

TEST_CASE("spacing stats are empty off the target") {
  Scene scene;
  scene.cuboids.push_back(make_box(10.0, 0.0, 0.0, 0.2, 1.0, 1.0));
  const ScanResult scan = simulate_scan(scene, SensorModel{});
  const RotatedBox elsewhere{50.0, 20.0, 4.0, 2.0, 0.0};
  const SpacingStats stats = spacing_stats(scan.cloud, elsewhere, SensorModel{});
  CHECK(stats.point_count == 0);
  CHECK_FALSE(stats.median_horizontal_gap);
  CHECK_FALSE(stats.median_vertical_gap);
}

TEST_CASE("scene files load with path context on errors") {
  testing::ScratchDir dir("scene");
  const auto good = dir.path() / "ok.scene";
  {
    std::ofstream out(good);
    out << "ground -1.73 0.2\nbox 10 0 0 4 2 1.5 0 0.5\n";
  }
  const Scene scene = load_scene(good);
  CHECK(scene.cuboids.size() == 1);

  const auto bad = dir.path() / "bad.scene";
  {
    std::ofstream out(bad);
    out << "wedge 1 2 3\n";
  }
  try {
    load_scene(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("bad.scene") != std::string::npos);
  }
  CHECK_THROWS_AS(load_scene(dir.path() / "missing.scene"), DataError);
}
