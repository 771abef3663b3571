// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>

#include "bevkit/detections.hpp"
#include "bevkit/errors.hpp"
#include "bevkit/range_split.hpp"
#include "support.hpp"

using namespace bevkit;

namespace {

GroundTruthObject object_at(double cx, double cy) {
  GroundTruthObject o;
  o.box = canonicalize({cx, cy, 4.2, 1.8, 0.0});
  o.z_center = -0.9;
  o.z_height = 1.5;
  o.bbox2d = {100, 100, 200, 150};
  return o;
}

}  // namespace

TEST_CASE("objects split by radial center distance at 25 m") {
  RangeSplitParams params;
  params.validate();
  std::vector<GroundTruthObject> objects;
  objects.push_back(object_at(10.0, 0.0));   // r 10: inside
  objects.push_back(object_at(24.99, 0.0));  // just under: inside
  objects.push_back(object_at(25.0, 0.0));   // at the threshold: outside
  objects.push_back(object_at(20.0, 16.0));  // r 25.6: outside
  objects.push_back(object_at(15.0, 16.0));  // r 21.9: inside
  const ObjectPartition parts = assign_objects(objects, params);
  REQUIRE(parts.inside.size() == 3);
  REQUIRE(parts.outside.size() == 2);
  // Input order is preserved within each part.
  CHECK(parts.inside[0].box.cx == doctest::Approx(10.0));
  CHECK(parts.inside[1].box.cx == doctest::Approx(24.99));
  CHECK(parts.inside[2].box.cy == doctest::Approx(16.0));
  CHECK(parts.outside[0].box.cx == doctest::Approx(25.0));
}

TEST_CASE("radial masking zeroes cells outside the band") {
  BevGrid grid;
  grid.rows = 20;
  grid.cols = 20;
  grid.resolution = 1.0;
  grid.x_max = 20.0;
  grid.y_max = 10.0;
  PointCloud cloud;
  // One point per pixel along the centerline, all at z 0.
  for (int r = 0; r < grid.rows; ++r) {
    cloud.points.push_back({float(grid.center_x(r)), 0.5f, 0.0f, 0.5f});
  }
  const std::vector<std::uint8_t> mask(std::size_t(grid.rows) * grid.cols, 1);
  const BevImage img = rasterize(cloud, BevEncoding::kBinary, grid, mask);

  const BevImage near = mask_bev(img, std::nullopt, 10.0);
  const BevImage far = mask_bev(img, 10.0, std::nullopt);
  for (int r = 0; r < grid.rows; ++r) {
    const int col = 9;  // the column holding y 0.5
    const double radius = grid.center_radius(r, col);
    const bool occupied_near = near.at(r, col, 1) > 0.0f;
    const bool occupied_far = far.at(r, col, 1) > 0.0f;
    CHECK(occupied_near == (radius < 10.0));
    CHECK(occupied_far == (radius >= 10.0));
  }
  // The visibility mask is untouched.
  CHECK(near.fov_mask == img.fov_mask);

  // Masking twice equals masking once with the tighter band.
  const BevImage twice = mask_bev(mask_bev(img, 5.0, 15.0), 8.0, std::nullopt);
  const BevImage tight = mask_bev(img, 8.0, 15.0);
  CHECK(std::memcmp(twice.values.data(), tight.values.data(),
                    twice.values.size() * sizeof(float)) == 0);

  CHECK_THROWS_AS(mask_bev(img, 12.0, 11.0), ConfigError);
}

TEST_CASE("split frames mask each branch and share the overlap band") {
  BevGrid grid;
  grid.rows = 50;
  grid.cols = 20;
  grid.resolution = 1.0;
  grid.x_max = 50.0;
  grid.y_max = 10.0;
  PointCloud cloud;
  cloud.points.push_back({10.0f, 0.5f, 0.0f, 0.5f});  // r about 10: near only
  cloud.points.push_back({27.0f, 0.5f, 0.0f, 0.5f});  // overlap band: both
  cloud.points.push_back({45.0f, 0.5f, 0.0f, 0.5f});  // far only
  std::vector<GroundTruthObject> labels;
  labels.push_back(object_at(10.0, 0.0));
  labels.push_back(object_at(40.0, 0.0));

  const std::vector<std::uint8_t> mask(std::size_t(grid.rows) * grid.cols, 1);
  const SplitFrame split = split_frame(cloud, labels, RangeSplitParams{},
                                       BevEncoding::kBinary, grid, mask);

  auto occupied = [&](const BevImage& img, double x) {
    const auto px = img.grid.point_to_pixel(x, 0.5);
    REQUIRE(px);
    return img.at(px->row, px->col, 1) > 0.0f;
  };
  CHECK(occupied(split.inside.image, 10.0));
  CHECK(occupied(split.inside.image, 27.0));
  CHECK_FALSE(occupied(split.inside.image, 45.0));
  CHECK_FALSE(occupied(split.outside.image, 10.0));
  CHECK(occupied(split.outside.image, 27.0));
  CHECK(occupied(split.outside.image, 45.0));

  REQUIRE(split.inside.labels.size() == 1);
  CHECK(split.inside.labels[0].box.cx == doctest::Approx(10.0));
  REQUIRE(split.outside.labels.size() == 1);
  CHECK(split.outside.labels[0].box.cx == doctest::Approx(40.0));
}

TEST_CASE("merge keeps each branch on its side of the boundary") {
  RangeSplitParams params;  // inference boundary at 35 m longitudinal
  std::vector<RotatedBox> inside;
  inside.push_back({20.0, 1.0, 4.2, 1.8, 0.0, 0.9});
  inside.push_back({34.99, -2.0, 4.2, 1.8, 0.0, 0.8});
  inside.push_back({35.0, 0.0, 4.2, 1.8, 0.0, 0.7});   // at boundary: dropped
  inside.push_back({40.0, 0.0, 4.2, 1.8, 0.0, 0.6});   // past boundary: dropped
  std::vector<RotatedBox> outside;
  outside.push_back({35.0, 3.0, 4.2, 1.8, 0.0, 0.5});  // at boundary: kept
  outside.push_back({50.0, 0.0, 4.2, 1.8, 0.0, 0.4});
  outside.push_back({30.0, 0.0, 4.2, 1.8, 0.0, 0.3});  // near side: dropped

  const auto merged = merge_detections(inside, outside, params);
  REQUIRE(merged.size() == 4);
  CHECK(merged[0].confidence == doctest::Approx(0.9));
  CHECK(merged[1].confidence == doctest::Approx(0.8));
  CHECK(merged[2].confidence == doctest::Approx(0.5));
  CHECK(merged[3].confidence == doctest::Approx(0.4));
}

TEST_CASE("range split parameters are checked for consistency") {
  RangeSplitParams params;
  params.outside_mask_min = 26.0;  // would hide threshold-range objects
  CHECK_THROWS_AS(params.validate(), ConfigError);
  params = {};
  params.inside_mask_max = 24.0;
  CHECK_THROWS_AS(params.validate(), ConfigError);
  params = {};
  params.inference_boundary = -1.0;
  CHECK_THROWS_AS(params.validate(), ConfigError);
}

TEST_CASE("branch scores combine weighted by truth counts") {
  // 55 near objects at 81.3, 25 far at 53.2.
  CHECK(weighted_map(81.3, 55, 53.2, 25) ==
        doctest::Approx((81.3 * 55 + 53.2 * 25) / 80.0));
  CHECK(weighted_map(81.3, 55, 53.2, 25) == doctest::Approx(72.51875));
  // A branch with no truth contributes nothing.
  CHECK(weighted_map(90.0, 10, 0.0, 0) == doctest::Approx(90.0));
  CHECK(weighted_map(0.0, 0, 45.0, 5) == doctest::Approx(45.0));
  CHECK_THROWS_AS(weighted_map(50.0, 0, 60.0, 0), std::domain_error);
}

TEST_CASE("detection text round trips byte-exactly") {
  std::mt19937_64 rng(41);
  std::vector<DetectionRecord> dets;
  for (int i = 0; i < 30; ++i) {
    DetectionRecord d;
    d.frame_id = i % 2 ? "000123" : "000007";
    d.box = testing::random_box(rng);
    d.box.confidence = 0.01 * (i + 1);
    dets.push_back(d);
  }
  const std::string text = write_detections(dets);
  const auto parsed = parse_detections(text);
  REQUIRE(parsed.size() == dets.size());
  CHECK(write_detections(parsed) == text);
  for (std::size_t i = 0; i < dets.size(); ++i) {
    CHECK(parsed[i].frame_id == dets[i].frame_id);
    CHECK(parsed[i].box.cx == doctest::Approx(dets[i].box.cx).epsilon(1e-5));
    CHECK(parsed[i].box.confidence ==
          doctest::Approx(dets[i].box.confidence).epsilon(1e-5));
  }
}

TEST_CASE("detection files survive a disk round trip") {
  std::vector<DetectionRecord> dets;
  DetectionRecord d;
  d.frame_id = "000042";
  d.box = {20.0, -3.0, 4.2, 1.8, 15.0, 0.85};
  dets.push_back(d);
  testing::ScratchDir dir("dets");
  const auto path = dir.path() / "dets.txt";
  save_detections(dets, path);
  const auto back = load_detections(path);
  REQUIRE(back.size() == 1);
  CHECK(back[0].frame_id == "000042");
  CHECK(back[0].box.theta == doctest::Approx(15.0).epsilon(1e-6));
}

TEST_CASE("detection parser reports bad lines") {
  SUBCASE("wrong token count") {
    try {
      parse_detections("000001 1 2 3\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
  }
  SUBCASE("bad number") {
    CHECK_THROWS_AS(
        parse_detections("000001 ten 0 4.2 1.8 0 0.5\n"), ParseError);
  }
  SUBCASE("invalid box") {
    CHECK_THROWS_AS(
        parse_detections("000001 10 0 -4.2 1.8 0 0.5\n"), ParseError);
  }
  SUBCASE("boxes come back canonical") {
    // Width under height: the parser swaps and rotates.
    const auto dets = parse_detections("000001 10 0 1.8 4.2 10 0.5\n");
    REQUIRE(dets.size() == 1);
    CHECK(dets[0].box.w == doctest::Approx(4.2));
    CHECK(dets[0].box.h == doctest::Approx(1.8));
    CHECK(dets[0].box.theta == doctest::Approx(-80.0));
  }
}
