// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "bevkit/anchors.hpp"
#include "bevkit/errors.hpp"
#include "bevkit/losses.hpp"
#include "support.hpp"

using namespace bevkit;

TEST_CASE("offsets are prediction minus truth, fieldwise") {
  const RotatedBox pred{12.0, -3.0, 4.6, 2.1, 10.0};
  const RotatedBox gt{10.0, -4.0, 4.2, 1.8, 4.0};
  const RegressionTargets t = regression_targets(pred, gt, true);
  CHECK(t.dx == doctest::Approx(2.0));
  CHECK(t.dy == doctest::Approx(1.0));
  CHECK(t.dw == doctest::Approx(0.4));
  CHECK(t.dh == doctest::Approx(0.3));
  REQUIRE(t.dtheta);
  CHECK(*t.dtheta == doctest::Approx(6.0));

  const RegressionTargets flat = regression_targets(pred, gt, false);
  CHECK_FALSE(flat.dtheta);
  CHECK(flat.dx == doctest::Approx(2.0));
}

TEST_CASE("applying offsets recovers the truth") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 500; ++i) {
    const RotatedBox anchor = testing::random_box(rng);
    const RotatedBox gt = testing::nearby_box(anchor, rng);
    const RegressionTargets t = regression_targets(anchor, gt, true);
    const RotatedBox back = apply_deltas(anchor, t);
    CHECK(std::abs(back.cx - gt.cx) < 1e-9);
    CHECK(std::abs(back.cy - gt.cy) < 1e-9);
    CHECK(std::abs(back.w - gt.w) < 1e-9);
    CHECK(std::abs(back.h - gt.h) < 1e-9);
    CHECK(std::abs(back.theta - gt.theta) < 1e-9);
  }
}

TEST_CASE("offsets without rotation keep the anchor heading") {
  const RotatedBox anchor{10.0, 0.0, 4.5, 2.0, 33.75};
  RegressionTargets t;
  t.dx = -1.0;
  t.dy = 2.0;
  const RotatedBox moved = apply_deltas(anchor, t);
  CHECK(moved.cx == doctest::Approx(11.0));
  CHECK(moved.cy == doctest::Approx(-2.0));
  CHECK(moved.theta == doctest::Approx(33.75));
}

TEST_CASE("offsets that crush a dimension are rejected") {
  const RotatedBox anchor{10.0, 0.0, 4.5, 2.0, 0.0};
  RegressionTargets t;
  t.dw = 4.5;
  CHECK_THROWS_AS(apply_deltas(anchor, t), InvalidBoxError);
  t = {};
  t.dh = 2.5;
  CHECK_THROWS_AS(apply_deltas(anchor, t), InvalidBoxError);
}

TEST_CASE("smooth L1 values and joins") {
  // Quadratic branch: 0.5 * sigma * x^2 below the knee at 1/sigma.
  CHECK(smooth_l1(0.0, 3.0) == 0.0);
  CHECK(smooth_l1(0.1, 3.0) == doctest::Approx(0.5 * 3.0 * 0.01));
  CHECK(smooth_l1(-0.1, 3.0) == doctest::Approx(0.5 * 3.0 * 0.01));
  // Linear branch: |x| - 0.5/sigma above it.
  CHECK(smooth_l1(2.0, 3.0) == doctest::Approx(2.0 - 0.5 / 3.0));
  CHECK(smooth_l1(-2.0, 3.0) == doctest::Approx(2.0 - 0.5 / 3.0));
  CHECK(smooth_l1(5.0, 1.0) == doctest::Approx(4.5));

  // The two branches agree at the knee.
  for (const double sigma : {kProposalSigma, kHeadSigma, 0.5}) {
    const double knee = 1.0 / sigma;
    const double quad = 0.5 * sigma * knee * knee;
    const double lin = knee - 0.5 / sigma;
    CHECK(quad == doctest::Approx(lin));
    CHECK(smooth_l1(knee, sigma) == doctest::Approx(lin));
    // And the slope is continuous: finite differences straddling the knee.
    const double eps = 1e-7;
    const double below = (smooth_l1(knee, sigma) - smooth_l1(knee - eps, sigma)) / eps;
    const double above = (smooth_l1(knee + eps, sigma) - smooth_l1(knee, sigma)) / eps;
    CHECK(below == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(above == doctest::Approx(1.0).epsilon(1e-5));
  }

  CHECK_THROWS_AS(smooth_l1(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(smooth_l1(1.0, -2.0), std::domain_error);
}

TEST_CASE("total loss doubles the regression terms") {
  LossBreakdown terms;
  terms.proposal_reg = 1.0;
  terms.proposal_cls = 2.0;
  terms.horizontal_reg = 3.0;
  terms.horizontal_cls = 4.0;
  terms.rotational_reg = 5.0;
  terms.rotational_cls = 6.0;
  // 2 * (1 + 3 + 5) + 1 * (2 + 4 + 6)
  CHECK(total_loss(terms) == doctest::Approx(30.0));

  LossWeights even;
  even.regression = 1.0;
  CHECK(total_loss(terms, even) == doctest::Approx(21.0));

  terms.horizontal_reg = -0.1;
  CHECK_THROWS_AS(total_loss(terms), std::domain_error);
  terms.horizontal_reg = NAN;
  CHECK_THROWS_AS(total_loss(terms), std::domain_error);
  terms.horizontal_reg = 3.0;
  LossWeights bad;
  bad.classification = -1.0;
  CHECK_THROWS_AS(total_loss(terms, bad), ConfigError);
}

TEST_CASE("anchor layout covers the grid at the feature stride") {
  AnchorSpec spec;
  spec.grid.rows = 8;
  spec.grid.cols = 8;
  spec.grid.resolution = 0.1;
  spec.grid.x_max = 70.0;
  spec.grid.y_max = 35.0;
  const auto anchors = generate_anchors(spec);
  // 8/4 = 2 positions per axis, 16 orientations each.
  REQUIRE(anchors.size() == 2u * 2u * 16u);

  // First position: center of the top-left stride cell, 0.2 m into the
  // grid from the far left corner.
  CHECK(anchors[0].cx == doctest::Approx(70.0 - 0.2));
  CHECK(anchors[0].cy == doctest::Approx(35.0 - 0.2));
  // Anchor footprint in meters: 45 x 20 pixels at 0.1 m.
  CHECK(anchors[0].w == doctest::Approx(4.5));
  CHECK(anchors[0].h == doctest::Approx(2.0));

  // Orientations step by 180/16 degrees and every box is canonical.
  for (int k = 0; k < 16; ++k) {
    const double want = wrap_angle_90(k * 180.0 / 16.0);
    CHECK(anchors[std::size_t(k)].theta == doctest::Approx(want));
    CHECK(anchors[std::size_t(k)].theta >= -90.0);
    CHECK(anchors[std::size_t(k)].theta < 90.0);
  }

  // Second position along y moves one stride left.
  CHECK(anchors[16].cx == doctest::Approx(70.0 - 0.2));
  CHECK(anchors[16].cy == doctest::Approx(35.0 - 0.6));
}

TEST_CASE("default anchor spec over the default grid") {
  AnchorSpec spec;
  spec.validate();
  const auto anchors = generate_anchors(spec);
  // 700/4 = 175 positions per axis.
  CHECK(anchors.size() == 175u * 175u * 16u);

  AnchorSpec bad = spec;
  bad.orientation_count = 0;
  CHECK_THROWS_AS(generate_anchors(bad), ConfigError);
  bad = spec;
  bad.grid_stride_px = 0;
  CHECK_THROWS_AS(generate_anchors(bad), ConfigError);
  bad.grid_stride_px = spec.grid.rows + 1;  // stride beyond the grid
  CHECK_THROWS_AS(generate_anchors(bad), ConfigError);

  // A stride that does not divide the grid just drops the ragged edge.
  AnchorSpec ragged = spec;
  ragged.grid_stride_px = 3;
  CHECK(generate_anchors(ragged).size() == 233u * 233u * 16u);
}

TEST_CASE("anchors split into positive, negative and ignored") {
  const RotatedBox gt{20.0, 0.0, 4.5, 2.0, 0.0};
  std::vector<RotatedBox> anchors;
  anchors.push_back(gt);                               // overlap 1
  anchors.push_back({20.2, 0.1, 4.5, 2.0, 0.0});       // overlap 0.83
  anchors.push_back({21.0, 0.3, 4.5, 2.0, 0.0});       // overlap 0.49
  anchors.push_back({50.0, 10.0, 4.5, 2.0, 0.0});      // no overlap
  const auto matches = match_anchors(anchors, {gt}, 0.7, 0.3);
  REQUIRE(matches.size() == 4);
  CHECK(matches[0].label == AnchorLabel::kPositive);
  CHECK(matches[0].iou == doctest::Approx(1.0));
  CHECK(matches[0].gt_index == 0);
  CHECK(matches[1].label == AnchorLabel::kPositive);
  CHECK(matches[2].label == AnchorLabel::kIgnore);
  CHECK(matches[3].label == AnchorLabel::kNegative);
  CHECK(matches[3].gt_index == -1);
}

TEST_CASE("positives pick their best-overlap truth") {
  const RotatedBox gt_a{20.0, 0.0, 4.5, 2.0, 0.0};
  const RotatedBox gt_b{26.0, 0.0, 4.5, 2.0, 0.0};
  const RotatedBox near_b{25.5, 0.0, 4.5, 2.0, 0.0};
  const auto matches = match_anchors({near_b}, {gt_a, gt_b}, 0.7, 0.3);
  REQUIRE(matches.size() == 1);
  CHECK(matches[0].label == AnchorLabel::kPositive);
  CHECK(matches[0].gt_index == 1);
}

TEST_CASE("without truth everything is negative") {
  std::mt19937_64 rng(33);
  std::vector<RotatedBox> anchors;
  for (int i = 0; i < 20; ++i) anchors.push_back(testing::random_box(rng));
  for (const auto& m : match_anchors(anchors, {})) {
    CHECK(m.label == AnchorLabel::kNegative);
    CHECK(m.iou == 0.0);
  }
}

TEST_CASE("matching validates its thresholds") {
  const RotatedBox gt{20.0, 0.0, 4.5, 2.0, 0.0};
  CHECK_THROWS_AS(match_anchors({gt}, {gt}, 0.3, 0.7), ConfigError);
  CHECK_THROWS_AS(match_anchors({gt}, {gt}, 1.5, 0.3), ConfigError);
}
