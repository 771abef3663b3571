// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Absolute tolerance for the point-on-edge test inside the clipper. Cross
// products here scale with box size squared; boxes are a few meters, so
// 1e-9 is far below any real overlap and far above rounding noise.
constexpr double kClipEps = 1e-9;

}  // namespace

double ConvexPolygon::area() const {
  if (vertices.size() < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vec2& p = vertices[i];
    const Vec2& q = vertices[(i + 1) % vertices.size()];
    s += cross(p, q);
  }
  return 0.5 * s;
}

bool ConvexPolygon::contains(Vec2 p, double eps) const {
  if (vertices.size() < 3) return false;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[(i + 1) % vertices.size()];
    if (cross(b - a, p - a) < -eps) return false;
  }
  return true;
}

double wrap_angle_90(double degrees) {
  double t = std::fmod(degrees + 90.0, 180.0);
  if (t < 0.0) t += 180.0;
  return t - 90.0;
}

void validate_box(const RotatedBox& box) {
  if (!std::isfinite(box.cx) || !std::isfinite(box.cy) ||
      !std::isfinite(box.w) || !std::isfinite(box.h) ||
      !std::isfinite(box.theta)) {
    throw InvalidBoxError("box has a non-finite field");
  }
  if (box.w <= 0.0 || box.h <= 0.0) {
    throw InvalidBoxError("box dimensions must be positive, got w=" +
                          std::to_string(box.w) + " h=" + std::to_string(box.h));
  }
}

RotatedBox canonicalize(const RotatedBox& box) {
  validate_box(box);
  RotatedBox out = box;
  if (out.w < out.h) {
    std::swap(out.w, out.h);
    out.theta += 90.0;
  }
  out.theta = wrap_angle_90(out.theta);
  return out;
}

ConvexPolygon box_corners(const RotatedBox& box) {
  const double c = std::cos(box.theta * kDegToRad);
  const double s = std::sin(box.theta * kDegToRad);
  const double hw = 0.5 * box.w;
  const double hh = 0.5 * box.h;
  // Local corners in CCW order.
  const Vec2 local[4] = {{hw, hh}, {-hw, hh}, {-hw, -hh}, {hw, -hh}};
  ConvexPolygon poly;
  poly.vertices.reserve(4);
  for (const Vec2& v : local) {
    poly.vertices.push_back({box.cx + c * v.x - s * v.y, box.cy + s * v.x + c * v.y});
  }
  return poly;
}

ConvexPolygon clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clip) {
  std::vector<Vec2> output = subject.vertices;
  for (std::size_t i = 0; i < clip.vertices.size() && !output.empty(); ++i) {
    const Vec2 a = clip.vertices[i];
    const Vec2 b = clip.vertices[(i + 1) % clip.vertices.size()];
    const Vec2 edge = b - a;
    std::vector<Vec2> input;
    input.swap(output);
    output.reserve(input.size() + 1);
    for (std::size_t j = 0; j < input.size(); ++j) {
      const Vec2 cur = input[j];
      const Vec2 nxt = input[(j + 1) % input.size()];
      const double dc = cross(edge, cur - a);
      const double dn = cross(edge, nxt - a);
      const bool cur_in = dc >= -kClipEps;
      const bool next_in = dn >= -kClipEps;
      if (cur_in) output.push_back(cur);
      if (cur_in != next_in) {
        // Edge crossing: dc and dn straddle zero, so the division is safe.
        const double t = dc / (dc - dn);
        output.push_back(cur + t * (nxt - cur));
      }
    }
  }
  return ConvexPolygon{std::move(output)};
}

double rotated_iou(const RotatedBox& a, const RotatedBox& b) {
  validate_box(a);
  validate_box(b);
  const ConvexPolygon pa = box_corners(a);
  const ConvexPolygon pb = box_corners(b);
  // Areas come from the same shoelace path as the intersection so that
  // identical boxes divide to exactly 1.
  const double area_a = pa.area();
  const double area_b = pb.area();
  const double inter = clip_convex(pa, pb).area();
  if (inter <= 0.0) return 0.0;
  const double uni = area_a + area_b - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

std::vector<RotatedBox> nms_rotated(const std::vector<RotatedBox>& boxes,
                                    double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw ConfigError("nms iou_threshold must lie in (0, 1), got " +
                      std::to_string(iou_threshold));
  }
  for (const RotatedBox& b : boxes) validate_box(b);

  std::vector<std::size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return boxes[i].confidence > boxes[j].confidence;
  });

  std::vector<RotatedBox> kept;
  for (std::size_t idx : order) {
    bool suppressed = false;
    for (const RotatedBox& k : kept) {
      if (rotated_iou(boxes[idx], k) > iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(boxes[idx]);
  }
  return kept;
}

}  // namespace bevkit
