// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace bevkit {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// Oriented rectangle in the ground plane. x points forward from the sensor,
// y to the left, theta is counter-clockwise yaw in degrees. The canonical
// form keeps w >= h and theta in [-90, 90); a rectangle and its 90-degree
// twin with swapped sides are the same set of points, so every rectangle has
// exactly one canonical representation.
struct RotatedBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;  // extent along the heading axis, meters
  double h = 0.0;  // extent across the heading axis, meters
  double theta = 0.0;  // degrees, CCW
  double confidence = 1.0;
  int class_id = 0;

  double area() const { return w * h; }
};

// Vertices in counter-clockwise order. Area is the shoelace sum, positive
// for CCW order, and exactly zero for degenerate (collinear) rings.
struct ConvexPolygon {
  std::vector<Vec2> vertices;

  double area() const;
  bool contains(Vec2 p, double eps = 0.0) const;
};

// Wraps an angle into [-90, 90). 90 maps to -90.
double wrap_angle_90(double degrees);

// Throws InvalidBoxError on non-finite fields or w <= 0 or h <= 0.
void validate_box(const RotatedBox& box);

// Validates, then forces w >= h (swapping sides turns the heading by 90
// degrees) and wraps theta into [-90, 90). Idempotent. Squares keep their
// sides and only get the angle wrapped.
RotatedBox canonicalize(const RotatedBox& box);

// The four corners of the box, counter-clockwise.
ConvexPolygon box_corners(const RotatedBox& box);

// Sutherland-Hodgman clip of one convex CCW polygon against another.
// The result may be degenerate (fewer than 3 vertices, or zero area) when
// the inputs only touch.
ConvexPolygon clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clip);

// Exact intersection-over-union of two oriented rectangles. Identical boxes
// give exactly 1.0; shapes that touch on an edge or corner give 0.0.
// Validates both inputs.
double rotated_iou(const RotatedBox& a, const RotatedBox& b);

// Greedy non-maximum suppression. Boxes are taken in descending confidence
// order (ties keep input order); a box is dropped when its IoU with an
// already kept box exceeds iou_threshold. Returns kept boxes in descending
// confidence order. iou_threshold must lie in (0, 1).
std::vector<RotatedBox> nms_rotated(const std::vector<RotatedBox>& boxes,
                                    double iou_threshold);

}  // namespace bevkit
