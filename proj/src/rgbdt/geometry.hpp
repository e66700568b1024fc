#pragma once

#include <optional>

namespace rgbdt {

/// Axis-aligned rectangle in pixel coordinates, half-open on the
/// right/bottom edge: a pixel column px is inside iff x <= px < x + w.
/// Coordinates are floating point so sub-pixel propagation is lossless.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;  // > 0 for a valid box
  double h = 0.0;  // > 0 for a valid box

  double area() const { return w * h; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double cx() const { return x + 0.5 * w; }
  double cy() const { return y + 0.5 * h; }
  bool valid() const { return w > 0.0 && h > 0.0; }

  static BoundingBox from_center(double cx, double cy, double w, double h) {
    return {cx - 0.5 * w, cy - 0.5 * h, w, h};
  }

  bool operator==(const BoundingBox&) const = default;
};

/// A box that may be absent (target fully occluded, or no tracker output).
using MaybeBox = std::optional<BoundingBox>;

double intersect_area(const BoundingBox& a, const BoundingBox& b);
double union_area(const BoundingBox& a, const BoundingBox& b);

/// Intersection over union; 0 for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

double center_distance(const BoundingBox& a, const BoundingBox& b);

/// Scales the box about its center.
BoundingBox expand(const BoundingBox& b, double factor);

/// Translates the box (keeping its size when possible) so it lies inside
/// [0,width) x [0,height); boxes larger than the frame are clipped.
BoundingBox clamp_into(const BoundingBox& b, int width, int height);

bool inside(const BoundingBox& b, int width, int height);

}  // namespace rgbdt
