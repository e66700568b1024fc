#include "rgbdt/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace rgbdt {

double intersect_area(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

double union_area(const BoundingBox& a, const BoundingBox& b) {
  return a.area() + b.area() - intersect_area(a, b);
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = intersect_area(a, b);
  if (inter <= 0.0) return 0.0;
  return inter / union_area(a, b);
}

double center_distance(const BoundingBox& a, const BoundingBox& b) {
  return std::hypot(a.cx() - b.cx(), a.cy() - b.cy());
}

BoundingBox expand(const BoundingBox& b, double factor) {
  return BoundingBox::from_center(b.cx(), b.cy(), b.w * factor, b.h * factor);
}

BoundingBox clamp_into(const BoundingBox& b, int width, int height) {
  BoundingBox r = b;
  r.w = std::min(r.w, static_cast<double>(width));
  r.h = std::min(r.h, static_cast<double>(height));
  r.x = std::clamp(r.x, 0.0, width - r.w);
  r.y = std::clamp(r.y, 0.0, height - r.h);
  return r;
}

bool inside(const BoundingBox& b, int width, int height) {
  return b.x >= 0.0 && b.y >= 0.0 && b.right() <= width && b.bottom() <= height;
}

}  // namespace rgbdt
