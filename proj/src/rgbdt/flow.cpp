#include "rgbdt/flow.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include "rgbdt/error.hpp"
#include "rgbdt/util.hpp"

namespace rgbdt {

namespace {

struct Point2d {
  double x = 0.0;
  double y = 0.0;
};

// 3x3 binomial smoothing; least-squares tracking needs band-limited input.
ImageF smooth3(const ImageF& src) {
  ImageF out(src.width(), src.height(), 1);
  for (int y = 0; y < src.height(); ++y)
    for (int x = 0; x < src.width(); ++x) {
      float acc = 0.0f;
      static const float k[3] = {0.25f, 0.5f, 0.25f};
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          acc += k[dx + 1] * k[dy + 1] * src.at_clamped(x + dx, y + dy);
      out.at(x, y) = acc;
    }
  return out;
}

std::vector<ImageF> gray_pyramid(const ImageF& base, int levels) {
  std::vector<ImageF> pyr;
  pyr.push_back(smooth3(base));
  for (int l = 1; l < levels; ++l) {
    const ImageF& prev = pyr.back();
    if (prev.width() < 4 || prev.height() < 4) break;
    pyr.push_back(smooth3(downsample_half(prev)));
  }
  return pyr;
}

// Single-level least-squares step refinement; returns false when the
// local structure matrix is too flat to invert reliably.
bool lk_refine(const ImageF& a, const ImageF& b, Point2d p, Point2d& q, int radius,
               int iterations) {
  const int n = (2 * radius + 1) * (2 * radius + 1);
  std::vector<double> ix(n), iy(n), av(n);
  double gxx = 0.0, gxy = 0.0, gyy = 0.0;
  int k = 0;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx, ++k) {
      const double x = p.x + dx;
      const double y = p.y + dy;
      av[k] = sample_bilinear(a, x, y);
      ix[k] = 0.5 * (sample_bilinear(a, x + 1, y) - sample_bilinear(a, x - 1, y));
      iy[k] = 0.5 * (sample_bilinear(a, x, y + 1) - sample_bilinear(a, x, y - 1));
      gxx += ix[k] * ix[k];
      gxy += ix[k] * iy[k];
      gyy += iy[k] * iy[k];
    }
  // Smallest eigenvalue per pixel must clear a texture floor.
  const double tr = gxx + gyy;
  const double det = gxx * gyy - gxy * gxy;
  const double min_eig = 0.5 * (tr - std::sqrt(std::max(0.0, tr * tr - 4.0 * det)));
  if (min_eig / n < 0.01 || det <= 1e-12) return false;

  for (int it = 0; it < iterations; ++it) {
    double bx = 0.0, by = 0.0;
    k = 0;
    for (int dy = -radius; dy <= radius; ++dy)
      for (int dx = -radius; dx <= radius; ++dx, ++k) {
        const double diff = sample_bilinear(b, q.x + dx, q.y + dy) - av[k];
        bx += diff * ix[k];
        by += diff * iy[k];
      }
    const double vx = -(gyy * bx - gxy * by) / det;
    const double vy = -(-gxy * bx + gxx * by) / det;
    q.x += vx;
    q.y += vy;
    if (vx * vx + vy * vy < 0.01 * 0.01) break;
  }
  return true;
}

std::optional<Point2d> track_point(const std::vector<ImageF>& pa, const std::vector<ImageF>& pb,
                                   Point2d p, const FlowParams& params) {
  const int top = static_cast<int>(pa.size()) - 1;
  Point2d q{p.x / (1 << top), p.y / (1 << top)};
  for (int l = top; l >= 0; --l) {
    const double s = 1.0 / (1 << l);
    const Point2d pl{p.x * s, p.y * s};
    if (l != top) {
      q.x *= 2.0;
      q.y *= 2.0;
    }
    if (!lk_refine(pa[l], pb[l], pl, q, params.win_radius, params.iterations)) return std::nullopt;
  }
  if (q.x < 0.0 || q.y < 0.0 || q.x > pb[0].width() - 1.0 || q.y > pb[0].height() - 1.0)
    return std::nullopt;
  return q;
}

double patch_ncc(const ImageF& a, Point2d pa, const ImageF& b, Point2d pb, int radius) {
  const int n = (2 * radius + 1) * (2 * radius + 1);
  double ma = 0.0, mb = 0.0;
  std::vector<double> va(n), vb(n);
  int k = 0;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx, ++k) {
      va[k] = sample_bilinear(a, pa.x + dx, pa.y + dy);
      vb[k] = sample_bilinear(b, pb.x + dx, pb.y + dy);
      ma += va[k];
      mb += vb[k];
    }
  ma /= n;
  mb /= n;
  double num = 0.0, da = 0.0, db = 0.0;
  for (k = 0; k < n; ++k) {
    num += (va[k] - ma) * (vb[k] - mb);
    da += (va[k] - ma) * (va[k] - ma);
    db += (vb[k] - mb) * (vb[k] - mb);
  }
  if (da <= 1e-9 || db <= 1e-9) return 0.0;
  return num / std::sqrt(da * db);
}

}  // namespace

FlowResult propagate_gray(const ImageF& prev_gray, const ImageF& cur_gray,
                          const BoundingBox& prev_box, const FlowParams& params) {
  require(prev_box.valid(), ErrorCode::invalid_argument, "flow needs a valid box");
  require(prev_gray.width() == cur_gray.width() && prev_gray.height() == cur_gray.height(),
          ErrorCode::invalid_argument, "flow frames must share dimensions");

  const auto pa = gray_pyramid(prev_gray, params.levels);
  const auto pb = gray_pyramid(cur_gray, params.levels);

  std::vector<Point2d> from, to;
  std::vector<double> fb_errors;
  const int g = params.grid;
  for (int j = 0; j < g; ++j)
    for (int i = 0; i < g; ++i) {
      Point2d p{prev_box.x + (i + 0.5) * prev_box.w / g, prev_box.y + (j + 0.5) * prev_box.h / g};
      if (p.x < 0 || p.y < 0 || p.x > prev_gray.width() - 1 || p.y > prev_gray.height() - 1)
        continue;
      auto q = track_point(pa, pb, p, params);
      if (!q) continue;
      auto back = track_point(pb, pa, *q, params);
      if (!back) continue;
      const double fb = std::hypot(back->x - p.x, back->y - p.y);
      if (fb > params.fb_thresh_px) continue;
      if (patch_ncc(prev_gray, p, cur_gray, *q, params.win_radius) < params.ncc_min) continue;
      from.push_back(p);
      to.push_back(*q);
      fb_errors.push_back(fb);
    }

  FlowResult out;
  const int total = g * g;
  const double survival = static_cast<double>(from.size()) / total;
  if (from.empty() || survival < params.min_survival) return out;  // Absent, confidence 0

  std::vector<double> dxs(from.size()), dys(from.size());
  for (size_t i = 0; i < from.size(); ++i) {
    dxs[i] = to[i].x - from[i].x;
    dys[i] = to[i].y - from[i].y;
  }
  out.dx = median_of(dxs);
  out.dy = median_of(dys);

  double scale = 1.0;
  if (from.size() >= 2) {
    std::vector<double> ratios;
    ratios.reserve(from.size() * (from.size() - 1) / 2);
    for (size_t i = 0; i < from.size(); ++i)
      for (size_t j = i + 1; j < from.size(); ++j) {
        const double d0 = std::hypot(from[i].x - from[j].x, from[i].y - from[j].y);
        if (d0 < 1e-9) continue;
        const double d1 = std::hypot(to[i].x - to[j].x, to[i].y - to[j].y);
        ratios.push_back(d1 / d0);
      }
    if (!ratios.empty()) scale = median_of(std::move(ratios));
  }
  scale = std::clamp(scale, 1.0 - params.scale_clamp, 1.0 + params.scale_clamp);

  BoundingBox moved = BoundingBox::from_center(prev_box.cx() + out.dx, prev_box.cy() + out.dy,
                                               prev_box.w * scale, prev_box.h * scale);
  out.box = clamp_into(moved, cur_gray.width(), cur_gray.height());
  out.confidence = survival * std::exp(-median_of(std::move(fb_errors)) / 2.0);
  return out;
}

FlowResult propagate(const Frame& prev, const Frame& cur, const BoundingBox& prev_box,
                     const FlowParams& params) {
  return propagate_gray(to_gray(prev.rgb), to_gray(cur.rgb), prev_box, params);
}

}  // namespace rgbdt
