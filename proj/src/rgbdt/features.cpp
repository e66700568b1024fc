#include "rgbdt/features.hpp"

#include <algorithm>
#include <cmath>

namespace rgbdt {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNormEps2 = 1e-12;  // added under the sqrt of block norms

// Per-pixel gradient votes: orientation bin (-1 = no vote) and magnitude.
struct GradientVotes {
  int width = 0;
  int height = 0;
  std::vector<int> bin;
  std::vector<double> mag;
};

int orientation_bin(double gx, double gy, int bins) {
  double theta = std::atan2(gy, gx);  // (-pi, pi]
  if (theta < 0.0) theta += kPi;      // unsigned orientation in [0, pi)
  if (theta >= kPi) theta -= kPi;
  int b = static_cast<int>(theta / (kPi / bins));
  return std::min(b, bins - 1);
}

GradientVotes gray_votes(const ImageF& img, int bins) {
  GradientVotes v{img.width(), img.height()};
  v.bin.assign(static_cast<size_t>(v.width) * v.height, -1);
  v.mag.assign(static_cast<size_t>(v.width) * v.height, 0.0);
  for (int y = 0; y < v.height; ++y)
    for (int x = 0; x < v.width; ++x) {
      const double gx = img.at_clamped(x + 1, y) - img.at_clamped(x - 1, y);
      const double gy = img.at_clamped(x, y + 1) - img.at_clamped(x, y - 1);
      const double m = std::sqrt(gx * gx + gy * gy);
      if (m <= 0.0) continue;
      const size_t i = static_cast<size_t>(y) * v.width + x;
      v.mag[i] = m;
      v.bin[i] = orientation_bin(gx, gy, bins);
    }
  return v;
}

GradientVotes rgb_votes(const ImageF& rgb3, int bins) {
  GradientVotes v{rgb3.width(), rgb3.height()};
  v.bin.assign(static_cast<size_t>(v.width) * v.height, -1);
  v.mag.assign(static_cast<size_t>(v.width) * v.height, 0.0);
  for (int y = 0; y < v.height; ++y)
    for (int x = 0; x < v.width; ++x) {
      double best_m2 = 0.0, best_gx = 0.0, best_gy = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double gx = rgb3.at_clamped(x + 1, y, c) - rgb3.at_clamped(x - 1, y, c);
        const double gy = rgb3.at_clamped(x, y + 1, c) - rgb3.at_clamped(x, y - 1, c);
        const double m2 = gx * gx + gy * gy;
        if (m2 > best_m2) {
          best_m2 = m2;
          best_gx = gx;
          best_gy = gy;
        }
      }
      if (best_m2 <= 0.0) continue;
      const size_t i = static_cast<size_t>(y) * v.width + x;
      v.mag[i] = std::sqrt(best_m2);
      v.bin[i] = orientation_bin(best_gx, best_gy, bins);
    }
  return v;
}

GradientVotes masked_votes(const ImageF& gray, const ImageF& valid, int bins) {
  GradientVotes v{gray.width(), gray.height()};
  v.bin.assign(static_cast<size_t>(v.width) * v.height, -1);
  v.mag.assign(static_cast<size_t>(v.width) * v.height, 0.0);
  auto ok = [&](int x, int y) { return valid.at_clamped(x, y) >= 0.999f; };
  for (int y = 0; y < v.height; ++y)
    for (int x = 0; x < v.width; ++x) {
      // A gradient bridging an invalid pixel is dropped, not treated as an edge.
      if (!ok(x, y) || !ok(x + 1, y) || !ok(x - 1, y) || !ok(x, y + 1) || !ok(x, y - 1)) continue;
      const double gx = gray.at_clamped(x + 1, y) - gray.at_clamped(x - 1, y);
      const double gy = gray.at_clamped(x, y + 1) - gray.at_clamped(x, y - 1);
      const double m = std::sqrt(gx * gx + gy * gy);
      if (m <= 0.0) continue;
      const size_t i = static_cast<size_t>(y) * v.width + x;
      v.mag[i] = m;
      v.bin[i] = orientation_bin(gx, gy, bins);
    }
  return v;
}

HogGrid hog_from_votes(const GradientVotes& v, int cell_size, int bins, double cap) {
  require(cell_size > 0 && bins > 0, ErrorCode::invalid_argument, "bad HOG parameters");
  const int cells_x = v.width / cell_size;
  const int cells_y = v.height / cell_size;
  require(cells_x >= 2 && cells_y >= 2, ErrorCode::invalid_argument,
          "image too small for HOG: need at least 2 cells per axis");

  HogGrid raw(cells_y, cells_x, bins);
  for (int y = 0; y < cells_y * cell_size; ++y)
    for (int x = 0; x < cells_x * cell_size; ++x) {
      const size_t i = static_cast<size_t>(y) * v.width + x;
      if (v.bin[i] < 0) continue;
      raw.at(y / cell_size, x / cell_size, v.bin[i]) += v.mag[i];
    }

  // 2x2-cell blocks: L2 normalize, clip at cap, renormalize; each cell's
  // output averages its slice over every block covering it.
  HogGrid out(cells_y, cells_x, bins);
  std::vector<int> cover(static_cast<size_t>(cells_y) * cells_x, 0);
  std::vector<double> block(static_cast<size_t>(4) * bins);
  for (int by = 0; by + 1 < cells_y; ++by)
    for (int bx = 0; bx + 1 < cells_x; ++bx) {
      const int cys[4] = {by, by, by + 1, by + 1};
      const int cxs[4] = {bx, bx + 1, bx, bx + 1};
      double sumsq = 0.0;
      for (int k = 0; k < 4; ++k)
        for (int b = 0; b < bins; ++b) {
          const double e = raw.at(cys[k], cxs[k], b);
          block[k * bins + b] = e;
          sumsq += e * e;
        }
      const double n1 = std::sqrt(sumsq + kNormEps2);
      double sumsq2 = 0.0;
      for (auto& e : block) {
        e = std::min(e / n1, cap);
        sumsq2 += e * e;
      }
      const double n2 = std::sqrt(sumsq2 + kNormEps2);
      for (int k = 0; k < 4; ++k) {
        for (int b = 0; b < bins; ++b) out.at(cys[k], cxs[k], b) += block[k * bins + b] / n2;
        ++cover[static_cast<size_t>(cys[k]) * cells_x + cxs[k]];
      }
    }
  for (int cy = 0; cy < cells_y; ++cy)
    for (int cx = 0; cx < cells_x; ++cx) {
      const int n = cover[static_cast<size_t>(cy) * cells_x + cx];
      if (n > 1)
        for (int b = 0; b < bins; ++b) out.at(cy, cx, b) /= n;
    }
  return out;
}

}  // namespace

ImageU8 depth_to_gray(const ImageU16& depth) {
  ImageU8 out(depth.width(), depth.height(), 1);
  for (int y = 0; y < depth.height(); ++y)
    for (int x = 0; x < depth.width(); ++x) {
      const int d = std::min<int>(depth.at(x, y), kMaxDepthMm);
      out.at(x, y) = static_cast<uint8_t>((d * 255 * 2 + kMaxDepthMm) / (2 * kMaxDepthMm));
    }
  return out;
}

void depth_to_gray_f(const ImageU16& depth, ImageF& gray, ImageF& valid) {
  gray = ImageF(depth.width(), depth.height(), 1);
  valid = ImageF(depth.width(), depth.height(), 1);
  for (int y = 0; y < depth.height(); ++y)
    for (int x = 0; x < depth.width(); ++x) {
      const int d = std::min<int>(depth.at(x, y), kMaxDepthMm);
      if (d == 0) continue;  // invalid: gray 0, valid 0
      gray.at(x, y) = static_cast<float>(d * 255.0 / kMaxDepthMm);
      valid.at(x, y) = 1.0f;
    }
}

HogGrid compute_hog(const ImageF& gray, int cell_size, int bins, double cap) {
  require(gray.channels() == 1, ErrorCode::invalid_argument, "compute_hog expects 1 channel");
  require(gray.width() >= 2 * cell_size && gray.height() >= 2 * cell_size,
          ErrorCode::invalid_argument, "image too small for HOG");
  return hog_from_votes(gray_votes(gray, bins), cell_size, bins, cap);
}

HogGrid compute_hog_rgb(const ImageF& rgb3, int cell_size, int bins, double cap) {
  require(rgb3.channels() == 3, ErrorCode::invalid_argument, "compute_hog_rgb expects 3 channels");
  require(rgb3.width() >= 2 * cell_size && rgb3.height() >= 2 * cell_size,
          ErrorCode::invalid_argument, "image too small for HOG");
  return hog_from_votes(rgb_votes(rgb3, bins), cell_size, bins, cap);
}

HogGrid compute_hog_masked(const ImageF& gray, const ImageF& valid, int cell_size, int bins,
                           double cap) {
  require(gray.channels() == 1 && valid.channels() == 1, ErrorCode::invalid_argument,
          "compute_hog_masked expects 1-channel inputs");
  return hog_from_votes(masked_votes(gray, valid, bins), cell_size, bins, cap);
}

TemplateGeometry choose_template(const BoundingBox& box, const TrackerConfig& cfg) {
  require(box.valid(), ErrorCode::invalid_argument, "template from degenerate box");
  const double cx0 = box.w / cfg.cell_size;
  const double cy0 = box.h / cfg.cell_size;
  double s = 1.0;
  const double mx = std::max(cx0, cy0);
  if (mx * s > cfg.max_cells) s = cfg.max_cells / mx;
  const double mn = std::min(cx0, cy0);
  if (mn * s < cfg.min_cells) s = cfg.min_cells / mn;
  TemplateGeometry t;
  t.cell_size = cfg.cell_size;
  t.bins = cfg.orientation_bins;
  t.cells_x = std::clamp(static_cast<int>(std::lround(cx0 * s)), cfg.min_cells, cfg.max_cells);
  t.cells_y = std::clamp(static_cast<int>(std::lround(cy0 * s)), cfg.min_cells, cfg.max_cells);
  return t;
}

RgbdHogGrid extract_rgbd_hog(const Frame& frame, const BoundingBox& region,
                             const TemplateGeometry& tmpl, TrackMode mode, double cap) {
  require(region.valid(), ErrorCode::invalid_argument, "extract region is degenerate");
  const BoundingBox clipped{std::max(region.x, 0.0), std::max(region.y, 0.0),
                            std::min(region.right(), double(frame.width())) - std::max(region.x, 0.0),
                            std::min(region.bottom(), double(frame.height())) - std::max(region.y, 0.0)};
  require(clipped.w > 0.0 && clipped.h > 0.0, ErrorCode::bounds,
          "extract region does not intersect the frame");

  const int pad = tmpl.pad_cells;
  const int pw = tmpl.filter_cells_x() * tmpl.cell_size;
  const int ph = tmpl.filter_cells_y() * tmpl.cell_size;
  const double src_x0 = region.x - pad * region.w / tmpl.cells_x;
  const double src_y0 = region.y - pad * region.h / tmpl.cells_y;
  const double src_w = region.w * tmpl.filter_cells_x() / tmpl.cells_x;
  const double src_h = region.h * tmpl.filter_cells_y() / tmpl.cells_y;

  const ImageF rgbf = to_float(frame.rgb);
  ImageF patch(pw, ph, 3);
  ImageF dgray(pw, ph, 1);
  ImageF dvalid(pw, ph, 1);
  for (int j = 0; j < ph; ++j) {
    const double sy = src_y0 + (j + 0.5) * src_h / ph - 0.5;
    for (int i = 0; i < pw; ++i) {
      const double sx = src_x0 + (i + 0.5) * src_w / pw - 0.5;
      for (int c = 0; c < 3; ++c) patch.at(i, j, c) = sample_bilinear(rgbf, sx, sy, c);
      // Depth resamples nearest so holes stay holes instead of blending.
      const int px = std::clamp(static_cast<int>(std::lround(sx)), 0, frame.width() - 1);
      const int py = std::clamp(static_cast<int>(std::lround(sy)), 0, frame.height() - 1);
      const int d = std::min<int>(frame.depth.at(px, py), kMaxDepthMm);
      if (d > 0) {
        dgray.at(i, j) = static_cast<float>(d * 255.0 / kMaxDepthMm);
        dvalid.at(i, j) = 1.0f;
      }
    }
  }

  RgbdHogGrid out;
  out.rgb = compute_hog_rgb(patch, tmpl.cell_size, tmpl.bins, cap);
  if (mode_uses_depth(mode))
    out.depth = compute_hog_masked(dgray, dvalid, tmpl.cell_size, tmpl.bins, cap);
  else
    out.depth = HogGrid(out.rgb.cells_y, out.rgb.cells_x, out.rgb.bins);
  return out;
}

std::vector<double> flatten(const RgbdHogGrid& grid) {
  std::vector<double> v;
  v.reserve(grid.rgb.data.size() + grid.depth.data.size());
  v.insert(v.end(), grid.rgb.data.begin(), grid.rgb.data.end());
  v.insert(v.end(), grid.depth.data.begin(), grid.depth.data.end());
  return v;
}

FeaturePyramid build_pyramid(const Frame& frame, double scale_step, const TemplateGeometry& tmpl,
                             TrackMode mode, double cap) {
  require(scale_step > 1.0, ErrorCode::invalid_argument, "scale_step must be > 1");
  FeaturePyramid pyr;
  pyr.scale_step = scale_step;

  const ImageF rgbf = to_float(frame.rgb);
  ImageF dgray, dvalid;
  depth_to_gray_f(frame.depth, dgray, dvalid);

  for (int level = 0;; ++level) {
    const double scale = std::pow(1.0 / scale_step, level);
    const int w = static_cast<int>(std::lround(frame.width() * scale));
    const int h = static_cast<int>(std::lround(frame.height() * scale));
    if (w < tmpl.px_w() || h < tmpl.px_h()) break;

    PyramidLevel lvl;
    lvl.scale = scale;
    const ImageF rgb_s = level == 0 ? rgbf : resize_bilinear(rgbf, w, h);
    lvl.grid.rgb = compute_hog_rgb(rgb_s, tmpl.cell_size, tmpl.bins, cap);
    if (mode_uses_depth(mode)) {
      ImageF g = level == 0 ? dgray : resize_bilinear(dgray, w, h);
      ImageF v = level == 0 ? dvalid : resize_bilinear(dvalid, w, h);
      lvl.grid.depth = compute_hog_masked(g, v, tmpl.cell_size, tmpl.bins, cap);
    } else {
      lvl.grid.depth = HogGrid(lvl.grid.rgb.cells_y, lvl.grid.rgb.cells_x, lvl.grid.rgb.bins);
    }
    pyr.levels.push_back(std::move(lvl));
  }
  return pyr;
}

}  // namespace rgbdt
