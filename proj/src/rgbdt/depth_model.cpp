#include "rgbdt/depth_model.hpp"

#include <algorithm>
#include <cmath>

#include "rgbdt/error.hpp"
#include "rgbdt/util.hpp"

namespace rgbdt {

namespace {

// Pixel (px,py) is inside a continuous box iff its center is.
struct PixelRect {
  int x0, y0, x1, y1;  // half-open
};

PixelRect pixel_rect(const BoundingBox& box, int width, int height) {
  PixelRect r;
  r.x0 = std::max(0, static_cast<int>(std::ceil(box.x - 0.5)));
  r.y0 = std::max(0, static_cast<int>(std::ceil(box.y - 0.5)));
  r.x1 = std::min(width, static_cast<int>(std::ceil(box.right() - 0.5)));
  r.y1 = std::min(height, static_cast<int>(std::ceil(box.bottom() - 0.5)));
  return r;
}

}  // namespace

DepthHistogram depth_histogram(const ImageU16& depth, const BoundingBox& box, int bin_width) {
  require(bin_width > 0, ErrorCode::invalid_argument, "bin width must be positive");
  require(box.valid(), ErrorCode::invalid_argument, "histogram box is degenerate");
  DepthHistogram h;
  h.bin_width = bin_width;
  h.bins.assign(static_cast<size_t>(kMaxDepthMm / bin_width) + 1, 0);
  const PixelRect r = pixel_rect(box, depth.width(), depth.height());
  for (int y = r.y0; y < r.y1; ++y)
    for (int x = r.x0; x < r.x1; ++x) {
      const int d = std::min<int>(depth.at(x, y), kMaxDepthMm);
      if (d == 0) continue;
      ++h.bins[d / bin_width];
      ++h.total;
    }
  return h;
}

DepthGaussian fit_gaussian(const DepthHistogram& h, double sigma_floor) {
  require(h.total > 0, ErrorCode::no_data, "cannot fit a depth model to an empty histogram");
  double mean = 0.0;
  for (size_t i = 0; i < h.bins.size(); ++i)
    if (h.bins[i]) mean += h.bins[i] * h.center(i);
  mean /= static_cast<double>(h.total);
  double var = 0.0;
  for (size_t i = 0; i < h.bins.size(); ++i)
    if (h.bins[i]) {
      const double d = h.center(i) - mean;
      var += h.bins[i] * d * d;
    }
  var /= static_cast<double>(h.total);
  return {mean, std::max(std::sqrt(var), sigma_floor)};
}

double occlusion_likelihood(const DepthHistogram& h, const DepthGaussian& g) {
  require(h.total > 0, ErrorCode::no_data, "occlusion likelihood of an empty histogram");
  const double threshold = g.mu - g.sigma;
  uint64_t near_count = 0;
  for (size_t i = 0; i < h.bins.size(); ++i) {
    if (h.center(i) >= threshold) break;  // centers increase with i
    near_count += h.bins[i];
  }
  return static_cast<double>(near_count) / static_cast<double>(h.total);
}

std::optional<double> median_box_depth(const ImageU16& depth, const BoundingBox& box) {
  const PixelRect r = pixel_rect(box, depth.width(), depth.height());
  std::vector<double> vals;
  for (int y = r.y0; y < r.y1; ++y)
    for (int x = r.x0; x < r.x1; ++x) {
      const int d = std::min<int>(depth.at(x, y), kMaxDepthMm);
      if (d > 0) vals.push_back(d);
    }
  if (vals.empty()) return std::nullopt;
  return median_of(std::move(vals));
}

std::vector<Detection> depth_gate(std::vector<Detection> candidates, const ImageU16& depth,
                                  const DepthGaussian& g, const GateParams& params) {
  const double tol = params.sigma_mult * g.sigma + params.slack_mm;
  std::vector<Detection> kept;
  kept.reserve(candidates.size());
  for (auto& c : candidates) {
    const auto med = median_box_depth(depth, c.box);
    if (!med.has_value() || std::abs(*med - g.mu) <= tol) kept.push_back(std::move(c));
  }
  return kept;
}

BoundingBox recenter(const BoundingBox& box, const ImageU16& depth, const DepthGaussian& g,
                     double expand_factor) {
  const BoundingBox search = expand(box, expand_factor);
  const PixelRect r = pixel_rect(search, depth.width(), depth.height());
  const int w = r.x1 - r.x0;
  const int h = r.y1 - r.y0;
  if (w <= 0 || h <= 0) return box;

  std::vector<uint8_t> mask(static_cast<size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int d = std::min<int>(depth.at(r.x0 + x, r.y0 + y), kMaxDepthMm);
      if (d > 0 && std::abs(d - g.mu) <= g.sigma) mask[static_cast<size_t>(y) * w + x] = 1;
    }

  // Largest 4-connected component of the mask, scanned in row-major order.
  std::vector<int32_t> label(mask.size(), -1);
  int best_label = -1;
  size_t best_size = 0;
  double best_sx = 0.0, best_sy = 0.0;
  std::vector<int> stack;
  int next = 0;
  for (size_t start = 0; start < mask.size(); ++start) {
    if (!mask[start] || label[start] >= 0) continue;
    const int me = next++;
    size_t size = 0;
    double sx = 0.0, sy = 0.0;
    stack.assign(1, static_cast<int>(start));
    label[start] = me;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      const int x = i % w;
      const int y = i / w;
      ++size;
      sx += x + 0.5;
      sy += y + 0.5;
      const int neigh[4] = {x > 0 ? i - 1 : -1, x + 1 < w ? i + 1 : -1, y > 0 ? i - w : -1,
                            y + 1 < h ? i + w : -1};
      for (int nb : neigh)
        if (nb >= 0 && mask[nb] && label[nb] < 0) {
          label[nb] = me;
          stack.push_back(nb);
        }
    }
    if (size > best_size) {
      best_size = size;
      best_label = me;
      best_sx = sx;
      best_sy = sy;
    }
  }
  if (best_label < 0) return box;

  const double cx = r.x0 + best_sx / best_size;
  const double cy = r.y0 + best_sy / best_size;
  return clamp_into(BoundingBox::from_center(cx, cy, box.w, box.h), depth.width(), depth.height());
}

DepthGaussian update_gaussian(const DepthGaussian& g, const DepthGaussian& observed, double rate,
                              double sigma_floor) {
  require(rate > 0.0 && rate <= 1.0, ErrorCode::invalid_argument, "update rate must be in (0,1]");
  DepthGaussian out;
  out.mu = (1.0 - rate) * g.mu + rate * observed.mu;
  out.sigma = std::max((1.0 - rate) * g.sigma + rate * observed.sigma, sigma_floor);
  return out;
}

}  // namespace rgbdt
