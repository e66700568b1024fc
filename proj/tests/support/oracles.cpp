#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

namespace {

bool pixel_in(const rgbdt::BoundingBox& b, int px, int py) {
  return px >= b.x && px < b.x + b.w && py >= b.y && py < b.y + b.h;
}

}  // namespace

long pixel_intersection(const rgbdt::BoundingBox& a, const rgbdt::BoundingBox& b, int grid) {
  long n = 0;
  for (int py = 0; py < grid; ++py)
    for (int px = 0; px < grid; ++px)
      if (pixel_in(a, px, py) && pixel_in(b, px, py)) ++n;
  return n;
}

double pixel_jaccard(const rgbdt::BoundingBox& a, const rgbdt::BoundingBox& b, int grid) {
  long inter = 0, uni = 0;
  for (int py = 0; py < grid; ++py)
    for (int px = 0; px < grid; ++px) {
      const bool ia = pixel_in(a, px, py);
      const bool ib = pixel_in(b, px, py);
      if (ia && ib) ++inter;
      if (ia || ib) ++uni;
    }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

rgbdt::HogGrid naive_hog(const rgbdt::ImageF& gray, int cell_size, int bins, double cap) {
  const int W = gray.width();
  const int H = gray.height();
  const int cells_x = W / cell_size;
  const int cells_y = H / cell_size;
  const double pi = 3.14159265358979323846;

  auto pixel = [&](int x, int y) -> double {
    x = std::clamp(x, 0, W - 1);
    y = std::clamp(y, 0, H - 1);
    return gray.at(x, y);
  };

  // Raw per-cell histograms, looping cells then their pixels.
  rgbdt::HogGrid raw(cells_y, cells_x, bins);
  for (int cy = 0; cy < cells_y; ++cy)
    for (int cx = 0; cx < cells_x; ++cx)
      for (int py = cy * cell_size; py < (cy + 1) * cell_size; ++py)
        for (int px = cx * cell_size; px < (cx + 1) * cell_size; ++px) {
          const double gx = pixel(px + 1, py) - pixel(px - 1, py);
          const double gy = pixel(px, py + 1) - pixel(px, py - 1);
          const double mag = std::sqrt(gx * gx + gy * gy);
          if (mag <= 0.0) continue;
          double theta = std::atan2(gy, gx);
          if (theta < 0.0) theta += pi;
          if (theta >= pi) theta -= pi;
          int bin = static_cast<int>(theta / (pi / bins));
          if (bin >= bins) bin = bins - 1;
          raw.at(cy, cx, bin) += mag;
        }

  rgbdt::HogGrid out(cells_y, cells_x, bins);
  std::vector<int> covered(static_cast<size_t>(cells_y) * cells_x, 0);
  for (int by = 0; by + 1 < cells_y; ++by)
    for (int bx = 0; bx + 1 < cells_x; ++bx) {
      std::vector<double> v;
      v.reserve(4 * bins);
      const int cys[4] = {by, by, by + 1, by + 1};
      const int cxs[4] = {bx, bx + 1, bx, bx + 1};
      for (int k = 0; k < 4; ++k)
        for (int b = 0; b < bins; ++b) v.push_back(raw.at(cys[k], cxs[k], b));
      double ss = 0.0;
      for (double e : v) ss += e * e;
      const double n1 = std::sqrt(ss + 1e-12);
      double ss2 = 0.0;
      for (double& e : v) {
        e = std::min(e / n1, cap);
        ss2 += e * e;
      }
      const double n2 = std::sqrt(ss2 + 1e-12);
      for (int k = 0; k < 4; ++k) {
        for (int b = 0; b < bins; ++b) out.at(cys[k], cxs[k], b) += v[k * bins + b] / n2;
        covered[static_cast<size_t>(cys[k]) * cells_x + cxs[k]] += 1;
      }
    }
  for (int cy = 0; cy < cells_y; ++cy)
    for (int cx = 0; cx < cells_x; ++cx) {
      const int n = covered[static_cast<size_t>(cy) * cells_x + cx];
      if (n > 1)
        for (int b = 0; b < bins; ++b) out.at(cy, cx, b) /= n;
    }
  return out;
}

double svm_reference_objective(const std::vector<double>& w, double b,
                               const std::vector<std::vector<double>>& positives,
                               const std::vector<std::vector<double>>& negatives, double c) {
  double sq = 0.0;
  for (double v : w) sq += v * v;
  double hinge = 0.0;
  auto margin = [&](const std::vector<double>& x) {
    double s = b;
    for (size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
    return s;
  };
  for (const auto& x : positives) hinge += std::max(0.0, 1.0 - margin(x));
  for (const auto& x : negatives) hinge += std::max(0.0, 1.0 + margin(x));
  hinge /= static_cast<double>(positives.size() + negatives.size());
  return sq / (2.0 * c) + hinge;
}

SvmReference reference_svm(const std::vector<std::vector<double>>& positives,
                           const std::vector<std::vector<double>>& negatives, double c,
                           int iterations) {
  const size_t dim = positives.front().size();
  const size_t n = positives.size() + negatives.size();
  std::vector<double> w(dim, 0.0);
  double b = 0.0;

  SvmReference best;
  best.w = w;
  best.b = b;
  best.objective = svm_reference_objective(w, b, positives, negatives, c);

  std::vector<double> grad(dim);
  for (int t = 1; t <= iterations; ++t) {
    for (size_t i = 0; i < dim; ++i) grad[i] = w[i] / c;
    double gb = 0.0;
    auto add_violation = [&](const std::vector<double>& x, double y) {
      double m = b;
      for (size_t i = 0; i < dim; ++i) m += w[i] * x[i];
      if (y * m < 1.0) {
        for (size_t i = 0; i < dim; ++i) grad[i] -= y * x[i] / static_cast<double>(n);
        gb -= y / static_cast<double>(n);
      }
    };
    for (const auto& x : positives) add_violation(x, 1.0);
    for (const auto& x : negatives) add_violation(x, -1.0);

    const double eta = 1.0 / std::sqrt(static_cast<double>(t));
    for (size_t i = 0; i < dim; ++i) w[i] -= eta * grad[i];
    b -= eta * gb;

    const double j = svm_reference_objective(w, b, positives, negatives, c);
    if (j < best.objective) {
      best.objective = j;
      best.w = w;
      best.b = b;
    }
  }
  return best;
}

double brute_success_rate(std::span<const double> rs, double rt) {
  long hits = 0;
  for (double r : rs)
    if (r > rt) ++hits;
  return static_cast<double>(hits) / static_cast<double>(rs.size());
}

BruteErrorCounts brute_errors(std::span<const rgbdt::MaybeBox> t,
                              std::span<const rgbdt::MaybeBox> g, double rt) {
  BruteErrorCounts c;
  for (size_t i = 0; i < t.size(); ++i) {
    const bool tp = t[i].has_value();
    const bool gp = g[i].has_value();
    if (tp && !gp) {
      ++c.type2;
    } else if (!tp && gp) {
      ++c.type3;
    } else if (!tp && !gp) {
      ++c.success;  // overlap defined as 1
    } else {
      const double inter = rgbdt::intersect_area(*t[i], *g[i]);
      const double r = inter / (t[i]->area() + g[i]->area() - inter);
      if (r > rt) ++c.success;
      else ++c.type1;
    }
  }
  return c;
}

BruteSpeed brute_speed(std::span<const rgbdt::MaybeBox> g) {
  BruteSpeed s;
  double sum = 0.0;
  long pairs = 0;
  for (size_t i = 0; i + 1 < g.size(); ++i) {
    if (!g[i].has_value() || !g[i + 1].has_value()) continue;
    const double inter = rgbdt::intersect_area(*g[i], *g[i + 1]);
    const double r = inter / (g[i]->area() + g[i + 1]->area() - inter);
    const double speed = 1.0 - r;
    if (pairs == 0 || speed > s.max) s.max = speed;
    sum += speed;
    ++pairs;
  }
  if (pairs > 0) {
    s.defined = true;
    s.mean = sum / pairs;
  }
  return s;
}

}  // namespace oracle
