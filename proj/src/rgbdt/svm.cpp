#include "rgbdt/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rgbdt/error.hpp"

namespace rgbdt {

double SvmModel::decide(std::span<const double> feature) const {
  require(feature.size() == weights.size(), ErrorCode::invalid_argument,
          "feature dimension mismatch");
  double s = bias;
  for (size_t i = 0; i < feature.size(); ++i) s += weights[i] * feature[i];
  return s;
}

void SampleCache::add_positive(std::vector<double> f) {
  pos_.push_back(std::move(f));
  while (pos_.size() > pos_cap_) pos_.pop_front();
}

void SampleCache::add_negative(std::vector<double> f) {
  neg_.push_back(std::move(f));
  while (neg_.size() > neg_cap_) neg_.pop_front();
}

namespace {

double hinge_mean(const std::vector<double>& w, double b,
                  const std::deque<std::vector<double>>& pos,
                  const std::deque<std::vector<double>>& neg) {
  double sum = 0.0;
  auto margin = [&](const std::vector<double>& x) {
    double s = b;
    for (size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
    return s;
  };
  for (const auto& x : pos) sum += std::max(0.0, 1.0 - margin(x));
  for (const auto& x : neg) sum += std::max(0.0, 1.0 + margin(x));
  return sum / static_cast<double>(pos.size() + neg.size());
}

double objective(const std::vector<double>& w, double b, double c,
                 const std::deque<std::vector<double>>& pos,
                 const std::deque<std::vector<double>>& neg) {
  double sq = 0.0;
  for (double v : w) sq += v * v;
  return sq / (2.0 * c) + hinge_mean(w, b, pos, neg);
}

}  // namespace

double svm_objective(const SvmModel& model, const SampleCache& cache) {
  return objective(model.weights, model.bias, model.c, cache.positives(), cache.negatives());
}

SvmModel train(const SampleCache& cache, const SvmTrainParams& params,
               const TemplateGeometry& tmpl) {
  const auto& pos = cache.positives();
  const auto& neg = cache.negatives();
  require(!pos.empty() && !neg.empty(), ErrorCode::state,
          "SVM training needs both positive and negative samples");
  require(params.c > 0.0 && params.epochs > 0, ErrorCode::invalid_argument,
          "bad SVM training parameters");

  const size_t n = pos.size() + neg.size();
  const size_t dim = pos.front().size();
  for (const auto& x : pos)
    require(x.size() == dim, ErrorCode::invalid_argument, "inconsistent feature dimension");
  for (const auto& x : neg)
    require(x.size() == dim, ErrorCode::invalid_argument, "inconsistent feature dimension");

  const double lambda = 1.0 / params.c;
  std::vector<const std::vector<double>*> xs(n);
  std::vector<double> ys(n);
  for (size_t i = 0; i < pos.size(); ++i) {
    xs[i] = &pos[i];
    ys[i] = 1.0;
  }
  for (size_t i = 0; i < neg.size(); ++i) {
    xs[pos.size() + i] = &neg[i];
    ys[pos.size() + i] = -1.0;
  }

  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  std::vector<double> w_avg(dim, 0.0);
  double b_avg = 0.0;
  size_t avg_count = 0;

  std::mt19937_64 rng(params.seed);
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});

  const size_t total_steps = static_cast<size_t>(params.epochs) * n;
  const size_t avg_from = total_steps / 2;
  size_t t = 0;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t k = 0; k < n; ++k) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const auto& x = *xs[order[k]];
      const double y = ys[order[k]];
      double m = b;
      for (size_t i = 0; i < dim; ++i) m += w[i] * x[i];
      const double shrink = 1.0 - eta * lambda;
      if (y * m < 1.0) {
        const double step = eta * y;
        for (size_t i = 0; i < dim; ++i) w[i] = w[i] * shrink + step * x[i];
        b += step;
      } else {
        for (size_t i = 0; i < dim; ++i) w[i] *= shrink;
      }
      if (t > avg_from) {
        for (size_t i = 0; i < dim; ++i) w_avg[i] += w[i];
        b_avg += b;
        ++avg_count;
      }
    }
  }
  if (avg_count > 0) {
    for (auto& v : w_avg) v /= static_cast<double>(avg_count);
    b_avg /= static_cast<double>(avg_count);
  }

  const std::vector<double> zero(dim, 0.0);
  const double j_final = objective(w, b, params.c, pos, neg);
  const double j_avg = avg_count > 0 ? objective(w_avg, b_avg, params.c, pos, neg)
                                     : std::numeric_limits<double>::infinity();
  const double j_zero = objective(zero, 0.0, params.c, pos, neg);

  SvmModel model;
  model.tmpl = tmpl;
  model.c = params.c;
  if (j_avg <= j_final && j_avg <= j_zero) {
    model.weights = std::move(w_avg);
    model.bias = b_avg;
  } else if (j_final <= j_zero) {
    model.weights = std::move(w);
    model.bias = b;
  } else {
    model.weights = zero;
    model.bias = 0.0;
  }
  return model;
}

std::vector<Detection> score_windows(const FeaturePyramid& pyramid, const SvmModel& model,
                                     int top_k, int frame_w, int frame_h) {
  if (pyramid.levels.empty() || top_k <= 0) return {};
  const TemplateGeometry& t = model.tmpl;
  const int bins = t.bins;
  const size_t half = static_cast<size_t>(t.filter_cells_x()) * t.filter_cells_y() * bins;
  require(model.weights.size() == 2 * half, ErrorCode::invalid_argument,
          "model dimension does not match its template");

  const int pad = t.pad_cells;
  std::vector<Detection> all;
  for (size_t lvl = 0; lvl < pyramid.levels.size(); ++lvl) {
    const PyramidLevel& L = pyramid.levels[lvl];
    const HogGrid& rgb = L.grid.rgb;
    const HogGrid& dep = L.grid.depth;
    // The filter's context ring reads clamped cell indices at level borders.
    auto cl = [](int v, int hi) { return v < 0 ? 0 : (v >= hi ? hi - 1 : v); };
    for (int wy = 0; wy + t.cells_y <= rgb.cells_y; ++wy)
      for (int wx = 0; wx + t.cells_x <= rgb.cells_x; ++wx) {
        double s = model.bias;
        size_t wi = 0;
        for (int cy = 0; cy < t.filter_cells_y(); ++cy) {
          const int gy = cl(wy - pad + cy, rgb.cells_y);
          for (int cx = 0; cx < t.filter_cells_x(); ++cx) {
            const int gx = cl(wx - pad + cx, rgb.cells_x);
            for (int b = 0; b < bins; ++b, ++wi) s += model.weights[wi] * rgb.at(gy, gx, b);
          }
        }
        for (int cy = 0; cy < t.filter_cells_y(); ++cy) {
          const int gy = cl(wy - pad + cy, dep.cells_y);
          for (int cx = 0; cx < t.filter_cells_x(); ++cx) {
            const int gx = cl(wx - pad + cx, dep.cells_x);
            for (int b = 0; b < bins; ++b, ++wi) s += model.weights[wi] * dep.at(gy, gx, b);
          }
        }

        Detection d;
        d.score = s;
        d.level = static_cast<int>(lvl);
        d.cell_x = wx;
        d.cell_y = wy;
        const double inv = 1.0 / L.scale;
        d.box = clamp_into({wx * t.cell_size * inv, wy * t.cell_size * inv, t.px_w() * inv,
                            t.px_h() * inv},
                           frame_w, frame_h);
        all.push_back(d);
      }
  }

  std::sort(all.begin(), all.end(), [](const Detection& a, const Detection& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.level != b.level) return a.level < b.level;
    if (a.cell_y != b.cell_y) return a.cell_y < b.cell_y;
    return a.cell_x < b.cell_x;
  });

  std::vector<Detection> kept;
  for (const Detection& d : all) {
    bool suppressed = false;
    for (const Detection& k : kept)
      if (iou(d.box, k.box) > 0.5) {
        suppressed = true;
        break;
      }
    if (!suppressed) {
      kept.push_back(d);
      if (static_cast<int>(kept.size()) >= top_k) break;
    }
  }
  return kept;
}

std::vector<double> window_feature(const FeaturePyramid& pyramid, const Detection& det,
                                   const TemplateGeometry& tmpl) {
  require(det.level >= 0 && det.level < static_cast<int>(pyramid.levels.size()),
          ErrorCode::invalid_argument, "detection level out of range");
  const RgbdHogGrid& g = pyramid.levels[det.level].grid;
  auto cl = [](int v, int hi) { return v < 0 ? 0 : (v >= hi ? hi - 1 : v); };
  std::vector<double> f;
  f.reserve(tmpl.feature_dim());
  for (int cy = 0; cy < tmpl.filter_cells_y(); ++cy)
    for (int cx = 0; cx < tmpl.filter_cells_x(); ++cx)
      for (int b = 0; b < tmpl.bins; ++b)
        f.push_back(g.rgb.at(cl(det.cell_y - tmpl.pad_cells + cy, g.rgb.cells_y),
                             cl(det.cell_x - tmpl.pad_cells + cx, g.rgb.cells_x), b));
  for (int cy = 0; cy < tmpl.filter_cells_y(); ++cy)
    for (int cx = 0; cx < tmpl.filter_cells_x(); ++cx)
      for (int b = 0; b < tmpl.bins; ++b)
        f.push_back(g.depth.at(cl(det.cell_y - tmpl.pad_cells + cy, g.depth.cells_y),
                               cl(det.cell_x - tmpl.pad_cells + cx, g.depth.cells_x), b));
  return f;
}

void update(SvmModel& model, SampleCache& cache, const Frame& frame,
            const BoundingBox& accepted_box, const FeaturePyramid& pyramid, TrackMode mode,
            const UpdateParams& params) {
  cache.add_positive(flatten(extract_rgbd_hog(frame, accepted_box, model.tmpl, mode)));

  const auto dets = score_windows(pyramid, model, params.detect_pool, frame.width(), frame.height());
  int mined = 0;
  for (const Detection& d : dets) {
    if (mined >= params.hard_neg_per_frame) break;
    if (d.score <= params.hard_neg_margin) break;  // sorted by score
    if (iou(d.box, accepted_box) >= params.hard_neg_max_overlap) continue;
    cache.add_negative(window_feature(pyramid, d, model.tmpl));
    ++mined;
  }

  model = train(cache, params.train, model.tmpl);
}

}  // namespace rgbdt
