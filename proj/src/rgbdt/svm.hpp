#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "rgbdt/features.hpp"

namespace rgbdt {

/// Linear classifier over the flattened [rgb | depth] template feature.
struct SvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  TemplateGeometry tmpl;
  double c = 1.0;

  double decide(std::span<const double> feature) const;
};

/// Sliding-window hit, back-projected to native image coordinates.
struct Detection {
  BoundingBox box;
  double score = 0.0;
  int level = 0;
  int cell_x = 0;
  int cell_y = 0;
};

/// Bounded FIFO caches of training features; eviction is oldest-first.
class SampleCache {
 public:
  SampleCache(size_t pos_capacity, size_t neg_capacity)
      : pos_cap_(pos_capacity), neg_cap_(neg_capacity) {}

  void add_positive(std::vector<double> f);
  void add_negative(std::vector<double> f);

  const std::deque<std::vector<double>>& positives() const { return pos_; }
  const std::deque<std::vector<double>>& negatives() const { return neg_; }

 private:
  size_t pos_cap_;
  size_t neg_cap_;
  std::deque<std::vector<double>> pos_;
  std::deque<std::vector<double>> neg_;
};

struct SvmTrainParams {
  double c = 1.0;
  int epochs = 40;
  uint64_t seed = 1;
};

/// Primal objective ||w||^2 / (2C) + mean hinge loss. The mean (rather
/// than sum) keeps the objective invariant under duplicating the cache.
double svm_objective(const SvmModel& model, const SampleCache& cache);

/// Deterministic Pegasos-style subgradient descent on the primal hinge
/// loss: fixed epoch count, seeded shuffling, tail-iterate averaging.
/// Returns whichever of {final, tail average, zero} scores the lowest
/// objective. Throws unless the cache holds both classes.
SvmModel train(const SampleCache& cache, const SvmTrainParams& params,
               const TemplateGeometry& tmpl);

/// Top-k windows across all pyramid levels by raw SVM margin, after greedy
/// non-maximum suppression at IoU > 0.5. Scores are unchanged margins.
std::vector<Detection> score_windows(const FeaturePyramid& pyramid, const SvmModel& model,
                                     int top_k, int frame_w, int frame_h);

/// The exact feature vector the convolution scored for this detection.
std::vector<double> window_feature(const FeaturePyramid& pyramid, const Detection& det,
                                   const TemplateGeometry& tmpl);

struct UpdateParams {
  SvmTrainParams train;
  int hard_neg_per_frame = 10;
  double hard_neg_margin = -1.0;
  double hard_neg_max_overlap = 0.3;
  int detect_pool = 30;
};

/// Online update after a frame's box was accepted: the box feature joins
/// the positives, confusing windows join the negatives, model retrains.
void update(SvmModel& model, SampleCache& cache, const Frame& frame,
            const BoundingBox& accepted_box, const FeaturePyramid& pyramid, TrackMode mode,
            const UpdateParams& params);

}  // namespace rgbdt
