#include "rgbdt/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rgbdt/error.hpp"

namespace rgbdt {

double fuse(double detection_confidence, double flow_confidence, const BoundingBox& det_box,
            const MaybeBox& flow_box, double alpha) {
  require(flow_confidence >= 0.0 && flow_confidence <= 1.0, ErrorCode::invalid_argument,
          "flow confidence must lie in [0,1]");
  const double r = flow_box.has_value() ? iou(det_box, *flow_box) : 0.0;
  return detection_confidence + alpha * flow_confidence * r;
}

Tracker::Tracker(TrackMode mode, TrackerConfig cfg)
    : mode_(mode), cfg_(std::move(cfg)), flow_(FlowParams::from_config(cfg_)),
      cache_(cfg_.pos_capacity, cfg_.neg_capacity) {}

void Tracker::init(const Frame& frame, const BoundingBox& box) {
  validate_frame(frame);
  require(box.valid(), ErrorCode::invalid_argument, "init box is degenerate");
  require(inside(box, frame.width(), frame.height()), ErrorCode::bounds,
          "init box lies outside the frame");

  tmpl_ = choose_template(box, cfg_);
  cache_ = SampleCache(cfg_.pos_capacity, cfg_.neg_capacity);
  // The single init positive is replicated to balance the mean hinge loss
  // against the sampled negatives; otherwise the margin never clears the
  // acceptance threshold.
  const auto init_positive = flatten(extract_rgbd_hog(frame, box, tmpl_, mode_, cfg_.block_cap));
  const int copies = std::max(1, cfg_.init_negatives / 2);
  for (int i = 0; i < copies; ++i) cache_.add_positive(init_positive);

  // Background negatives sampled away from the target.
  std::mt19937_64 rng(cfg_.seed);
  const double min_dist = cfg_.init_negative_min_dist * std::max(box.w, box.h);
  const int want = std::max(1, cfg_.init_negatives);
  std::uniform_real_distribution<double> ux(0.0, std::max(1e-9, frame.width() - box.w));
  std::uniform_real_distribution<double> uy(0.0, std::max(1e-9, frame.height() - box.h));
  int found = 0;
  for (int attempt = 0; attempt < want * 200 && found < want; ++attempt) {
    BoundingBox n{ux(rng), uy(rng), box.w, box.h};
    // Fall back to any non-overlapping window when the frame is too small
    // to honor the distance rule.
    const bool far_enough = attempt < want * 100 ? center_distance(n, box) >= min_dist
                                                 : intersect_area(n, box) == 0.0;
    if (!far_enough) continue;
    cache_.add_negative(flatten(extract_rgbd_hog(frame, n, tmpl_, mode_, cfg_.block_cap)));
    ++found;
  }
  if (found == 0) {
    // Degenerate frames still need a second class to train against.
    cache_.add_negative(std::vector<double>(tmpl_.feature_dim(), 0.0));
  }

  model_ = train(cache_, {cfg_.svm_c, cfg_.svm_epochs, cfg_.seed}, tmpl_);

  depth_g_.reset();
  if (mode_ != TrackMode::rgb) {
    const DepthHistogram h = depth_histogram(frame.depth, box, cfg_.bin_width_mm);
    if (h.total > 0) {
      depth_g_ = fit_gaussian(h, cfg_.sigma_floor_mm);
    } else {
      // Without any valid depth the occlusion machinery cannot run; the
      // plain RGBD mode degrades to RGB behavior instead.
      require(!mode_uses_occlusion(mode_), ErrorCode::no_data,
              "occlusion mode requires valid depth inside the init box");
    }
  }

  occluder_.reset();
  phase_ = Phase::normal;
  last_box_ = box;
  last_frame_ = frame;
  initialized_ = true;
}

void Tracker::update_depth_model(const DepthHistogram& h) {
  if (!depth_g_.has_value() || h.total == 0) return;
  depth_g_ = update_gaussian(*depth_g_, fit_gaussian(h, cfg_.sigma_floor_mm), cfg_.update_rate,
                             cfg_.sigma_floor_mm);
}

void Tracker::accept_update(const Frame& frame, const BoundingBox& box,
                            const FeaturePyramid& pyramid) {
  UpdateParams up;
  up.train = {cfg_.svm_c, cfg_.svm_epochs, cfg_.seed};
  up.hard_neg_per_frame = cfg_.hard_neg_per_frame;
  up.hard_neg_margin = cfg_.hard_neg_margin;
  up.hard_neg_max_overlap = cfg_.hard_neg_max_overlap;
  up.detect_pool = cfg_.detect_pool;
  update(model_, cache_, frame, box, pyramid, mode_, up);
}

MaybeBox Tracker::entry_output(const Frame& frame) const {
  // Output policy at occlusion entry: the last accepted box clipped to its
  // still-visible remainder (pixels within sigma of the target depth).
  if (!last_box_.has_value() || !depth_g_.has_value()) return std::nullopt;
  const BoundingBox& b = *last_box_;
  const int x0 = std::max(0, static_cast<int>(std::ceil(b.x - 0.5)));
  const int y0 = std::max(0, static_cast<int>(std::ceil(b.y - 0.5)));
  const int x1 = std::min(frame.width(), static_cast<int>(std::ceil(b.right() - 0.5)));
  const int y1 = std::min(frame.height(), static_cast<int>(std::ceil(b.bottom() - 0.5)));
  int minx = 1 << 30, miny = 1 << 30, maxx = -1, maxy = -1;
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) {
      const int d = std::min<int>(frame.depth.at(x, y), kMaxDepthMm);
      if (d > 0 && std::abs(d - depth_g_->mu) <= depth_g_->sigma) {
        minx = std::min(minx, x);
        miny = std::min(miny, y);
        maxx = std::max(maxx, x);
        maxy = std::max(maxy, y);
      }
    }
  if (maxx < 0) return std::nullopt;
  return BoundingBox{double(minx), double(miny), double(maxx - minx + 1), double(maxy - miny + 1)};
}

FrameResult Tracker::step(const Frame& frame) {
  require(initialized_, ErrorCode::state, "tracker is not initialized");
  validate_frame(frame);
  require(frame.width() == last_frame_.width() && frame.height() == last_frame_.height(),
          ErrorCode::invalid_argument, "frame size differs from the init frame");
  require(frame.index == last_frame_.index + 1, ErrorCode::state,
          "frames must be stepped in order");

  FrameResult res = phase_ == Phase::normal ? step_normal(frame) : step_occluded(frame);
  last_frame_ = frame;
  return res;
}

FrameResult Tracker::step_normal(const Frame& frame) {
  FrameResult res;
  res.frame = frame.index;

  const FlowResult flow_res = propagate(last_frame_, frame, *last_box_, flow_);
  res.flow_confidence = flow_res.confidence;

  const FeaturePyramid pyramid =
      build_pyramid(frame, cfg_.scale_step, tmpl_, mode_, cfg_.block_cap);
  std::vector<Detection> dets =
      score_windows(pyramid, model_, cfg_.detect_pool, frame.width(), frame.height());
  if (static_cast<int>(dets.size()) > cfg_.top_k) dets.resize(cfg_.top_k);

  if (mode_uses_depth(mode_) && depth_g_.has_value())
    dets = depth_gate(std::move(dets), frame.depth, *depth_g_,
                      {cfg_.gate_sigma_mult, cfg_.gate_slack_mm});

  const Detection* chosen = nullptr;
  double best_fused = 0.0;
  for (const Detection& d : dets) {
    const double c = fuse(d.score, flow_res.confidence, d.box, flow_res.box, cfg_.alpha);
    if (chosen == nullptr || c > best_fused) {
      chosen = &d;
      best_fused = c;
    }
  }

  BoundingBox out_box;
  bool have_candidate = false;
  if (chosen != nullptr && best_fused > cfg_.tau_accept) {
    out_box = chosen->box;
    if (mode_uses_depth(mode_) && depth_g_.has_value())
      out_box = recenter(out_box, frame.depth, *depth_g_, cfg_.recenter_expand);
    res.detection_confidence = chosen->score;
    res.fused_confidence = best_fused;
    have_candidate = true;
  } else if (flow_res.box.has_value()) {
    out_box = *flow_res.box;  // low-confidence fallback: follow the flow
  } else {
    out_box = *last_box_;  // hold when both detector and flow are lost
  }

  DepthHistogram h;
  double occ_likelihood = 0.0;
  if (depth_g_.has_value()) {
    h = depth_histogram(frame.depth, out_box, cfg_.bin_width_mm);
    if (h.total > 0) {
      // Eq. 3 against the same frame's fit: an approaching target moves
      // its own mu, so only genuinely nearer pixels count as occluder.
      occ_likelihood = occlusion_likelihood(h, fit_gaussian(h, cfg_.sigma_floor_mm));
    }
  }
  res.occlusion_likelihood = occ_likelihood;

  if (mode_uses_occlusion(mode_) && depth_g_.has_value() &&
      occ_likelihood > cfg_.occ_enter_threshold &&
      has_occluder_pixels(frame, out_box, *depth_g_)) {
    occluder_ = init_occluder(frame, out_box, *depth_g_, cfg_);
    phase_ = Phase::occluded;
    res.box = entry_output(frame);
    res.phase = phase_;
    last_box_ = res.box;
    return res;
  }

  if (have_candidate) {
    accept_update(frame, out_box, pyramid);
    res.model_updated = true;
  }
  update_depth_model(h);

  last_box_ = out_box;
  res.box = out_box;
  res.phase = phase_;
  return res;
}

FrameResult Tracker::step_occluded(const Frame& frame) {
  FrameResult res;
  res.frame = frame.index;
  res.phase = Phase::occluded;

  occluder_ = track_occluder(last_frame_, frame, *occluder_, flow_, cfg_);

  const FeaturePyramid pyramid =
      build_pyramid(frame, cfg_.scale_step, tmpl_, mode_, cfg_.block_cap);
  const auto candidates = local_search(frame, *occluder_, *depth_g_, model_, pyramid, mode_, cfg_);
  const MaybeBox recovered = try_recover(
      candidates, *occluder_,
      {cfg_.recover_area_ratio, cfg_.recover_max_occ_overlap, cfg_.tau_detect});

  if (!recovered.has_value()) {
    // Still occluded: no output, no model updates, keep following the occluder.
    last_box_ = std::nullopt;
    return res;
  }

  const BoundingBox box = clamp_into(*recovered, frame.width(), frame.height());
  phase_ = Phase::normal;
  occluder_.reset();

  accept_update(frame, box, pyramid);
  res.model_updated = true;

  const DepthHistogram h = depth_histogram(frame.depth, box, cfg_.bin_width_mm);
  if (h.total > 0)
    res.occlusion_likelihood = occlusion_likelihood(h, fit_gaussian(h, cfg_.sigma_floor_mm));
  update_depth_model(h);

  for (const auto& c : candidates)
    if (c.box == *recovered) {
      res.detection_confidence = c.svm_score;
      res.fused_confidence = c.svm_score;
      break;
    }

  last_box_ = box;
  res.box = box;
  res.phase = phase_;
  return res;
}

}  // namespace rgbdt
