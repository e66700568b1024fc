#pragma once

#include <optional>

#include "rgbdt/config.hpp"
#include "rgbdt/depth_model.hpp"
#include "rgbdt/features.hpp"
#include "rgbdt/flow.hpp"
#include "rgbdt/geometry.hpp"
#include "rgbdt/image.hpp"
#include "rgbdt/occlusion.hpp"
#include "rgbdt/svm.hpp"

namespace rgbdt {

enum class Phase { normal, occluded };

struct FrameResult {
  int frame = 0;
  MaybeBox box;                      // Absent while fully occluded / lost
  double detection_confidence = 0.0; // raw SVM margin of the chosen candidate
  double flow_confidence = 0.0;      // c_t
  double fused_confidence = 0.0;     // c = c_d + alpha * c_t * r
  double occlusion_likelihood = 0.0; // O of the output box (depth modes)
  Phase phase = Phase::normal;       // phase after this step
  bool model_updated = false;        // SVM update ran this frame
};

/// Combined confidence of a detection given the flow result (the overlap
/// term is 0 when the flow box is absent).
double fuse(double detection_confidence, double flow_confidence, const BoundingBox& det_box,
            const MaybeBox& flow_box, double alpha);

/// Single-target online tracker; one instance per sequence, stepped
/// strictly in frame order.
class Tracker {
 public:
  Tracker(TrackMode mode, TrackerConfig cfg);

  /// Trains the initial model from the given box. Depth-model state is
  /// required (and its absence an error) in the occlusion-handling modes.
  void init(const Frame& frame, const BoundingBox& box);

  FrameResult step(const Frame& frame);

  bool initialized() const { return initialized_; }
  TrackMode mode() const { return mode_; }
  Phase phase() const { return phase_; }
  const TrackerConfig& config() const { return cfg_; }
  const TemplateGeometry& tmpl() const { return tmpl_; }
  const SvmModel& model() const { return model_; }
  const std::optional<DepthGaussian>& depth_model() const { return depth_g_; }
  const std::optional<OccluderModel>& occluder() const { return occluder_; }
  const MaybeBox& last_box() const { return last_box_; }

 private:
  FrameResult step_normal(const Frame& frame);
  FrameResult step_occluded(const Frame& frame);
  void accept_update(const Frame& frame, const BoundingBox& box, const FeaturePyramid& pyramid);
  void update_depth_model(const DepthHistogram& h);
  MaybeBox entry_output(const Frame& frame) const;

  TrackMode mode_;
  TrackerConfig cfg_;
  FlowParams flow_;
  bool initialized_ = false;
  Phase phase_ = Phase::normal;
  TemplateGeometry tmpl_;
  SvmModel model_;
  SampleCache cache_;
  std::optional<DepthGaussian> depth_g_;
  std::optional<OccluderModel> occluder_;
  MaybeBox last_box_;
  Frame last_frame_;
};

}  // namespace rgbdt
