#pragma once

#include <optional>
#include <vector>

#include "rgbdt/config.hpp"
#include "rgbdt/depth_model.hpp"
#include "rgbdt/flow.hpp"
#include "rgbdt/geometry.hpp"
#include "rgbdt/image.hpp"
#include "rgbdt/svm.hpp"

namespace rgbdt {

/// Model of the object occluding the target, initialized on entering the
/// occlusion state from the in-box pixels nearer than mu - sigma.
struct OccluderModel {
  DepthGaussian depth;
  std::vector<double> color_hist;  // 16x16x16 RGB histogram, sums to 1
  BoundingBox box;
  double target_area_pre = 0.0;  // target box area at occlusion entry
};

inline constexpr int kColorBinsPerChannel = 16;

struct Region {
  BoundingBox box;         // pixel bounding rectangle
  size_t area = 0;         // pixel count
  double median_depth = 0; // of the region's valid pixels
};

struct CandidateRegion {
  BoundingBox box;
  double area = 0.0;  // visible pixel area for segments, box area for detections
  double svm_score = 0.0;
  double overlap_with_occluder = 0.0;
};

/// Throws when no in-box pixel is nearer than target mu - sigma (the state
/// machine must not have entered occlusion in that case).
OccluderModel init_occluder(const Frame& frame, const BoundingBox& target_box,
                            const DepthGaussian& target_g, const TrackerConfig& cfg);

/// True when init_occluder would find occluder pixels.
bool has_occluder_pixels(const Frame& frame, const BoundingBox& target_box,
                         const DepthGaussian& target_g);

/// Propagates the occluder box by optical flow (held in place on flow
/// failure) and refits its depth from in-box pixels inside its depth gate.
OccluderModel track_occluder(const Frame& prev, const Frame& cur, const OccluderModel& occ,
                             const FlowParams& flow, const TrackerConfig& cfg);

/// Connected components (4-neighborhood) of valid pixels whose neighbor
/// depth differs by at most thresh_mm; regions below min_area are dropped.
std::vector<Region> segment_depth(const Frame& frame, const BoundingBox& roi, int thresh_mm,
                                  double min_area);

/// Connected components (8-neighborhood) of pixels whose per-channel max
/// RGB distance to the neighbor is at most thresh.
std::vector<Region> segment_rgb(const Frame& frame, const BoundingBox& roi, int thresh,
                                double min_area);

/// Joint (depth region, color region) refinement over the ROI: labels is a
/// row-major map over the clipped ROI rect (-1 = pixel in no region, e.g.
/// invalid depth) and regions[id] aggregates the pixels labeled id. No
/// size filter is applied here.
struct CombinedSegmentation {
  int x0 = 0, y0 = 0, width = 0, height = 0;
  std::vector<int32_t> labels;
  std::vector<Region> regions;
};
CombinedSegmentation combined_segmentation(const Frame& frame, const BoundingBox& roi,
                                           int depth_thresh_mm, int rgb_thresh);

/// Joint RGB/depth segmentation around the occluder plus detector windows
/// in the search ROI, scored by the SVM. Regions matching the occluder
/// depth gate are removed; duplicates are merged; the list is sorted by
/// score (ties by left-then-top box position).
std::vector<CandidateRegion> local_search(const Frame& frame, const OccluderModel& occ,
                                          const DepthGaussian& target_g, const SvmModel& model,
                                          const FeaturePyramid& pyramid, TrackMode mode,
                                          const TrackerConfig& cfg);

struct RecoveryThresholds {
  double min_area_ratio = 0.5;   // of target_area_pre
  double max_occ_overlap = 0.3;
  double tau_detect = 0.0;
};

/// Highest-scoring candidate that is large enough, clear of the occluder,
/// and confidently classified; Absent when none qualifies.
MaybeBox try_recover(const std::vector<CandidateRegion>& candidates, const OccluderModel& occ,
                     const RecoveryThresholds& thresholds);

}  // namespace rgbdt
