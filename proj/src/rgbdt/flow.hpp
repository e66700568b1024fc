#pragma once

#include "rgbdt/config.hpp"
#include "rgbdt/geometry.hpp"
#include "rgbdt/image.hpp"

namespace rgbdt {

struct FlowParams {
  int grid = 10;          // grid x grid points seeded inside the box
  int levels = 3;         // pyramid levels (halving)
  int win_radius = 5;     // tracking window radius
  int iterations = 20;
  double fb_thresh_px = 2.0;   // forward-backward rejection radius
  double min_survival = 0.2;   // below this fraction the result is Absent
  double ncc_min = 0.5;        // patch correlation rejection
  double scale_clamp = 0.1;    // per-frame scale limited to [1-c, 1+c]

  static FlowParams from_config(const TrackerConfig& cfg) {
    FlowParams p;
    p.grid = cfg.flow_grid;
    p.levels = cfg.flow_levels;
    p.win_radius = cfg.flow_win_radius;
    p.iterations = cfg.flow_iterations;
    p.fb_thresh_px = cfg.flow_fb_thresh_px;
    p.min_survival = cfg.flow_min_survival;
    p.ncc_min = cfg.flow_ncc_min;
    p.scale_clamp = cfg.flow_scale_clamp;
    return p;
  }
};

struct FlowResult {
  MaybeBox box;              // Absent when too few points survive
  double confidence = 0.0;   // in [0,1]; 0 whenever box is Absent
  double dx = 0.0;           // median displacement of surviving points
  double dy = 0.0;
};

/// Propagates a box from prev to cur with pyramidal least-squares point
/// tracking on a regular grid, forward-backward validation, and median
/// displacement / median pairwise-distance-ratio box transfer. Confidence
/// is the surviving fraction damped by the median round-trip error.
FlowResult propagate(const Frame& prev, const Frame& cur, const BoundingBox& prev_box,
                     const FlowParams& params);

/// Same tracker on prebuilt grayscale images (flow runs on RGB luminance).
FlowResult propagate_gray(const ImageF& prev_gray, const ImageF& cur_gray,
                          const BoundingBox& prev_box, const FlowParams& params);

}  // namespace rgbdt
