#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rgbdt {

/// Tracker variant. RGB feature modes with/without the depth channel,
/// each with or without the occlusion state machine.
enum class TrackMode { rgb, rgbd, rgb_occ, rgbd_occ };

/// Whether the mode feeds the depth HOG channel and depth gating/recentering.
bool mode_uses_depth(TrackMode m);
/// Whether the mode runs the occlusion state machine.
bool mode_uses_occlusion(TrackMode m);

TrackMode parse_mode(std::string_view name);  // "rgb" | "rgbd" | "rgbocc" | "rgbdocc"
std::string mode_name(TrackMode m);

/// All tunable constants, serializable as a flat key=value text file.
/// Defaults are the values the tracker was tuned with.
struct TrackerConfig {
  // fusion / acceptance
  double alpha = 0.5;               // weight of the flow agreement term
  double occ_enter_threshold = 0.35;
  double tau_accept = -0.5;         // minimum fused confidence to accept a candidate
  double tau_detect = 0.0;          // minimum SVM margin for occlusion recovery

  // features
  int cell_size = 8;
  int orientation_bins = 9;
  double block_cap = 0.2;
  int min_cells = 4;
  int max_cells = 12;
  double scale_step = 1.2;

  // detector / SVM
  int top_k = 5;
  double svm_c = 1.0;
  int svm_epochs = 40;
  int pos_capacity = 50;
  int neg_capacity = 200;
  int init_negatives = 20;
  double init_negative_min_dist = 1.5;  // in units of max(box w, box h)
  int hard_neg_per_frame = 10;
  double hard_neg_margin = -1.0;
  double hard_neg_max_overlap = 0.3;
  int detect_pool = 30;  // NMS'd detections kept for fusion + mining

  // depth model
  int bin_width_mm = 50;
  double update_rate = 0.2;
  double sigma_floor_mm = 30.0;
  double gate_sigma_mult = 3.0;
  double gate_slack_mm = 200.0;
  double recenter_expand = 1.4;
  int max_depth_mm = 10000;

  // optical flow
  int flow_grid = 10;
  int flow_levels = 3;
  int flow_win_radius = 5;
  int flow_iterations = 20;
  double flow_fb_thresh_px = 2.0;
  double flow_min_survival = 0.2;
  double flow_ncc_min = 0.5;
  double flow_scale_clamp = 0.1;  // per-frame scale within [1-c, 1+c]

  // occlusion handling
  double search_scale = 2.0;
  double recover_area_ratio = 0.5;
  double recover_max_occ_overlap = 0.3;
  int depth_seg_thresh_mm = 100;
  int rgb_seg_thresh = 30;
  double seg_min_area_ratio = 0.05;

  uint64_t seed = 1;

  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  std::vector<std::string> keys() const;

  std::string serialize() const;
  static TrackerConfig parse(std::string_view text);
  static TrackerConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

}  // namespace rgbdt
