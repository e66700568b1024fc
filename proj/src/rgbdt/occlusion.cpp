#include "rgbdt/occlusion.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rgbdt/error.hpp"
#include "rgbdt/util.hpp"

namespace rgbdt {

namespace {

struct PixelRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open

  int w() const { return x1 - x0; }
  int h() const { return y1 - y0; }
  bool empty() const { return w() <= 0 || h() <= 0; }
};

PixelRect pixel_rect(const BoundingBox& box, int width, int height) {
  PixelRect r;
  r.x0 = std::max(0, static_cast<int>(std::ceil(box.x - 0.5)));
  r.y0 = std::max(0, static_cast<int>(std::ceil(box.y - 0.5)));
  r.x1 = std::min(width, static_cast<int>(std::ceil(box.right() - 0.5)));
  r.y1 = std::min(height, static_cast<int>(std::ceil(box.bottom() - 0.5)));
  return r;
}

int depth_at(const Frame& f, int x, int y) { return std::min<int>(f.depth.at(x, y), kMaxDepthMm); }

// Row-major flood fill labeling; similar(a_idx, b_idx) decides connectivity.
template <typename Similar>
std::vector<int32_t> label_components(const PixelRect& r, const std::vector<uint8_t>& eligible,
                                      const std::vector<std::pair<int, int>>& neighbors,
                                      Similar similar, int* out_count) {
  const int w = r.w(), h = r.h();
  std::vector<int32_t> labels(static_cast<size_t>(w) * h, -1);
  std::vector<int> stack;
  int next = 0;
  for (int i = 0; i < w * h; ++i) {
    if (!eligible[i] || labels[i] >= 0) continue;
    labels[i] = next;
    stack.assign(1, i);
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      const int x = cur % w, y = cur / w;
      for (const auto& [dx, dy] : neighbors) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const int ni = ny * w + nx;
        if (!eligible[ni] || labels[ni] >= 0) continue;
        if (!similar(cur, ni)) continue;
        labels[ni] = next;
        stack.push_back(ni);
      }
    }
    ++next;
  }
  *out_count = next;
  return labels;
}

struct RegionAccum {
  int minx = 1 << 30, miny = 1 << 30, maxx = -1, maxy = -1;
  size_t count = 0;
  std::vector<double> depths;
};

// One Region per label; keep_all keeps region indices aligned with label
// ids (dropping nothing), otherwise empty/too-small regions are removed.
std::vector<Region> collect_regions(const PixelRect& r, const std::vector<int32_t>& labels,
                                    int count, const Frame& frame, double min_area,
                                    bool keep_all = false) {
  std::vector<RegionAccum> acc(count);
  const int w = r.w();
  for (int y = 0; y < r.h(); ++y)
    for (int x = 0; x < w; ++x) {
      const int32_t l = labels[static_cast<size_t>(y) * w + x];
      if (l < 0) continue;
      RegionAccum& a = acc[l];
      a.minx = std::min(a.minx, x);
      a.miny = std::min(a.miny, y);
      a.maxx = std::max(a.maxx, x);
      a.maxy = std::max(a.maxy, y);
      ++a.count;
      const int d = depth_at(frame, r.x0 + x, r.y0 + y);
      if (d > 0) a.depths.push_back(d);
    }
  std::vector<Region> out;
  for (auto& a : acc) {
    if (!keep_all && (a.count == 0 || static_cast<double>(a.count) < min_area)) continue;
    Region reg;
    if (a.count > 0)
      reg.box = {double(r.x0 + a.minx), double(r.y0 + a.miny), double(a.maxx - a.minx + 1),
                 double(a.maxy - a.miny + 1)};
    reg.area = a.count;
    reg.median_depth = a.depths.empty() ? 0.0 : median_of(std::move(a.depths));
    out.push_back(reg);
  }
  return out;
}

const std::vector<std::pair<int, int>> kNeigh4 = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
const std::vector<std::pair<int, int>> kNeigh8 = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                                  {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};

std::vector<int32_t> depth_labels(const Frame& frame, const PixelRect& r, int thresh_mm,
                                  int* count) {
  const int w = r.w(), h = r.h();
  std::vector<uint8_t> eligible(static_cast<size_t>(w) * h, 0);
  std::vector<int> depth(static_cast<size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int d = depth_at(frame, r.x0 + x, r.y0 + y);
      depth[static_cast<size_t>(y) * w + x] = d;
      eligible[static_cast<size_t>(y) * w + x] = d > 0;
    }
  return label_components(
      r, eligible, kNeigh4,
      [&](int a, int b) { return std::abs(depth[a] - depth[b]) <= thresh_mm; }, count);
}

std::vector<int32_t> rgb_labels(const Frame& frame, const PixelRect& r, int thresh, int* count) {
  const int w = r.w(), h = r.h();
  auto dist = [&](int ax, int ay, int bx, int by) {
    int m = 0;
    for (int c = 0; c < 3; ++c)
      m = std::max(m, std::abs(int(frame.rgb.at(ax, ay, c)) - int(frame.rgb.at(bx, by, c))));
    return m;
  };
  // A pixel belongs to a region only when it matches every 8-neighbor:
  // color-edge pixels separate regions instead of chaining across them
  // (a 1-px checkerboard has no region at all).
  std::vector<uint8_t> eligible(static_cast<size_t>(w) * h, 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      for (const auto& [dx, dy] : kNeigh8) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        if (dist(r.x0 + x, r.y0 + y, r.x0 + nx, r.y0 + ny) > thresh) {
          eligible[static_cast<size_t>(y) * w + x] = 0;
          break;
        }
      }
    }
  return label_components(
      r, eligible, kNeigh8, [&](int, int) { return true; }, count);
}

}  // namespace

bool has_occluder_pixels(const Frame& frame, const BoundingBox& target_box,
                         const DepthGaussian& target_g) {
  const PixelRect r = pixel_rect(target_box, frame.width(), frame.height());
  const double threshold = target_g.mu - target_g.sigma;
  for (int y = r.y0; y < r.y1; ++y)
    for (int x = r.x0; x < r.x1; ++x) {
      const int d = depth_at(frame, x, y);
      if (d > 0 && d < threshold) return true;
    }
  return false;
}

OccluderModel init_occluder(const Frame& frame, const BoundingBox& target_box,
                            const DepthGaussian& target_g, const TrackerConfig& cfg) {
  const PixelRect r = pixel_rect(target_box, frame.width(), frame.height());
  const double threshold = target_g.mu - target_g.sigma;

  OccluderModel occ;
  occ.color_hist.assign(kColorBinsPerChannel * kColorBinsPerChannel * kColorBinsPerChannel, 0.0);
  occ.target_area_pre = target_box.area();

  DepthHistogram h;
  h.bin_width = cfg.bin_width_mm;
  h.bins.assign(static_cast<size_t>(kMaxDepthMm / cfg.bin_width_mm) + 1, 0);
  int minx = 1 << 30, miny = 1 << 30, maxx = -1, maxy = -1;
  size_t count = 0;
  for (int y = r.y0; y < r.y1; ++y)
    for (int x = r.x0; x < r.x1; ++x) {
      const int d = depth_at(frame, x, y);
      if (d <= 0 || d >= threshold) continue;
      ++h.bins[d / cfg.bin_width_mm];
      ++h.total;
      const int br = frame.rgb.at(x, y, 0) / 16;
      const int bg = frame.rgb.at(x, y, 1) / 16;
      const int bb = frame.rgb.at(x, y, 2) / 16;
      occ.color_hist[(br * kColorBinsPerChannel + bg) * kColorBinsPerChannel + bb] += 1.0;
      minx = std::min(minx, x);
      miny = std::min(miny, y);
      maxx = std::max(maxx, x);
      maxy = std::max(maxy, y);
      ++count;
    }
  require(count > 0, ErrorCode::state,
          "no occluder pixels nearer than mu - sigma inside the target box");

  for (auto& v : occ.color_hist) v /= static_cast<double>(count);
  occ.depth = fit_gaussian(h, cfg.sigma_floor_mm);
  occ.box = {double(minx), double(miny), double(maxx - minx + 1), double(maxy - miny + 1)};
  return occ;
}

OccluderModel track_occluder(const Frame& prev, const Frame& cur, const OccluderModel& occ,
                             const FlowParams& flow, const TrackerConfig& cfg) {
  OccluderModel out = occ;
  const FlowResult fr = propagate(prev, cur, occ.box, flow);
  if (fr.box.has_value()) out.box = *fr.box;  // on flow failure the box holds

  // Refit depth from in-box pixels that still match the occluder gate.
  const PixelRect r = pixel_rect(out.box, cur.width(), cur.height());
  const double tol = cfg.gate_sigma_mult * occ.depth.sigma + cfg.gate_slack_mm;
  DepthHistogram h;
  h.bin_width = cfg.bin_width_mm;
  h.bins.assign(static_cast<size_t>(kMaxDepthMm / cfg.bin_width_mm) + 1, 0);
  for (int y = r.y0; y < r.y1; ++y)
    for (int x = r.x0; x < r.x1; ++x) {
      const int d = depth_at(cur, x, y);
      if (d > 0 && std::abs(d - occ.depth.mu) <= tol) {
        ++h.bins[d / cfg.bin_width_mm];
        ++h.total;
      }
    }
  if (h.total > 0) out.depth = fit_gaussian(h, cfg.sigma_floor_mm);
  return out;
}

std::vector<Region> segment_depth(const Frame& frame, const BoundingBox& roi, int thresh_mm,
                                  double min_area) {
  const PixelRect r = pixel_rect(roi, frame.width(), frame.height());
  if (r.empty()) return {};
  int count = 0;
  const auto labels = depth_labels(frame, r, thresh_mm, &count);
  return collect_regions(r, labels, count, frame, min_area);
}

std::vector<Region> segment_rgb(const Frame& frame, const BoundingBox& roi, int thresh,
                                double min_area) {
  const PixelRect r = pixel_rect(roi, frame.width(), frame.height());
  if (r.empty()) return {};
  int count = 0;
  const auto labels = rgb_labels(frame, r, thresh, &count);
  return collect_regions(r, labels, count, frame, min_area);
}

CombinedSegmentation combined_segmentation(const Frame& frame, const BoundingBox& roi,
                                           int depth_thresh_mm, int rgb_thresh) {
  const PixelRect r = pixel_rect(roi, frame.width(), frame.height());
  CombinedSegmentation out;
  out.x0 = r.x0;
  out.y0 = r.y0;
  out.width = r.w();
  out.height = r.h();
  if (r.empty()) return out;

  int dcount = 0, ccount = 0;
  const auto dl = depth_labels(frame, r, depth_thresh_mm, &dcount);
  const auto cl = rgb_labels(frame, r, rgb_thresh, &ccount);

  // Pixels grouped by joint (depth region, color region) identity.
  std::map<std::pair<int32_t, int32_t>, int> joint_ids;
  out.labels.assign(dl.size(), -1);
  int jcount = 0;
  for (size_t i = 0; i < dl.size(); ++i) {
    if (dl[i] < 0 || cl[i] < 0) continue;
    auto [it, inserted] = joint_ids.try_emplace({dl[i], cl[i]}, jcount);
    if (inserted) ++jcount;
    out.labels[i] = it->second;
  }
  out.regions = collect_regions(r, out.labels, jcount, frame, 0.0, true);
  return out;
}

std::vector<CandidateRegion> local_search(const Frame& frame, const OccluderModel& occ,
                                          const DepthGaussian& target_g, const SvmModel& model,
                                          const FeaturePyramid& pyramid, TrackMode mode,
                                          const TrackerConfig& cfg) {
  (void)target_g;
  const BoundingBox roi =
      clamp_into(expand(occ.box, cfg.search_scale), frame.width(), frame.height());

  std::vector<CandidateRegion> out;
  const double min_area = cfg.seg_min_area_ratio * occ.target_area_pre;
  const double occ_tol = cfg.gate_sigma_mult * occ.depth.sigma + cfg.gate_slack_mm;

  const CombinedSegmentation seg =
      combined_segmentation(frame, roi, cfg.depth_seg_thresh_mm, cfg.rgb_seg_thresh);
  for (const auto& reg : seg.regions) {
    if (static_cast<double>(reg.area) < min_area) continue;
    if (std::abs(reg.median_depth - occ.depth.mu) <= occ_tol) continue;  // still the occluder
    CandidateRegion c;
    c.box = reg.box;
    c.area = static_cast<double>(reg.area);
    c.svm_score = model.decide(flatten(extract_rgbd_hog(frame, reg.box, model.tmpl, mode)));
    c.overlap_with_occluder = iou(reg.box, occ.box);
    out.push_back(c);
  }

  // Detector hits whose center falls in the ROI join the candidate list.
  for (const Detection& d :
       score_windows(pyramid, model, cfg.detect_pool, frame.width(), frame.height())) {
    const double cx = d.box.cx(), cy = d.box.cy();
    if (cx < roi.x || cx >= roi.right() || cy < roi.y || cy >= roi.bottom()) continue;
    CandidateRegion c;
    c.box = d.box;
    c.area = d.box.area();
    c.svm_score = d.score;
    c.overlap_with_occluder = iou(d.box, occ.box);
    out.push_back(c);
  }

  std::sort(out.begin(), out.end(), [](const CandidateRegion& a, const CandidateRegion& b) {
    if (a.svm_score != b.svm_score) return a.svm_score > b.svm_score;
    if (a.box.x != b.box.x) return a.box.x < b.box.x;
    return a.box.y < b.box.y;
  });

  // Identical boxes from both sources collapse to the higher-scoring one.
  std::vector<CandidateRegion> dedup;
  auto same_box = [](const BoundingBox& a, const BoundingBox& b) {
    return std::abs(a.x - b.x) < 1e-6 && std::abs(a.y - b.y) < 1e-6 &&
           std::abs(a.w - b.w) < 1e-6 && std::abs(a.h - b.h) < 1e-6;
  };
  for (const auto& c : out) {
    bool dup = false;
    for (const auto& k : dedup)
      if (same_box(c.box, k.box)) {
        dup = true;
        break;
      }
    if (!dup) dedup.push_back(c);
  }
  return dedup;
}

MaybeBox try_recover(const std::vector<CandidateRegion>& candidates, const OccluderModel& occ,
                     const RecoveryThresholds& th) {
  const CandidateRegion* best = nullptr;
  for (const auto& c : candidates) {
    if (c.area < th.min_area_ratio * occ.target_area_pre) continue;
    if (c.overlap_with_occluder > th.max_occ_overlap) continue;
    if (c.svm_score < th.tau_detect) continue;
    if (best == nullptr || c.svm_score > best->svm_score) best = &c;
  }
  if (best == nullptr) return std::nullopt;
  return best->box;
}

}  // namespace rgbdt
