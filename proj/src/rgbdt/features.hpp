#pragma once

#include <vector>

#include "rgbdt/config.hpp"
#include "rgbdt/geometry.hpp"
#include "rgbdt/image.hpp"

namespace rgbdt {

/// Per-cell orientation histograms of gradient magnitude, block-normalized.
struct HogGrid {
  int cells_y = 0;
  int cells_x = 0;
  int bins = 0;
  std::vector<double> data;  // cells_y * cells_x * bins, row-major

  HogGrid() = default;
  HogGrid(int cy, int cx, int b)
      : cells_y(cy), cells_x(cx), bins(b), data(static_cast<size_t>(cy) * cx * b, 0.0) {}

  double& at(int cy, int cx, int b) {
    return data[(static_cast<size_t>(cy) * cells_x + cx) * bins + b];
  }
  double at(int cy, int cx, int b) const {
    return data[(static_cast<size_t>(cy) * cells_x + cx) * bins + b];
  }
};

/// RGB and depth HOG over the same cell lattice. The depth part is all
/// zeros when the track mode disables the depth channel.
struct RgbdHogGrid {
  HogGrid rgb;
  HogGrid depth;
};

/// Fixed cell lattice every training sample and sliding window is warped
/// to. The scored filter carries a ring of context cells around the
/// interior box cells; without it, windows that fully contain the target
/// (coarser pyramid levels) systematically outscore the right-sized window
/// whose border cells crop the silhouette.
struct TemplateGeometry {
  int cells_x = 0;  // interior cells covering the box
  int cells_y = 0;
  int cell_size = 8;
  int bins = 9;
  int pad_cells = 1;

  int px_w() const { return cells_x * cell_size; }
  int px_h() const { return cells_y * cell_size; }
  int filter_cells_x() const { return cells_x + 2 * pad_cells; }
  int filter_cells_y() const { return cells_y + 2 * pad_cells; }
  int feature_dim() const { return filter_cells_x() * filter_cells_y() * bins * 2; }

  bool operator==(const TemplateGeometry&) const = default;
};

struct PyramidLevel {
  double scale = 1.0;  // scaled / native size ratio, <= 1
  RgbdHogGrid grid;
};

struct FeaturePyramid {
  std::vector<PyramidLevel> levels;
  double scale_step = 1.2;
};

/// Linear map of [0, kMaxDepthMm] millimeters to [0,255], round half up;
/// invalid (0) pixels map to 0.
ImageU8 depth_to_gray(const ImageU16& depth);

/// Float variant used by feature extraction: gray in [0,255] plus a
/// validity plane (1 = valid) so holes contribute no gradient.
void depth_to_gray_f(const ImageU16& depth, ImageF& gray, ImageF& valid);

/// HOG of a single-channel image. cap is the per-entry clipping value of
/// the 2x2-cell L2 block normalization (normalize, clip, renormalize; the
/// per-cell output averages the blocks covering the cell).
HogGrid compute_hog(const ImageF& gray, int cell_size, int bins, double cap);

/// HOG of an interleaved 3-channel image; the gradient at each pixel is
/// taken from the channel with the largest magnitude.
HogGrid compute_hog_rgb(const ImageF& rgb3, int cell_size, int bins, double cap);

/// HOG with a validity mask: a pixel votes only if it and the pixels its
/// gradient taps are all valid.
HogGrid compute_hog_masked(const ImageF& gray, const ImageF& valid, int cell_size, int bins,
                           double cap);

/// Picks the cell lattice for an initial box: box size over cell_size,
/// rescaled (aspect preserved) into [min_cells, max_cells] per axis.
TemplateGeometry choose_template(const BoundingBox& box, const TrackerConfig& cfg);

/// Warps the region plus its context ring to the filter lattice and
/// computes RGBD HOG (grids are filter-sized, pad included). Out-of-frame
/// parts replicate the border; a region that does not intersect the frame
/// is an error.
RgbdHogGrid extract_rgbd_hog(const Frame& frame, const BoundingBox& region,
                             const TemplateGeometry& tmpl, TrackMode mode, double cap = 0.2);

/// Flattened [rgb | depth] feature vector of a full template-sized grid.
std::vector<double> flatten(const RgbdHogGrid& grid);

/// HOG pyramid from scale 1.0 downward by scale_step until the scaled
/// frame no longer fits the template. May be empty for tiny frames.
FeaturePyramid build_pyramid(const Frame& frame, double scale_step, const TemplateGeometry& tmpl,
                             TrackMode mode, double cap = 0.2);

}  // namespace rgbdt
