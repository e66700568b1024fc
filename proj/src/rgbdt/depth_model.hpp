#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rgbdt/geometry.hpp"
#include "rgbdt/image.hpp"
#include "rgbdt/svm.hpp"

namespace rgbdt {

/// Counts of valid depth pixels per fixed-width bin, indexed from 0 mm.
/// Invalid (0) pixels are excluded from the bins and the total.
struct DepthHistogram {
  int bin_width = 50;
  std::vector<uint32_t> bins;
  uint64_t total = 0;

  double center(size_t i) const { return (i + 0.5) * bin_width; }
};

struct DepthGaussian {
  double mu = 0.0;     // mm
  double sigma = 0.0;  // mm, >= the configured floor
};

DepthHistogram depth_histogram(const ImageU16& depth, const BoundingBox& box, int bin_width);

/// Moment fit over bin centers; sigma is floored. Throws on an empty
/// histogram (no valid pixels means the depth is unknown).
DepthGaussian fit_gaussian(const DepthHistogram& h, double sigma_floor = 30.0);

/// Fraction of counted pixels in bins whose center lies strictly below
/// mu - sigma: the likelihood that an occluder entered the box.
double occlusion_likelihood(const DepthHistogram& h, const DepthGaussian& g);

/// Median of valid depths inside the box, if any.
std::optional<double> median_box_depth(const ImageU16& depth, const BoundingBox& box);

struct GateParams {
  double sigma_mult = 3.0;
  double slack_mm = 200.0;
};

/// Keeps candidates whose median box depth lies within
/// sigma_mult * sigma + slack of mu. Candidates without valid depth pass
/// (unknown is not far).
std::vector<Detection> depth_gate(std::vector<Detection> candidates, const ImageU16& depth,
                                  const DepthGaussian& g, const GateParams& params);

/// Recenters the box on the centroid of the largest connected component
/// of pixels with |d - mu| <= sigma inside an expanded search box. Returns
/// the input unchanged when the mask is empty.
BoundingBox recenter(const BoundingBox& box, const ImageU16& depth, const DepthGaussian& g,
                     double expand = 1.4);

/// Exponential update toward an observed fit; the sigma floor re-applies.
DepthGaussian update_gaussian(const DepthGaussian& g, const DepthGaussian& observed, double rate,
                              double sigma_floor = 30.0);

}  // namespace rgbdt
