#pragma once

// Independent reference implementations used to freeze expected values.
// These stay deliberately naive (plain loops, no shared code with the
// library) so they can arbitrate the optimized paths.

#include <cstdint>
#include <span>
#include <vector>

#include "rgbdt/eval.hpp"
#include "rgbdt/features.hpp"
#include "rgbdt/geometry.hpp"

namespace oracle {

/// Number of integer pixels (px, py) with px in [x, x+w) of both boxes.
/// Boxes must be integer-aligned.
long pixel_intersection(const rgbdt::BoundingBox& a, const rgbdt::BoundingBox& b, int grid);

/// Pixel-set Jaccard index on an integer grid.
double pixel_jaccard(const rgbdt::BoundingBox& a, const rgbdt::BoundingBox& b, int grid);

/// Per-pixel HOG reference: clamped central differences, unsigned
/// orientation bins (hard assignment), 2x2-cell L2 block normalization
/// with per-entry clipping then renormalization, cells averaging their
/// covering blocks. Matches the library contract but shares no code.
rgbdt::HogGrid naive_hog(const rgbdt::ImageF& gray, int cell_size, int bins, double cap);

struct SvmReference {
  std::vector<double> w;
  double b = 0.0;
  double objective = 0.0;
};

/// Long-run full-batch subgradient descent on
/// ||w||^2/(2C) + mean hinge, tracking the best iterate.
SvmReference reference_svm(const std::vector<std::vector<double>>& positives,
                           const std::vector<std::vector<double>>& negatives, double c,
                           int iterations);

double svm_reference_objective(const std::vector<double>& w, double b,
                               const std::vector<std::vector<double>>& positives,
                               const std::vector<std::vector<double>>& negatives, double c);

/// Brute-force metric recomputations.
double brute_success_rate(std::span<const double> rs, double rt);
struct BruteErrorCounts {
  long success = 0, type1 = 0, type2 = 0, type3 = 0;
};
BruteErrorCounts brute_errors(std::span<const rgbdt::MaybeBox> t,
                              std::span<const rgbdt::MaybeBox> g, double rt);
struct BruteSpeed {
  bool defined = false;
  double max = 0.0, mean = 0.0;
};
BruteSpeed brute_speed(std::span<const rgbdt::MaybeBox> g);

}  // namespace oracle
