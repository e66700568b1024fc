#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rgbdt/geometry.hpp"

namespace rgbdt {

/// Overlap ratio between tracker output and ground truth:
/// intersection over union when both boxes exist, 1 when both are absent,
/// -1 when exactly one is absent.
double overlap(const MaybeBox& t, const MaybeBox& g);

/// Euclidean distance between box centers; no value when either is absent.
std::optional<double> cpe(const MaybeBox& t, const MaybeBox& g);

/// Fraction of frames with r_i > r_t (strict).
double success_rate(std::span<const double> rs, double rt);

enum class FrameError { none, type1, type2, type3 };

struct FrameScore {
  double r = 0.0;
  std::optional<double> cpe;
  FrameError error = FrameError::none;
};

/// Per-frame scores for a results stream against ground truth.
/// Type I: both boxes present, r <= r_t. Type II: output present while
/// ground truth is absent. Type III: output absent while the target is
/// visible. All other frames are successes.
std::vector<FrameScore> classify_errors(std::span<const MaybeBox> t_stream,
                                        std::span<const MaybeBox> g_stream, double rt);

struct SpeedStat {
  double max = 0.0;
  double mean = 0.0;
};

/// Target speed statistic 1 - r(i,i+1) over consecutive ground-truth pairs
/// where both boxes are present; throws when the stream has no such pair.
SpeedStat speed_stat(std::span<const MaybeBox> g_stream);

struct SequenceMetrics {
  double success_rate = 0.0;
  double type1 = 0.0;
  double type2 = 0.0;
  double type3 = 0.0;
  std::optional<SpeedStat> speed;  // absent when no valid consecutive pair exists
  size_t frames = 0;
};

SequenceMetrics summarize(std::span<const MaybeBox> t_stream, std::span<const MaybeBox> g_stream,
                          double rt);

/// Success rate sampled at r_t = k/samples for k = 1..samples-1.
std::vector<std::pair<double, double>> success_curve(std::span<const double> rs, int samples);

}  // namespace rgbdt
