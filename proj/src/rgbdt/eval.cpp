#include "rgbdt/eval.hpp"

#include <algorithm>
#include <cmath>

#include "rgbdt/error.hpp"

namespace rgbdt {

double overlap(const MaybeBox& t, const MaybeBox& g) {
  if (t.has_value() && g.has_value()) return intersect_area(*t, *g) / union_area(*t, *g);
  if (!t.has_value() && !g.has_value()) return 1.0;
  return -1.0;
}

std::optional<double> cpe(const MaybeBox& t, const MaybeBox& g) {
  if (!t.has_value() || !g.has_value()) return std::nullopt;
  return center_distance(*t, *g);
}

double success_rate(std::span<const double> rs, double rt) {
  require(!rs.empty(), ErrorCode::invalid_argument, "success_rate: empty overlap stream");
  size_t hits = 0;
  for (double r : rs)
    if (r > rt) ++hits;
  return static_cast<double>(hits) / static_cast<double>(rs.size());
}

std::vector<FrameScore> classify_errors(std::span<const MaybeBox> t_stream,
                                        std::span<const MaybeBox> g_stream, double rt) {
  require(t_stream.size() == g_stream.size(), ErrorCode::invalid_argument,
          "classify_errors: stream length mismatch (" + std::to_string(t_stream.size()) + " vs " +
              std::to_string(g_stream.size()) + ")");
  std::vector<FrameScore> out(t_stream.size());
  for (size_t i = 0; i < t_stream.size(); ++i) {
    const MaybeBox& t = t_stream[i];
    const MaybeBox& g = g_stream[i];
    FrameScore& s = out[i];
    s.r = overlap(t, g);
    s.cpe = cpe(t, g);
    if (t.has_value() && !g.has_value()) s.error = FrameError::type2;
    else if (!t.has_value() && g.has_value()) s.error = FrameError::type3;
    else if (t.has_value() && g.has_value() && s.r <= rt) s.error = FrameError::type1;
    else s.error = FrameError::none;
  }
  return out;
}

SpeedStat speed_stat(std::span<const MaybeBox> g_stream) {
  require(g_stream.size() >= 2, ErrorCode::invalid_argument, "speed_stat: need at least 2 frames");
  SpeedStat stat;
  size_t pairs = 0;
  double sum = 0.0;
  for (size_t i = 0; i + 1 < g_stream.size(); ++i) {
    if (!g_stream[i].has_value() || !g_stream[i + 1].has_value()) continue;
    const double speed = 1.0 - iou(*g_stream[i], *g_stream[i + 1]);
    stat.max = pairs == 0 ? speed : std::max(stat.max, speed);
    sum += speed;
    ++pairs;
  }
  require(pairs > 0, ErrorCode::no_data, "speed_stat: no consecutive pair with both boxes present");
  stat.mean = sum / static_cast<double>(pairs);
  return stat;
}

SequenceMetrics summarize(std::span<const MaybeBox> t_stream, std::span<const MaybeBox> g_stream,
                          double rt) {
  const auto scores = classify_errors(t_stream, g_stream, rt);
  require(!scores.empty(), ErrorCode::invalid_argument, "summarize: empty streams");
  SequenceMetrics m;
  m.frames = scores.size();
  size_t counts[4] = {0, 0, 0, 0};
  for (const auto& s : scores) ++counts[static_cast<int>(s.error)];
  const double n = static_cast<double>(scores.size());
  m.success_rate = counts[0] / n;
  m.type1 = counts[1] / n;
  m.type2 = counts[2] / n;
  m.type3 = counts[3] / n;
  try {
    m.speed = speed_stat(g_stream);
  } catch (const Error&) {
    m.speed = std::nullopt;
  }
  return m;
}

std::vector<std::pair<double, double>> success_curve(std::span<const double> rs, int samples) {
  require(samples >= 2, ErrorCode::invalid_argument, "success_curve: samples must be >= 2");
  std::vector<std::pair<double, double>> curve;
  curve.reserve(samples - 1);
  for (int k = 1; k < samples; ++k) {
    const double rt = static_cast<double>(k) / samples;
    curve.emplace_back(rt, success_rate(rs, rt));
  }
  return curve;
}

}  // namespace rgbdt
