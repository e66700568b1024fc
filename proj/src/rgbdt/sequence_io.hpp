#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rgbdt/eval.hpp"
#include "rgbdt/geometry.hpp"
#include "rgbdt/image.hpp"

namespace rgbdt {

/// In-memory sequence: frames plus the ground-truth box stream.
struct Sequence {
  std::vector<Frame> frames;
  std::vector<MaybeBox> ground_truth;

  int width() const { return frames.empty() ? 0 : frames.front().width(); }
  int height() const { return frames.empty() ? 0 : frames.front().height(); }
  size_t size() const { return frames.size(); }
};

/// Loads a directory laid out as rgb/%08d.png (8-bit color),
/// depth/%08d.png (16-bit grayscale millimeters) and groundtruth.txt.
/// Frame counts must match and be contiguous from 0; depth readings above
/// 10 m clamp to 10 m. Errors name the offending file (and line).
Sequence load_sequence(const std::filesystem::path& dir);

/// Box streams (ground truth and tracker results share one grammar):
/// "frame,x,y,w,h" per line, or "frame,NaN,NaN,NaN,NaN" for absent.
std::vector<MaybeBox> load_boxes(const std::filesystem::path& file);
void save_boxes(std::span<const MaybeBox> boxes, const std::filesystem::path& file);
std::string format_box_line(int frame, const MaybeBox& box);

/// Metric CSV emitters (header rows included, writes are atomic).
void write_frames_csv(const std::filesystem::path& file, std::span<const FrameScore> scores);

struct SummaryRow {
  std::string name;
  SequenceMetrics metrics;
};
void write_summary_csv(const std::filesystem::path& file, std::span<const SummaryRow> rows,
                       double rt);
std::string format_summary_table(std::span<const SummaryRow> rows, double rt);

void write_curve_csv(const std::filesystem::path& file,
                     std::span<const std::pair<double, double>> curve);

/// Whole-file atomic text write (temp file + rename).
void write_text_atomic(const std::filesystem::path& file, const std::string& text);

}  // namespace rgbdt
