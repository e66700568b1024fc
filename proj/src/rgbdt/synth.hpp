#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rgbdt/sequence_io.hpp"

namespace rgbdt::synth {

/// Piecewise-linear path of an object center over frame numbers.
struct PathKnot {
  int frame = 0;
  double x = 0.0;
  double y = 0.0;
};

/// Piecewise-linear schedule of the covered fraction of the target area.
struct CoverKnot {
  int frame = 0;
  double cover = 0.0;  // in [0,1]
};

struct TargetSpec {
  double w = 48.0;
  double h = 64.0;
  double depth_mm = 3000.0;
  std::optional<double> depth_end_mm;  // linear ramp over the sequence
  std::vector<PathKnot> path;          // empty = static at canvas center
  bool crossfade = false;              // texture deformation proxy
  int crossfade_period = 40;
  int texture_block = 8;
};

struct OccluderSpec {
  double w = 64.0;
  double h = 96.0;
  double depth_mm = 1200.0;
  std::vector<PathKnot> path;            // used when cover_schedule is empty
  std::vector<CoverKnot> cover_schedule; // drives position against the target
  bool match_target_texture = false;     // color camouflage
  int texture_block = 8;
};

struct NoiseSpec {
  double depth_sigma_mm = 15.0;
  double hole_prob = 0.01;
};

struct BackgroundSpec {
  double depth_mm = 6000.0;
  int block = 16;  // clutter tile size
};

struct ScenarioSpec {
  int width = 320;
  int height = 240;
  int frames = 100;
  uint64_t seed = 1;
  BackgroundSpec background;
  TargetSpec target;
  std::optional<OccluderSpec> occluder;
  NoiseSpec noise;
};

/// Throws listing every violated field.
void validate(const ScenarioSpec& spec);

ScenarioSpec parse_spec_json(const std::string& text);
ScenarioSpec load_spec(const std::filesystem::path& path);
std::string to_json(const ScenarioSpec& spec);

/// Named presets; the seed replaces the preset default.
ScenarioSpec preset(std::string_view name, uint64_t seed);
std::vector<std::string> preset_names();

/// Renders frames plus exact ground truth (the minimum box of the visible
/// target portion; absent while fully covered). Deterministic in the seed.
Sequence render(const ScenarioSpec& spec);

/// render() + write as a SequenceOnDisk directory.
void generate(const ScenarioSpec& spec, const std::filesystem::path& out_dir);

}  // namespace rgbdt::synth
