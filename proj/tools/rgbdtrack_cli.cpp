// Command-line front end for the rgbdtrack shared library. Talks to the
// tracker exclusively through the public C API.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rgbdtrack.h"

namespace {

struct ConfigDeleter {
  void operator()(rgbdt_config* p) const { rgbdt_config_destroy(p); }
};
struct SequenceDeleter {
  void operator()(rgbdt_sequence* p) const { rgbdt_sequence_destroy(p); }
};
struct TrackerDeleter {
  void operator()(rgbdt_tracker* p) const { rgbdt_tracker_destroy(p); }
};
struct BoxesDeleter {
  void operator()(rgbdt_boxes* p) const { rgbdt_boxes_destroy(p); }
};

using ConfigPtr = std::unique_ptr<rgbdt_config, ConfigDeleter>;
using SequencePtr = std::unique_ptr<rgbdt_sequence, SequenceDeleter>;
using TrackerPtr = std::unique_ptr<rgbdt_tracker, TrackerDeleter>;
using BoxesPtr = std::unique_ptr<rgbdt_boxes, BoxesDeleter>;

[[noreturn]] void die(rgbdt_status status, const std::string& what) {
  std::fprintf(stderr, "error: %s: %s (%s)\n", what.c_str(), rgbdt_last_error(),
               rgbdt_status_name(status));
  std::exit(1);
}

void check(rgbdt_status status, const std::string& what) {
  if (status != RGBDT_OK) die(status, what);
}

int cmd_track(const std::string& seq_dir, const std::string& mode, const std::string& config_path,
              const std::string& out_path) {
  ConfigPtr cfg;
  {
    rgbdt_config* raw = nullptr;
    if (config_path.empty())
      check(rgbdt_config_create(&raw), "creating default config");
    else
      check(rgbdt_config_load(config_path.c_str(), &raw), "loading config " + config_path);
    cfg.reset(raw);
  }

  SequencePtr seq;
  {
    rgbdt_sequence* raw = nullptr;
    check(rgbdt_sequence_load(seq_dir.c_str(), &raw), "loading sequence " + seq_dir);
    seq.reset(raw);
  }
  const int n = rgbdt_sequence_frame_count(seq.get());

  rgbdt_box init{};
  check(rgbdt_sequence_ground_truth(seq.get(), 0, &init), "reading ground truth frame 0");
  if (!init.present) {
    std::fprintf(stderr, "error: ground truth box of frame 0 is absent; cannot initialize\n");
    return 1;
  }

  TrackerPtr tracker;
  {
    rgbdt_tracker* raw = nullptr;
    check(rgbdt_tracker_create(cfg.get(), mode.c_str(), &raw), "creating tracker");
    tracker.reset(raw);
  }
  check(rgbdt_tracker_init(tracker.get(), seq.get(), 0, &init), "initializing tracker");

  BoxesPtr results;
  {
    rgbdt_boxes* raw = nullptr;
    check(rgbdt_boxes_create(&raw), "allocating results");
    results.reset(raw);
  }
  check(rgbdt_boxes_push(results.get(), init), "recording frame 0");
  for (int i = 1; i < n; ++i) {
    rgbdt_box out{};
    check(rgbdt_tracker_step(tracker.get(), seq.get(), i, &out),
          "tracking frame " + std::to_string(i));
    check(rgbdt_boxes_push(results.get(), out), "recording frame " + std::to_string(i));
  }

  check(rgbdt_boxes_save(results.get(), out_path.c_str()), "writing " + out_path);
  std::printf("tracked %d frames (%s) -> %s\n", n, mode.c_str(), out_path.c_str());
  return 0;
}

BoxesPtr load_boxes_or_die(const std::string& path, const std::string& what) {
  rgbdt_boxes* raw = nullptr;
  check(rgbdt_boxes_load(path.c_str(), &raw), what + " " + path);
  return BoxesPtr(raw);
}

void print_metrics_header(double rt) {
  std::printf("%-28s %8s %8s %8s %8s %8s %8s\n", "results", ("R@" + std::to_string(rt)).c_str(),
              "typeI", "typeII", "typeIII", "speed", "spd_mean");
}

void print_metrics_row(const std::string& name, const rgbdt_metrics& m) {
  std::printf("%-28s %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f\n", name.c_str(), m.success_rate,
              m.type1, m.type2, m.type3, m.speed_max, m.speed_mean);
}

int cmd_eval(const std::string& gt_dir, const std::string& results_path, double rt,
             const std::string& curve_path, int curve_samples, const std::string& frames_path,
             const std::string& summary_path) {
  const BoxesPtr gt = load_boxes_or_die(gt_dir + "/groundtruth.txt", "loading ground truth");
  const BoxesPtr results = load_boxes_or_die(results_path, "loading results");

  rgbdt_metrics m{};
  check(rgbdt_evaluate(results.get(), gt.get(), rt, &m), "evaluating");

  if (!frames_path.empty())
    check(rgbdt_eval_write_frames_csv(results.get(), gt.get(), rt, frames_path.c_str()),
          "writing " + frames_path);
  if (!curve_path.empty())
    check(rgbdt_eval_write_curve_csv(results.get(), gt.get(), curve_samples, curve_path.c_str()),
          "writing " + curve_path);
  if (!summary_path.empty()) {
    std::FILE* f = std::fopen((summary_path + ".tmp").c_str(), "w");
    if (!f) {
      std::fprintf(stderr, "error: cannot create %s\n", summary_path.c_str());
      return 1;
    }
    std::fprintf(f, "sequence,R@%g,typeI,typeII,typeIII,speed,speed_mean\n", rt);
    std::fprintf(f, "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", results_path.c_str(), m.success_rate,
                 m.type1, m.type2, m.type3, m.speed_max, m.speed_mean);
    std::fclose(f);
    std::rename((summary_path + ".tmp").c_str(), summary_path.c_str());
  }

  print_metrics_header(rt);
  print_metrics_row(results_path, m);
  return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& preset, uint64_t seed,
              const std::string& out_dir, bool dump_spec) {
  if (spec_path.empty() == preset.empty()) {
    std::fprintf(stderr, "error: synth needs exactly one of --spec or --preset\n");
    return 1;
  }
  if (dump_spec && !preset.empty()) {
    std::vector<char> buf(1 << 16);
    check(rgbdt_synth_preset_json(preset.c_str(), seed, buf.data(), buf.size()),
          "rendering preset spec");
    std::fputs(buf.data(), stdout);
    return 0;
  }
  if (out_dir.empty()) {
    std::fprintf(stderr, "error: synth needs --out DIR\n");
    return 1;
  }
  if (!preset.empty())
    check(rgbdt_synth_generate_preset(preset.c_str(), seed, out_dir.c_str()),
          "generating preset " + preset);
  else
    check(rgbdt_synth_generate(spec_path.c_str(), out_dir.c_str()),
          "generating from spec " + spec_path);
  std::printf("generated %s\n", out_dir.c_str());
  return 0;
}

int cmd_compare(const std::string& gt_dir, const std::vector<std::string>& result_paths, double rt,
                const std::string& out_csv) {
  const BoxesPtr gt = load_boxes_or_die(gt_dir + "/groundtruth.txt", "loading ground truth");

  std::string csv = "sequence,R@" + std::to_string(rt) + ",typeI,typeII,typeIII,speed,speed_mean\n";
  print_metrics_header(rt);
  for (const auto& path : result_paths) {
    const BoxesPtr results = load_boxes_or_die(path, "loading results");
    rgbdt_metrics m{};
    check(rgbdt_evaluate(results.get(), gt.get(), rt, &m), "evaluating " + path);
    print_metrics_row(path, m);
    char row[512];
    std::snprintf(row, sizeof(row), "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", path.c_str(),
                  m.success_rate, m.type1, m.type2, m.type3, m.speed_max, m.speed_mean);
    csv += row;
  }
  if (!out_csv.empty()) {
    std::FILE* f = std::fopen((out_csv + ".tmp").c_str(), "w");
    if (!f) {
      std::fprintf(stderr, "error: cannot create %s\n", out_csv.c_str());
      return 1;
    }
    std::fputs(csv.c_str(), f);
    std::fclose(f);
    std::rename((out_csv + ".tmp").c_str(), out_csv.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rgbdtrack: single-object RGBD tracker, benchmark metrics, and synthetic "
               "sequence generator"};
  app.require_subcommand(1);

  // track
  std::string seq_dir, mode = "rgbdocc", config_path, out_path = "results.txt";
  CLI::App* track = app.add_subcommand("track", "run the tracker over a sequence directory");
  track->add_option("--seq", seq_dir, "sequence directory (rgb/, depth/, groundtruth.txt)")
      ->required();
  track->add_option("--mode", mode, "rgb | rgbd | rgbocc | rgbdocc")
      ->check(CLI::IsMember({"rgb", "rgbd", "rgbocc", "rgbdocc"}));
  track->add_option("--config", config_path, "tracker config file (key=value lines)");
  track->add_option("--out", out_path, "output results file");

  // eval
  std::string gt_dir, results_path, curve_path, frames_path, summary_path;
  double rt = 0.5;
  int curve_samples = 100;
  CLI::App* eval = app.add_subcommand("eval", "score a results file against ground truth");
  eval->add_option("--gt", gt_dir, "sequence directory holding groundtruth.txt")->required();
  eval->add_option("--results", results_path, "tracker results file")->required();
  eval->add_option("--rt", rt, "overlap threshold (default 0.5)");
  eval->add_option("--curve", curve_path, "write success-vs-threshold CSV here");
  eval->add_option("--curve-samples", curve_samples, "curve sample count (default 100)");
  eval->add_option("--frames", frames_path, "write per-frame CSV here");
  eval->add_option("--summary", summary_path, "write summary CSV here");

  // synth
  std::string spec_path, preset, synth_out;
  uint64_t seed = 1;
  bool dump_spec = false;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic RGBD sequence");
  synth->add_option("--spec", spec_path, "scenario spec JSON file");
  synth->add_option("--preset", preset,
                    "static | fast_translation | out_of_plane_proxy | gradual_occlusion | "
                    "full_occlusion_recovery");
  synth->add_option("--seed", seed, "generation seed (default 1)");
  synth->add_option("--out", synth_out, "output sequence directory");
  synth->add_flag("--dump-spec", dump_spec, "print the preset's spec JSON and exit");

  // compare
  std::string cmp_gt, cmp_out;
  std::vector<std::string> cmp_results;
  double cmp_rt = 0.5;
  CLI::App* compare = app.add_subcommand("compare", "joint summary of several results files");
  compare->add_option("--gt", cmp_gt, "sequence directory holding groundtruth.txt")->required();
  compare->add_option("--results", cmp_results, "results files")->required()->expected(-1);
  compare->add_option("--rt", cmp_rt, "overlap threshold (default 0.5)");
  compare->add_option("--out", cmp_out, "write the joint summary CSV here");

  CLI11_PARSE(app, argc, argv);

  if (track->parsed()) return cmd_track(seq_dir, mode, config_path, out_path);
  if (eval->parsed())
    return cmd_eval(gt_dir, results_path, rt, curve_path, curve_samples, frames_path,
                    summary_path);
  if (synth->parsed()) return cmd_synth(spec_path, preset, seed, synth_out, dump_spec);
  if (compare->parsed()) return cmd_compare(cmp_gt, cmp_results, cmp_rt, cmp_out);
  return 1;
}
