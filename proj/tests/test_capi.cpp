#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>

#include "rgbdtrack.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rgbdt_capi_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::string(rgbdt_version()) == "0.1.0");
  CHECK(std::string(rgbdt_status_name(RGBDT_OK)) == "ok");
  CHECK(std::strlen(rgbdt_status_name(RGBDT_ERR_PARSE)) > 0);
}

TEST_CASE("config lifecycle and errors") {
  rgbdt_config* cfg = nullptr;
  REQUIRE(rgbdt_config_create(&cfg) == RGBDT_OK);
  CHECK(rgbdt_config_set(cfg, "alpha", "0.25") == RGBDT_OK);
  char buf[64];
  CHECK(rgbdt_config_get(cfg, "alpha", buf, sizeof(buf)) == RGBDT_OK);
  CHECK(std::string(buf) == "0.25");

  CHECK(rgbdt_config_set(cfg, "bogus_key", "1") == RGBDT_ERR_PARSE);
  CHECK(std::strlen(rgbdt_last_error()) > 0);
  CHECK(rgbdt_config_set(nullptr, "alpha", "1") == RGBDT_ERR_INVALID_ARGUMENT);

  TempDir tmp;
  const std::string path = (tmp.path / "cfg.txt").string();
  CHECK(rgbdt_config_save(cfg, path.c_str()) == RGBDT_OK);
  rgbdt_config* loaded = nullptr;
  CHECK(rgbdt_config_load(path.c_str(), &loaded) == RGBDT_OK);
  CHECK(rgbdt_config_get(loaded, "alpha", buf, sizeof(buf)) == RGBDT_OK);
  CHECK(std::string(buf) == "0.25");
  rgbdt_config_destroy(loaded);
  rgbdt_config_destroy(cfg);

  rgbdt_config* missing = nullptr;
  CHECK(rgbdt_config_load((tmp.path / "nope.txt").string().c_str(), &missing) == RGBDT_ERR_IO);
}

TEST_CASE("overlap helper") {
  const rgbdt_box a{0, 0, 10, 10, 1};
  const rgbdt_box b{5, 0, 10, 10, 1};
  const rgbdt_box none{0, 0, 0, 0, 0};
  CHECK(rgbdt_overlap(&a, &a) == 1.0);
  CHECK(rgbdt_overlap(&a, &b) == doctest::Approx(1.0 / 3.0));
  CHECK(rgbdt_overlap(&none, &none) == 1.0);
  CHECK(rgbdt_overlap(&a, &none) == -1.0);
}

TEST_CASE("synthesis, tracking and evaluation through the shared library") {
  TempDir tmp;
  const std::string dir = (tmp.path / "seq").string();
  REQUIRE(rgbdt_synth_generate_preset("static", 7, dir.c_str()) == RGBDT_OK);

  rgbdt_sequence* seq = nullptr;
  REQUIRE(rgbdt_sequence_load(dir.c_str(), &seq) == RGBDT_OK);
  const int n = rgbdt_sequence_frame_count(seq);
  CHECK(n == 60);
  int w = 0, h = 0;
  CHECK(rgbdt_sequence_dims(seq, &w, &h) == RGBDT_OK);
  CHECK(w == 320);
  CHECK(h == 240);

  rgbdt_box init{};
  REQUIRE(rgbdt_sequence_ground_truth(seq, 0, &init) == RGBDT_OK);
  REQUIRE(init.present == 1);
  rgbdt_box oob{};
  CHECK(rgbdt_sequence_ground_truth(seq, n + 5, &oob) == RGBDT_ERR_BOUNDS);

  rgbdt_tracker* tracker = nullptr;
  REQUIRE(rgbdt_tracker_create(nullptr, "rgbdocc", &tracker) == RGBDT_OK);
  rgbdt_tracker* bad_mode = nullptr;
  CHECK(rgbdt_tracker_create(nullptr, "sonar", &bad_mode) == RGBDT_ERR_INVALID_ARGUMENT);

  REQUIRE(rgbdt_tracker_init(tracker, seq, 0, &init) == RGBDT_OK);
  CHECK(rgbdt_tracker_occluded(tracker) == 0);

  rgbdt_boxes* results = nullptr;
  REQUIRE(rgbdt_boxes_create(&results) == RGBDT_OK);
  REQUIRE(rgbdt_boxes_push(results, init) == RGBDT_OK);

  const int steps = 10;
  for (int i = 1; i <= steps; ++i) {
    rgbdt_box out{};
    REQUIRE(rgbdt_tracker_step(tracker, seq, i, &out) == RGBDT_OK);
    CHECK(out.present == 1);
    REQUIRE(rgbdt_boxes_push(results, out) == RGBDT_OK);
  }
  // out-of-order step
  rgbdt_box out{};
  CHECK(rgbdt_tracker_step(tracker, seq, 5, &out) == RGBDT_ERR_STATE);

  // self-evaluation of the ground truth prefix is perfect
  rgbdt_boxes* gt_prefix = nullptr;
  REQUIRE(rgbdt_boxes_create(&gt_prefix) == RGBDT_OK);
  for (int i = 0; i <= steps; ++i) {
    rgbdt_box g{};
    REQUIRE(rgbdt_sequence_ground_truth(seq, i, &g) == RGBDT_OK);
    REQUIRE(rgbdt_boxes_push(gt_prefix, g) == RGBDT_OK);
  }
  rgbdt_metrics self{};
  REQUIRE(rgbdt_evaluate(gt_prefix, gt_prefix, 0.5, &self) == RGBDT_OK);
  CHECK(self.success_rate == 1.0);

  rgbdt_metrics m{};
  REQUIRE(rgbdt_evaluate(results, gt_prefix, 0.5, &m) == RGBDT_OK);
  CHECK(m.frames == steps + 1);
  CHECK(m.success_rate > 0.5);

  const std::string results_path = (tmp.path / "results.txt").string();
  REQUIRE(rgbdt_boxes_save(results, results_path.c_str()) == RGBDT_OK);
  rgbdt_boxes* loaded = nullptr;
  REQUIRE(rgbdt_boxes_load(results_path.c_str(), &loaded) == RGBDT_OK);
  CHECK(rgbdt_boxes_count(loaded) == steps + 1);
  rgbdt_box b0{};
  CHECK(rgbdt_boxes_get(loaded, 0, &b0) == RGBDT_OK);
  CHECK(b0.present == 1);

  const std::string frames_csv = (tmp.path / "frames.csv").string();
  CHECK(rgbdt_eval_write_frames_csv(results, gt_prefix, 0.5, frames_csv.c_str()) == RGBDT_OK);
  CHECK(fs::exists(frames_csv));
  const std::string curve_csv = (tmp.path / "curve.csv").string();
  CHECK(rgbdt_eval_write_curve_csv(results, gt_prefix, 20, curve_csv.c_str()) == RGBDT_OK);
  CHECK(fs::exists(curve_csv));

  rgbdt_boxes_destroy(loaded);
  rgbdt_boxes_destroy(gt_prefix);
  rgbdt_boxes_destroy(results);
  rgbdt_tracker_destroy(tracker);
  rgbdt_sequence_destroy(seq);
}

TEST_CASE("error paths speak through status codes") {
  rgbdt_sequence* seq = nullptr;
  CHECK(rgbdt_sequence_load("/no/such/dir", &seq) == RGBDT_ERR_IO);
  CHECK(std::strlen(rgbdt_last_error()) > 0);

  rgbdt_boxes* boxes = nullptr;
  CHECK(rgbdt_boxes_load("/no/such/file.txt", &boxes) == RGBDT_ERR_IO);

  CHECK(rgbdt_synth_generate_preset("bogus", 1, "/tmp/never") == RGBDT_ERR_INVALID_ARGUMENT);

  char buf[1 << 16];
  CHECK(rgbdt_synth_preset_json("fast_translation", 3, buf, sizeof(buf)) == RGBDT_OK);
  CHECK(std::string(buf).find("\"frames\": 100") != std::string::npos);
}
