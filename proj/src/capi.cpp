#include "rgbdtrack.h"

#include <cstring>
#include <string>
#include <vector>

#include "rgbdt/config.hpp"
#include "rgbdt/error.hpp"
#include "rgbdt/eval.hpp"
#include "rgbdt/sequence_io.hpp"
#include "rgbdt/synth.hpp"
#include "rgbdt/tracker.hpp"

namespace {

thread_local std::string g_last_error;

rgbdt_status to_status(rgbdt::ErrorCode code) {
  using rgbdt::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return RGBDT_ERR_INVALID_ARGUMENT;
    case ErrorCode::io: return RGBDT_ERR_IO;
    case ErrorCode::parse: return RGBDT_ERR_PARSE;
    case ErrorCode::state: return RGBDT_ERR_STATE;
    case ErrorCode::bounds: return RGBDT_ERR_BOUNDS;
    case ErrorCode::no_data: return RGBDT_ERR_NO_DATA;
  }
  return RGBDT_ERR_UNKNOWN;
}

template <typename Fn>
rgbdt_status guarded(Fn&& fn) {
  try {
    fn();
    return RGBDT_OK;
  } catch (const rgbdt::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RGBDT_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown error";
    return RGBDT_ERR_UNKNOWN;
  }
}

rgbdt_status bad_argument(const char* msg) {
  g_last_error = msg;
  return RGBDT_ERR_INVALID_ARGUMENT;
}

rgbdt_box to_c(const rgbdt::MaybeBox& b) {
  rgbdt_box out{0.0, 0.0, 0.0, 0.0, 0};
  if (b.has_value()) {
    out.x = b->x;
    out.y = b->y;
    out.w = b->w;
    out.h = b->h;
    out.present = 1;
  }
  return out;
}

rgbdt::MaybeBox from_c(const rgbdt_box& b) {
  if (!b.present) return std::nullopt;
  return rgbdt::BoundingBox{b.x, b.y, b.w, b.h};
}

void copy_out(const std::string& s, char* buf, size_t bufsize) {
  if (buf == nullptr || bufsize == 0) return;
  const size_t n = std::min(bufsize - 1, s.size());
  std::memcpy(buf, s.data(), n);
  buf[n] = '\0';
}

}  // namespace

struct rgbdt_config {
  rgbdt::TrackerConfig cfg;
};

struct rgbdt_sequence {
  rgbdt::Sequence seq;
};

struct rgbdt_tracker {
  rgbdt::TrackMode mode;
  rgbdt::Tracker tracker;
};

struct rgbdt_boxes {
  std::vector<rgbdt::MaybeBox> boxes;
};

extern "C" {

const char* rgbdt_version(void) { return "0.1.0"; }

const char* rgbdt_status_name(rgbdt_status status) {
  switch (status) {
    case RGBDT_OK: return "ok";
    case RGBDT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RGBDT_ERR_IO: return "io error";
    case RGBDT_ERR_PARSE: return "parse error";
    case RGBDT_ERR_STATE: return "invalid state";
    case RGBDT_ERR_BOUNDS: return "out of bounds";
    case RGBDT_ERR_NO_DATA: return "no data";
    case RGBDT_ERR_UNKNOWN: return "unknown error";
  }
  return "unknown status";
}

const char* rgbdt_last_error(void) { return g_last_error.c_str(); }

rgbdt_status rgbdt_config_create(rgbdt_config** out) {
  if (!out) return bad_argument("out is null");
  return guarded([&] { *out = new rgbdt_config(); });
}

rgbdt_status rgbdt_config_load(const char* path, rgbdt_config** out) {
  if (!path || !out) return bad_argument("path/out is null");
  return guarded([&] { *out = new rgbdt_config{rgbdt::TrackerConfig::load(path)}; });
}

rgbdt_status rgbdt_config_save(const rgbdt_config* cfg, const char* path) {
  if (!cfg || !path) return bad_argument("cfg/path is null");
  return guarded([&] { cfg->cfg.save(path); });
}

rgbdt_status rgbdt_config_set(rgbdt_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return bad_argument("cfg/key/value is null");
  return guarded([&] { cfg->cfg.set(key, value); });
}

rgbdt_status rgbdt_config_get(const rgbdt_config* cfg, const char* key, char* buf,
                              size_t bufsize) {
  if (!cfg || !key) return bad_argument("cfg/key is null");
  return guarded([&] { copy_out(cfg->cfg.get(key), buf, bufsize); });
}

void rgbdt_config_destroy(rgbdt_config* cfg) { delete cfg; }

rgbdt_status rgbdt_sequence_load(const char* dir, rgbdt_sequence** out) {
  if (!dir || !out) return bad_argument("dir/out is null");
  return guarded([&] { *out = new rgbdt_sequence{rgbdt::load_sequence(dir)}; });
}

int rgbdt_sequence_frame_count(const rgbdt_sequence* seq) {
  return seq ? static_cast<int>(seq->seq.size()) : 0;
}

rgbdt_status rgbdt_sequence_dims(const rgbdt_sequence* seq, int* width, int* height) {
  if (!seq || !width || !height) return bad_argument("seq/width/height is null");
  *width = seq->seq.width();
  *height = seq->seq.height();
  return RGBDT_OK;
}

rgbdt_status rgbdt_sequence_ground_truth(const rgbdt_sequence* seq, int frame, rgbdt_box* out) {
  if (!seq || !out) return bad_argument("seq/out is null");
  if (frame < 0 || frame >= static_cast<int>(seq->seq.size())) {
    g_last_error = "frame index out of range";
    return RGBDT_ERR_BOUNDS;
  }
  *out = to_c(seq->seq.ground_truth[frame]);
  return RGBDT_OK;
}

void rgbdt_sequence_destroy(rgbdt_sequence* seq) { delete seq; }

rgbdt_status rgbdt_tracker_create(const rgbdt_config* cfg, const char* mode, rgbdt_tracker** out) {
  if (!mode || !out) return bad_argument("mode/out is null");
  return guarded([&] {
    const rgbdt::TrackMode m = rgbdt::parse_mode(mode);
    const rgbdt::TrackerConfig c = cfg ? cfg->cfg : rgbdt::TrackerConfig{};
    *out = new rgbdt_tracker{m, rgbdt::Tracker(m, c)};
  });
}

rgbdt_status rgbdt_tracker_init(rgbdt_tracker* tracker, const rgbdt_sequence* seq, int frame,
                                const rgbdt_box* init_box) {
  if (!tracker || !seq || !init_box) return bad_argument("tracker/seq/init_box is null");
  if (frame < 0 || frame >= static_cast<int>(seq->seq.size()))
    return bad_argument("init frame index out of range");
  const rgbdt::MaybeBox box = from_c(*init_box);
  if (!box.has_value()) return bad_argument("init box must be present");
  return guarded([&] { tracker->tracker.init(seq->seq.frames[frame], *box); });
}

rgbdt_status rgbdt_tracker_step(rgbdt_tracker* tracker, const rgbdt_sequence* seq, int frame,
                                rgbdt_box* out) {
  if (!tracker || !seq || !out) return bad_argument("tracker/seq/out is null");
  if (frame < 0 || frame >= static_cast<int>(seq->seq.size())) {
    g_last_error = "frame index out of range";
    return RGBDT_ERR_BOUNDS;
  }
  return guarded([&] {
    const rgbdt::FrameResult r = tracker->tracker.step(seq->seq.frames[frame]);
    *out = to_c(r.box);
  });
}

int rgbdt_tracker_occluded(const rgbdt_tracker* tracker) {
  return tracker && tracker->tracker.phase() == rgbdt::Phase::occluded ? 1 : 0;
}

void rgbdt_tracker_destroy(rgbdt_tracker* tracker) { delete tracker; }

rgbdt_status rgbdt_boxes_create(rgbdt_boxes** out) {
  if (!out) return bad_argument("out is null");
  return guarded([&] { *out = new rgbdt_boxes(); });
}

rgbdt_status rgbdt_boxes_load(const char* path, rgbdt_boxes** out) {
  if (!path || !out) return bad_argument("path/out is null");
  return guarded([&] { *out = new rgbdt_boxes{rgbdt::load_boxes(path)}; });
}

rgbdt_status rgbdt_boxes_save(const rgbdt_boxes* boxes, const char* path) {
  if (!boxes || !path) return bad_argument("boxes/path is null");
  return guarded([&] { rgbdt::save_boxes(boxes->boxes, path); });
}

rgbdt_status rgbdt_boxes_push(rgbdt_boxes* boxes, rgbdt_box box) {
  if (!boxes) return bad_argument("boxes is null");
  return guarded([&] {
    const rgbdt::MaybeBox b = from_c(box);
    if (b.has_value())
      rgbdt::require(b->valid(), rgbdt::ErrorCode::invalid_argument,
                     "box width/height must be > 0");
    boxes->boxes.push_back(b);
  });
}

int rgbdt_boxes_count(const rgbdt_boxes* boxes) {
  return boxes ? static_cast<int>(boxes->boxes.size()) : 0;
}

rgbdt_status rgbdt_boxes_get(const rgbdt_boxes* boxes, int index, rgbdt_box* out) {
  if (!boxes || !out) return bad_argument("boxes/out is null");
  if (index < 0 || index >= static_cast<int>(boxes->boxes.size())) {
    g_last_error = "box index out of range";
    return RGBDT_ERR_BOUNDS;
  }
  *out = to_c(boxes->boxes[index]);
  return RGBDT_OK;
}

void rgbdt_boxes_destroy(rgbdt_boxes* boxes) { delete boxes; }

double rgbdt_overlap(const rgbdt_box* a, const rgbdt_box* b) {
  if (!a || !b) return -1.0;
  return rgbdt::overlap(from_c(*a), from_c(*b));
}

rgbdt_status rgbdt_evaluate(const rgbdt_boxes* results, const rgbdt_boxes* ground_truth, double rt,
                            rgbdt_metrics* out) {
  if (!results || !ground_truth || !out) return bad_argument("results/ground_truth/out is null");
  return guarded([&] {
    const rgbdt::SequenceMetrics m = rgbdt::summarize(results->boxes, ground_truth->boxes, rt);
    out->success_rate = m.success_rate;
    out->type1 = m.type1;
    out->type2 = m.type2;
    out->type3 = m.type3;
    out->speed_max = m.speed.has_value() ? m.speed->max : std::numeric_limits<double>::quiet_NaN();
    out->speed_mean =
        m.speed.has_value() ? m.speed->mean : std::numeric_limits<double>::quiet_NaN();
    out->frames = static_cast<int>(m.frames);
  });
}

rgbdt_status rgbdt_eval_write_frames_csv(const rgbdt_boxes* results,
                                         const rgbdt_boxes* ground_truth, double rt,
                                         const char* path) {
  if (!results || !ground_truth || !path)
    return bad_argument("results/ground_truth/path is null");
  return guarded([&] {
    const auto scores = rgbdt::classify_errors(results->boxes, ground_truth->boxes, rt);
    rgbdt::write_frames_csv(path, scores);
  });
}

rgbdt_status rgbdt_eval_write_curve_csv(const rgbdt_boxes* results,
                                        const rgbdt_boxes* ground_truth, int samples,
                                        const char* path) {
  if (!results || !ground_truth || !path)
    return bad_argument("results/ground_truth/path is null");
  return guarded([&] {
    const auto scores = rgbdt::classify_errors(results->boxes, ground_truth->boxes, 0.5);
    std::vector<double> rs;
    rs.reserve(scores.size());
    for (const auto& s : scores) rs.push_back(s.r);
    rgbdt::write_curve_csv(path, rgbdt::success_curve(rs, samples));
  });
}

rgbdt_status rgbdt_synth_generate(const char* spec_json_path, const char* out_dir) {
  if (!spec_json_path || !out_dir) return bad_argument("spec_json_path/out_dir is null");
  return guarded(
      [&] { rgbdt::synth::generate(rgbdt::synth::load_spec(spec_json_path), out_dir); });
}

rgbdt_status rgbdt_synth_generate_preset(const char* preset, uint64_t seed, const char* out_dir) {
  if (!preset || !out_dir) return bad_argument("preset/out_dir is null");
  return guarded([&] { rgbdt::synth::generate(rgbdt::synth::preset(preset, seed), out_dir); });
}

rgbdt_status rgbdt_synth_preset_json(const char* preset, uint64_t seed, char* buf,
                                     size_t bufsize) {
  if (!preset) return bad_argument("preset is null");
  return guarded(
      [&] { copy_out(rgbdt::synth::to_json(rgbdt::synth::preset(preset, seed)), buf, bufsize); });
}

}  // extern "C"
