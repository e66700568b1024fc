/*
 * rgbdtrack — single-object RGBD tracking library.
 *
 * C API over the C++ core: opaque handles, integer status codes, and a
 * thread-local error message. All functions return RGBDT_OK (0) on
 * success; any other value is an error whose detail is available from
 * rgbdt_last_error() on the same thread.
 */
#ifndef RGBDTRACK_H
#define RGBDTRACK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RGBDT_API __declspec(dllexport)
#else
#define RGBDT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rgbdt_status {
  RGBDT_OK = 0,
  RGBDT_ERR_INVALID_ARGUMENT = 1,
  RGBDT_ERR_IO = 2,
  RGBDT_ERR_PARSE = 3,
  RGBDT_ERR_STATE = 4,
  RGBDT_ERR_BOUNDS = 5,
  RGBDT_ERR_NO_DATA = 6,
  RGBDT_ERR_UNKNOWN = 7
} rgbdt_status;

/* A box that may be absent (present == 0 means no box; the coordinate
 * fields are then meaningless). Coordinates are pixels, top-left origin,
 * half-open on the right/bottom edge. */
typedef struct rgbdt_box {
  double x, y, w, h;
  int present;
} rgbdt_box;

typedef struct rgbdt_config rgbdt_config;     /* tracker configuration */
typedef struct rgbdt_sequence rgbdt_sequence; /* frames + ground truth */
typedef struct rgbdt_tracker rgbdt_tracker;   /* online tracker state */
typedef struct rgbdt_boxes rgbdt_boxes;       /* a box stream (results / gt) */

RGBDT_API const char* rgbdt_version(void);
RGBDT_API const char* rgbdt_status_name(rgbdt_status status);
/* Message of the most recent error on this thread ("" if none). */
RGBDT_API const char* rgbdt_last_error(void);

/* ---- configuration (flat key=value text file) ------------------------- */
RGBDT_API rgbdt_status rgbdt_config_create(rgbdt_config** out);
RGBDT_API rgbdt_status rgbdt_config_load(const char* path, rgbdt_config** out);
RGBDT_API rgbdt_status rgbdt_config_save(const rgbdt_config* cfg, const char* path);
RGBDT_API rgbdt_status rgbdt_config_set(rgbdt_config* cfg, const char* key, const char* value);
/* Writes the value into buf (NUL terminated, truncated to bufsize). */
RGBDT_API rgbdt_status rgbdt_config_get(const rgbdt_config* cfg, const char* key, char* buf,
                                        size_t bufsize);
RGBDT_API void rgbdt_config_destroy(rgbdt_config* cfg);

/* ---- sequences (rgb/%08d.png + depth/%08d.png + groundtruth.txt) ------ */
RGBDT_API rgbdt_status rgbdt_sequence_load(const char* dir, rgbdt_sequence** out);
RGBDT_API int rgbdt_sequence_frame_count(const rgbdt_sequence* seq);
RGBDT_API rgbdt_status rgbdt_sequence_dims(const rgbdt_sequence* seq, int* width, int* height);
RGBDT_API rgbdt_status rgbdt_sequence_ground_truth(const rgbdt_sequence* seq, int frame,
                                                   rgbdt_box* out);
RGBDT_API void rgbdt_sequence_destroy(rgbdt_sequence* seq);

/* ---- tracking ---------------------------------------------------------
 * mode is one of "rgb", "rgbd", "rgbocc", "rgbdocc". A tracker is
 * initialized on one frame and then stepped over strictly consecutive
 * frame indices of the same sequence. */
RGBDT_API rgbdt_status rgbdt_tracker_create(const rgbdt_config* cfg, const char* mode,
                                            rgbdt_tracker** out);
RGBDT_API rgbdt_status rgbdt_tracker_init(rgbdt_tracker* tracker, const rgbdt_sequence* seq,
                                          int frame, const rgbdt_box* init_box);
RGBDT_API rgbdt_status rgbdt_tracker_step(rgbdt_tracker* tracker, const rgbdt_sequence* seq,
                                          int frame, rgbdt_box* out);
/* 1 while the tracker is in the occluded state, else 0. */
RGBDT_API int rgbdt_tracker_occluded(const rgbdt_tracker* tracker);
RGBDT_API void rgbdt_tracker_destroy(rgbdt_tracker* tracker);

/* ---- box streams ------------------------------------------------------
 * Results files and ground-truth files share one grammar:
 * "frame,x,y,w,h" per line, NaN fields for an absent box. */
RGBDT_API rgbdt_status rgbdt_boxes_create(rgbdt_boxes** out);
RGBDT_API rgbdt_status rgbdt_boxes_load(const char* path, rgbdt_boxes** out);
RGBDT_API rgbdt_status rgbdt_boxes_save(const rgbdt_boxes* boxes, const char* path);
RGBDT_API rgbdt_status rgbdt_boxes_push(rgbdt_boxes* boxes, rgbdt_box box);
RGBDT_API int rgbdt_boxes_count(const rgbdt_boxes* boxes);
RGBDT_API rgbdt_status rgbdt_boxes_get(const rgbdt_boxes* boxes, int index, rgbdt_box* out);
RGBDT_API void rgbdt_boxes_destroy(rgbdt_boxes* boxes);

/* ---- evaluation -------------------------------------------------------- */
typedef struct rgbdt_metrics {
  double success_rate; /* fraction of frames with overlap > rt */
  double type1;        /* wrong location */
  double type2;        /* output while fully occluded */
  double type3;        /* no output while visible */
  double speed_max;    /* max 1 - r(i,i+1) over the ground truth; NaN if undefined */
  double speed_mean;
  int frames;
} rgbdt_metrics;

/* Overlap ratio of two possibly-absent boxes: IoU; 1 when both absent;
 * -1 when exactly one is absent. */
RGBDT_API double rgbdt_overlap(const rgbdt_box* a, const rgbdt_box* b);

RGBDT_API rgbdt_status rgbdt_evaluate(const rgbdt_boxes* results, const rgbdt_boxes* ground_truth,
                                      double rt, rgbdt_metrics* out);
/* Per-frame CSV: frame,r,cpe,error_type. */
RGBDT_API rgbdt_status rgbdt_eval_write_frames_csv(const rgbdt_boxes* results,
                                                   const rgbdt_boxes* ground_truth, double rt,
                                                   const char* path);
/* Success-vs-threshold curve CSV sampled at k/samples, k = 1..samples-1. */
RGBDT_API rgbdt_status rgbdt_eval_write_curve_csv(const rgbdt_boxes* results,
                                                  const rgbdt_boxes* ground_truth, int samples,
                                                  const char* path);

/* ---- synthetic sequences ----------------------------------------------
 * Generates a SequenceOnDisk directory from a JSON scenario spec or one
 * of the named presets: "static", "fast_translation", "out_of_plane_proxy",
 * "gradual_occlusion", "full_occlusion_recovery". */
RGBDT_API rgbdt_status rgbdt_synth_generate(const char* spec_json_path, const char* out_dir);
RGBDT_API rgbdt_status rgbdt_synth_generate_preset(const char* preset, uint64_t seed,
                                                   const char* out_dir);
/* Writes the preset's scenario spec as JSON (stdout helper for the CLI). */
RGBDT_API rgbdt_status rgbdt_synth_preset_json(const char* preset, uint64_t seed, char* buf,
                                               size_t bufsize);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RGBDTRACK_H */
