#include "rgbdt/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rgbdt/error.hpp"
#include "rgbdt/png_io.hpp"

namespace rgbdt::synth {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

double interp_path(const std::vector<PathKnot>& knots, int frame, bool y_axis) {
  auto value = [&](const PathKnot& k) { return y_axis ? k.y : k.x; };
  if (frame <= knots.front().frame) return value(knots.front());
  if (frame >= knots.back().frame) return value(knots.back());
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    if (frame > knots[i + 1].frame) continue;
    const double t = static_cast<double>(frame - knots[i].frame) /
                     (knots[i + 1].frame - knots[i].frame);
    return value(knots[i]) + t * (value(knots[i + 1]) - value(knots[i]));
  }
  return value(knots.back());
}

double interp_cover(const std::vector<CoverKnot>& knots, int frame) {
  if (frame <= knots.front().frame) return knots.front().cover;
  if (frame >= knots.back().frame) return knots.back().cover;
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    if (frame > knots[i + 1].frame) continue;
    const double t = static_cast<double>(frame - knots[i].frame) /
                     (knots[i + 1].frame - knots[i].frame);
    return knots[i].cover + t * (knots[i + 1].cover - knots[i].cover);
  }
  return knots.back().cover;
}

// Block texture: tiles jittered around a base color, anchored to the
// object's origin so the pattern travels with it. Within-object tile
// distance stays below the RGB segmentation threshold (objects read as one
// color region) while distinct bases give strong object boundaries.
struct BlockTexture {
  int block = 8;
  int tiles_x = 1;
  int tiles_y = 1;
  std::vector<uint8_t> colors;  // tiles_y * tiles_x * 3

  static BlockTexture make(std::mt19937_64& rng, double w, double h, int block, uint8_t base_r,
                           uint8_t base_g, uint8_t base_b, int variation = 14) {
    BlockTexture t;
    t.block = std::max(1, block);
    t.tiles_x = std::max(1, static_cast<int>(std::ceil(w / t.block)));
    t.tiles_y = std::max(1, static_cast<int>(std::ceil(h / t.block)));
    std::uniform_int_distribution<int> u(-variation, variation);
    const int base[3] = {base_r, base_g, base_b};
    t.colors.resize(static_cast<size_t>(t.tiles_x) * t.tiles_y * 3);
    for (size_t i = 0; i < t.colors.size(); ++i)
      t.colors[i] = static_cast<uint8_t>(std::clamp(base[i % 3] + u(rng), 0, 255));
    return t;
  }

  void sample(double local_x, double local_y, uint8_t* out) const {
    int tx = static_cast<int>(std::floor(local_x / block));
    int ty = static_cast<int>(std::floor(local_y / block));
    tx = ((tx % tiles_x) + tiles_x) % tiles_x;
    ty = ((ty % tiles_y) + tiles_y) % tiles_y;
    const size_t i = (static_cast<size_t>(ty) * tiles_x + tx) * 3;
    out[0] = colors[i];
    out[1] = colors[i + 1];
    out[2] = colors[i + 2];
  }
};

struct PixelSpan {
  int x0, y0, x1, y1;  // half-open; pixel centers inside the box

  bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
};

PixelSpan rasterize(const BoundingBox& b, int width, int height) {
  PixelSpan s;
  s.x0 = std::max(0, static_cast<int>(std::ceil(b.x - 0.5)));
  s.y0 = std::max(0, static_cast<int>(std::ceil(b.y - 0.5)));
  s.x1 = std::min(width, static_cast<int>(std::ceil(b.right() - 0.5)));
  s.y1 = std::min(height, static_cast<int>(std::ceil(b.bottom() - 0.5)));
  return s;
}

uint64_t mix_seed(uint64_t seed, uint64_t salt) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

void validate(const ScenarioSpec& spec) {
  std::vector<std::string> bad;
  if (spec.width < 32 || spec.height < 32) bad.push_back("canvas must be at least 32x32");
  if (spec.frames < 1) bad.push_back("frames must be >= 1");
  if (spec.target.w < 8 || spec.target.h < 8) bad.push_back("target must be at least 8x8 px");
  if (spec.target.depth_mm <= 0 || spec.target.depth_mm > kMaxDepthMm)
    bad.push_back("target.depth_mm must be in (0, 10000]");
  if (spec.target.depth_end_mm.has_value() &&
      (*spec.target.depth_end_mm <= 0 || *spec.target.depth_end_mm > kMaxDepthMm))
    bad.push_back("target.depth_end_mm must be in (0, 10000]");
  if (spec.background.depth_mm <= spec.target.depth_mm)
    bad.push_back("background.depth_mm must exceed target.depth_mm");
  const double min_target_depth =
      std::min(spec.target.depth_mm, spec.target.depth_end_mm.value_or(spec.target.depth_mm));
  if (spec.occluder.has_value()) {
    if (spec.occluder->depth_mm <= 0) bad.push_back("occluder.depth_mm must be > 0");
    if (spec.occluder->depth_mm >= min_target_depth)
      bad.push_back("occluder.depth_mm must be nearer than the target depth");
    if (spec.occluder->path.empty() && spec.occluder->cover_schedule.empty())
      bad.push_back("occluder needs a path or a cover_schedule");
    for (const auto& k : spec.occluder->cover_schedule)
      if (k.cover < 0.0 || k.cover > 1.0) bad.push_back("cover_schedule values must be in [0,1]");
  }
  if (spec.noise.depth_sigma_mm < 0.0) bad.push_back("noise.depth_sigma_mm must be >= 0");
  if (spec.noise.hole_prob < 0.0 || spec.noise.hole_prob > 1.0)
    bad.push_back("noise.hole_prob must be in [0,1]");
  if (!bad.empty()) {
    std::string msg = "invalid scenario spec:";
    for (const auto& b : bad) msg += "\n  - " + b;
    fail(ErrorCode::invalid_argument, msg);
  }
}

Sequence render(const ScenarioSpec& spec) {
  validate(spec);
  const int W = spec.width, H = spec.height;

  std::mt19937_64 tex_rng(mix_seed(spec.seed, 0));
  const BlockTexture bg_tex =
      BlockTexture::make(tex_rng, W, H, spec.background.block, 112, 112, 112);
  const BlockTexture target_tex = BlockTexture::make(tex_rng, spec.target.w, spec.target.h,
                                                     spec.target.texture_block, 176, 104, 72);
  const BlockTexture target_tex_b = BlockTexture::make(tex_rng, spec.target.w, spec.target.h,
                                                       spec.target.texture_block, 88, 140, 168);
  BlockTexture occ_tex;
  if (spec.occluder.has_value()) {
    occ_tex = spec.occluder->match_target_texture
                  ? target_tex
                  : BlockTexture::make(tex_rng, spec.occluder->w, spec.occluder->h,
                                       spec.occluder->texture_block, 72, 128, 192);
  }

  Sequence seq;
  seq.frames.reserve(spec.frames);
  seq.ground_truth.reserve(spec.frames);

  for (int fi = 0; fi < spec.frames; ++fi) {
    // Target placement.
    double tcx = W / 2.0, tcy = H / 2.0;
    if (!spec.target.path.empty()) {
      tcx = interp_path(spec.target.path, fi, false);
      tcy = interp_path(spec.target.path, fi, true);
    }
    const BoundingBox tbox = BoundingBox::from_center(tcx, tcy, spec.target.w, spec.target.h);
    double tdepth = spec.target.depth_mm;
    if (spec.target.depth_end_mm.has_value() && spec.frames > 1)
      tdepth += (*spec.target.depth_end_mm - spec.target.depth_mm) * fi / (spec.frames - 1.0);

    // Occluder placement: a cover schedule slides it over the target from
    // the left so that it covers exactly the scheduled area fraction.
    std::optional<BoundingBox> obox;
    if (spec.occluder.has_value()) {
      const OccluderSpec& o = *spec.occluder;
      if (!o.cover_schedule.empty()) {
        const double f = interp_cover(o.cover_schedule, fi);
        obox = BoundingBox{tbox.x + f * tbox.w - o.w, tcy - o.h / 2.0, o.w, o.h};
      } else {
        obox = BoundingBox::from_center(interp_path(o.path, fi, false),
                                        interp_path(o.path, fi, true), o.w, o.h);
      }
    }

    const PixelSpan tspan = rasterize(tbox, W, H);
    const PixelSpan ospan = obox.has_value() ? rasterize(*obox, W, H) : PixelSpan{0, 0, 0, 0};

    Frame frame;
    frame.index = fi;
    frame.rgb = ImageU8(W, H, 3);
    frame.depth = ImageU16(W, H, 1);

    std::mt19937_64 noise_rng(mix_seed(spec.seed, 1000 + fi));
    std::normal_distribution<double> jitter(0.0, std::max(1e-12, spec.noise.depth_sigma_mm));
    std::uniform_real_distribution<double> uhole(0.0, 1.0);

    // Crossfade phase: triangle wave A -> B -> A per period.
    double blend = 0.0;
    if (spec.target.crossfade && spec.target.crossfade_period > 1) {
      const double p = static_cast<double>(fi % spec.target.crossfade_period) /
                       spec.target.crossfade_period;
      blend = p < 0.5 ? 2.0 * p : 2.0 * (1.0 - p);
    }

    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) {
        uint8_t rgb[3];
        double depth;
        if (!ospan.empty() && ospan.contains(x, y)) {
          occ_tex.sample(x + 0.5 - obox->x, y + 0.5 - obox->y, rgb);
          depth = spec.occluder->depth_mm;
        } else if (tspan.contains(x, y)) {
          target_tex.sample(x + 0.5 - tbox.x, y + 0.5 - tbox.y, rgb);
          if (blend > 0.0) {
            uint8_t rgb_b[3];
            target_tex_b.sample(x + 0.5 - tbox.x, y + 0.5 - tbox.y, rgb_b);
            for (int c = 0; c < 3; ++c)
              rgb[c] = static_cast<uint8_t>(std::lround((1.0 - blend) * rgb[c] + blend * rgb_b[c]));
          }
          depth = tdepth;
        } else {
          bg_tex.sample(x + 0.5, y + 0.5, rgb);
          depth = spec.background.depth_mm;
        }
        for (int c = 0; c < 3; ++c) frame.rgb.at(x, y, c) = rgb[c];

        if (spec.noise.hole_prob > 0.0 && uhole(noise_rng) < spec.noise.hole_prob) {
          frame.depth.at(x, y) = 0;
        } else {
          if (spec.noise.depth_sigma_mm > 0.0) depth += jitter(noise_rng);
          frame.depth.at(x, y) =
              static_cast<uint16_t>(std::clamp<long>(std::lround(depth), 1, kMaxDepthMm));
        }
      }

    // Ground truth: minimum box of the visible target pixels.
    int minx = 1 << 30, miny = 1 << 30, maxx = -1, maxy = -1;
    for (int y = tspan.y0; y < tspan.y1; ++y)
      for (int x = tspan.x0; x < tspan.x1; ++x) {
        if (!ospan.empty() && ospan.contains(x, y)) continue;
        minx = std::min(minx, x);
        miny = std::min(miny, y);
        maxx = std::max(maxx, x);
        maxy = std::max(maxy, y);
      }
    if (maxx < 0)
      seq.ground_truth.push_back(std::nullopt);
    else
      seq.ground_truth.push_back(BoundingBox{double(minx), double(miny), double(maxx - minx + 1),
                                             double(maxy - miny + 1)});

    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

void generate(const ScenarioSpec& spec, const fs::path& out_dir) {
  const Sequence seq = render(spec);
  fs::create_directories(out_dir / "rgb");
  fs::create_directories(out_dir / "depth");
  char name[16];
  for (size_t i = 0; i < seq.frames.size(); ++i) {
    std::snprintf(name, sizeof(name), "%08zu.png", i);
    write_png_rgb8(seq.frames[i].rgb, out_dir / "rgb" / name);
    write_png_gray16(seq.frames[i].depth, out_dir / "depth" / name);
  }
  save_boxes(seq.ground_truth, out_dir / "groundtruth.txt");
}

namespace {

std::vector<PathKnot> parse_path(const json& j) {
  std::vector<PathKnot> knots;
  for (const auto& k : j)
    knots.push_back({k.at("frame").get<int>(), k.at("x").get<double>(), k.at("y").get<double>()});
  require(!knots.empty(), ErrorCode::parse, "path must have at least one knot");
  return knots;
}

}  // namespace

ScenarioSpec parse_spec_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse, std::string("scenario spec is not valid JSON: ") + e.what());
  }
  ScenarioSpec s;
  try {
    s.width = j.value("width", s.width);
    s.height = j.value("height", s.height);
    s.frames = j.value("frames", s.frames);
    s.seed = j.value("seed", s.seed);
    if (j.contains("background")) {
      const auto& b = j["background"];
      s.background.depth_mm = b.value("depth_mm", s.background.depth_mm);
      s.background.block = b.value("block", s.background.block);
    }
    if (j.contains("target")) {
      const auto& t = j["target"];
      s.target.w = t.value("w", s.target.w);
      s.target.h = t.value("h", s.target.h);
      s.target.depth_mm = t.value("depth_mm", s.target.depth_mm);
      if (t.contains("depth_end_mm")) s.target.depth_end_mm = t["depth_end_mm"].get<double>();
      if (t.contains("path")) s.target.path = parse_path(t["path"]);
      s.target.crossfade = t.value("crossfade", s.target.crossfade);
      s.target.crossfade_period = t.value("crossfade_period", s.target.crossfade_period);
      s.target.texture_block = t.value("texture_block", s.target.texture_block);
    }
    if (j.contains("occluder") && !j["occluder"].is_null()) {
      OccluderSpec o;
      const auto& jo = j["occluder"];
      o.w = jo.value("w", o.w);
      o.h = jo.value("h", o.h);
      o.depth_mm = jo.value("depth_mm", o.depth_mm);
      if (jo.contains("path")) o.path = parse_path(jo["path"]);
      if (jo.contains("cover_schedule"))
        for (const auto& k : jo["cover_schedule"])
          o.cover_schedule.push_back({k.at("frame").get<int>(), k.at("cover").get<double>()});
      o.match_target_texture = jo.value("match_target_texture", o.match_target_texture);
      o.texture_block = jo.value("texture_block", o.texture_block);
      s.occluder = std::move(o);
    }
    if (j.contains("noise")) {
      const auto& n = j["noise"];
      s.noise.depth_sigma_mm = n.value("depth_sigma_mm", s.noise.depth_sigma_mm);
      s.noise.hole_prob = n.value("hole_prob", s.noise.hole_prob);
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::parse, std::string("bad scenario spec field: ") + e.what());
  }
  validate(s);
  return s;
}

ScenarioSpec load_spec(const fs::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open scenario spec: " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_spec_json(os.str());
}

std::string to_json(const ScenarioSpec& s) {
  json j;
  j["width"] = s.width;
  j["height"] = s.height;
  j["frames"] = s.frames;
  j["seed"] = s.seed;
  j["background"] = {{"depth_mm", s.background.depth_mm}, {"block", s.background.block}};
  json t;
  t["w"] = s.target.w;
  t["h"] = s.target.h;
  t["depth_mm"] = s.target.depth_mm;
  if (s.target.depth_end_mm.has_value()) t["depth_end_mm"] = *s.target.depth_end_mm;
  if (!s.target.path.empty()) {
    json p = json::array();
    for (const auto& k : s.target.path) p.push_back({{"frame", k.frame}, {"x", k.x}, {"y", k.y}});
    t["path"] = p;
  }
  t["crossfade"] = s.target.crossfade;
  t["crossfade_period"] = s.target.crossfade_period;
  t["texture_block"] = s.target.texture_block;
  j["target"] = t;
  if (s.occluder.has_value()) {
    json o;
    o["w"] = s.occluder->w;
    o["h"] = s.occluder->h;
    o["depth_mm"] = s.occluder->depth_mm;
    if (!s.occluder->path.empty()) {
      json p = json::array();
      for (const auto& k : s.occluder->path)
        p.push_back({{"frame", k.frame}, {"x", k.x}, {"y", k.y}});
      o["path"] = p;
    }
    if (!s.occluder->cover_schedule.empty()) {
      json c = json::array();
      for (const auto& k : s.occluder->cover_schedule)
        c.push_back({{"frame", k.frame}, {"cover", k.cover}});
      o["cover_schedule"] = c;
    }
    o["match_target_texture"] = s.occluder->match_target_texture;
    o["texture_block"] = s.occluder->texture_block;
    j["occluder"] = o;
  }
  j["noise"] = {{"depth_sigma_mm", s.noise.depth_sigma_mm}, {"hole_prob", s.noise.hole_prob}};
  return j.dump(2) + "\n";
}

std::vector<std::string> preset_names() {
  return {"static", "fast_translation", "out_of_plane_proxy", "gradual_occlusion",
          "full_occlusion_recovery"};
}

ScenarioSpec preset(std::string_view name, uint64_t seed) {
  ScenarioSpec s;
  s.seed = seed;
  if (name == "static") {
    s.frames = 60;
    s.target.depth_mm = 2500.0;
    s.noise.depth_sigma_mm = 10.0;
    s.noise.hole_prob = 0.005;
  } else if (name == "fast_translation") {
    // 8 px/frame ping-pong: speed statistic 2*8/(48+8) = 0.286 <= 0.3.
    s.frames = 100;
    s.target.depth_mm = 2500.0;
    s.target.path = {{0, 64, 120}, {24, 256, 120}, {48, 64, 120}, {72, 256, 120}, {96, 64, 120},
                     {99, 88, 120}};
  } else if (name == "out_of_plane_proxy") {
    s.frames = 80;
    s.target.depth_mm = 2800.0;
    s.target.crossfade = true;
    s.target.crossfade_period = 40;
    s.target.path = {{0, 120, 120}, {79, 200, 120}};
  } else if (name == "gradual_occlusion") {
    s.frames = 100;
    s.target.depth_mm = 3000.0;
    OccluderSpec o;
    o.w = 64.0;
    o.h = 96.0;
    o.depth_mm = 1200.0;  // 1800 mm nearer than the target
    o.match_target_texture = true;
    o.cover_schedule = {{0, 0.0}, {10, 0.0}, {70, 0.8}, {85, 0.8}, {99, 0.15}};
    s.occluder = o;
  } else if (name == "full_occlusion_recovery") {
    s.frames = 100;
    s.target.depth_mm = 3000.0;
    OccluderSpec o;
    o.w = 72.0;
    o.h = 112.0;
    o.depth_mm = 1000.0;
    o.cover_schedule = {{0, 0.0}, {25, 0.0}, {40, 1.0}, {50, 1.0}, {58, 0.0}, {99, 0.0}};
    s.occluder = o;
  } else {
    fail(ErrorCode::invalid_argument, "unknown preset: " + std::string(name));
  }
  return s;
}

}  // namespace rgbdt::synth
