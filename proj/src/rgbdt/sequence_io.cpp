#include "rgbdt/sequence_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rgbdt/error.hpp"
#include "rgbdt/png_io.hpp"

namespace rgbdt {

namespace {

namespace fs = std::filesystem;

std::string frame_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%08d.png", index);
  return buf;
}

size_t count_pngs(const fs::path& dir) {
  require(fs::is_directory(dir), ErrorCode::io, "missing directory: " + dir.string());
  size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".png") ++n;
  return n;
}

bool is_nan_token(std::string t) {
  for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return t == "nan";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

MaybeBox parse_box_line(const std::string& line, const fs::path& file, size_t line_no,
                        int expected_frame) {
  const auto fields = split_csv(line);
  const std::string where = file.string() + ":" + std::to_string(line_no);
  require(fields.size() == 5, ErrorCode::parse,
          where + ": expected 5 comma-separated fields, got " + std::to_string(fields.size()));

  int frame = -1;
  try {
    size_t pos = 0;
    frame = std::stoi(fields[0], &pos);
    require(pos == fields[0].size(), ErrorCode::parse, where + ": bad frame index");
  } catch (const std::exception&) {
    fail(ErrorCode::parse, where + ": bad frame index '" + fields[0] + "'");
  }
  require(frame == expected_frame, ErrorCode::parse,
          where + ": frame indices must be contiguous from 0 (expected " +
              std::to_string(expected_frame) + ", got " + std::to_string(frame) + ")");

  int nans = 0;
  for (int i = 1; i <= 4; ++i)
    if (is_nan_token(fields[i])) ++nans;
  if (nans == 4) return std::nullopt;
  require(nans == 0, ErrorCode::parse, where + ": mixed NaN and numeric box fields");

  double v[4];
  for (int i = 0; i < 4; ++i) {
    try {
      size_t pos = 0;
      v[i] = std::stod(fields[i + 1], &pos);
      require(pos == fields[i + 1].size() && std::isfinite(v[i]), ErrorCode::parse,
              where + ": bad box value");
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(ErrorCode::parse, where + ": bad box value '" + fields[i + 1] + "'");
    }
  }
  require(v[2] > 0.0 && v[3] > 0.0, ErrorCode::parse, where + ": box width/height must be > 0");
  return BoundingBox{v[0], v[1], v[2], v[3]};
}

}  // namespace

std::vector<MaybeBox> load_boxes(const fs::path& file) {
  std::ifstream in(file);
  require(in.good(), ErrorCode::io, "cannot open " + file.string());
  std::vector<MaybeBox> boxes;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") {
      // Only a trailing blank line is tolerated.
      require(in.peek() == EOF, ErrorCode::parse,
              file.string() + ":" + std::to_string(line_no) + ": blank line");
      break;
    }
    boxes.push_back(parse_box_line(line, file, line_no, static_cast<int>(boxes.size())));
  }
  require(!boxes.empty(), ErrorCode::parse, file.string() + ": no box lines");
  return boxes;
}

std::string format_box_line(int frame, const MaybeBox& box) {
  char buf[160];
  if (box.has_value())
    std::snprintf(buf, sizeof(buf), "%d,%.4f,%.4f,%.4f,%.4f", frame, box->x, box->y, box->w,
                  box->h);
  else
    std::snprintf(buf, sizeof(buf), "%d,NaN,NaN,NaN,NaN", frame);
  return buf;
}

void save_boxes(std::span<const MaybeBox> boxes, const fs::path& file) {
  std::string text;
  for (size_t i = 0; i < boxes.size(); ++i) {
    text += format_box_line(static_cast<int>(i), boxes[i]);
    text += '\n';
  }
  write_text_atomic(file, text);
}

Sequence load_sequence(const fs::path& dir) {
  const fs::path rgb_dir = dir / "rgb";
  const fs::path depth_dir = dir / "depth";
  const fs::path gt_file = dir / "groundtruth.txt";

  const size_t n_rgb = count_pngs(rgb_dir);
  const size_t n_depth = count_pngs(depth_dir);
  require(n_rgb > 0, ErrorCode::parse, dir.string() + ": no frames in rgb/");
  require(n_rgb == n_depth, ErrorCode::parse,
          dir.string() + ": frame count mismatch (rgb has " + std::to_string(n_rgb) +
              ", depth has " + std::to_string(n_depth) + ")");

  Sequence seq;
  seq.ground_truth = load_boxes(gt_file);
  require(seq.ground_truth.size() == n_rgb, ErrorCode::parse,
          dir.string() + ": groundtruth.txt has " + std::to_string(seq.ground_truth.size()) +
              " lines but rgb/ has " + std::to_string(n_rgb) + " frames");

  seq.frames.reserve(n_rgb);
  for (size_t i = 0; i < n_rgb; ++i) {
    const fs::path rgb_path = rgb_dir / frame_name(static_cast<int>(i));
    const fs::path depth_path = depth_dir / frame_name(static_cast<int>(i));
    require(fs::exists(rgb_path), ErrorCode::parse,
            rgb_path.string() + ": missing (frames must be contiguous from 0)");
    require(fs::exists(depth_path), ErrorCode::parse,
            depth_path.string() + ": missing (frames must be contiguous from 0)");

    Frame f;
    f.rgb = read_png_rgb8(rgb_path);
    f.depth = read_png_gray16(depth_path);
    f.index = static_cast<int>(i);
    require(f.depth.width() == f.rgb.width() && f.depth.height() == f.rgb.height(),
            ErrorCode::parse, depth_path.string() + ": dimensions differ from the rgb frame");
    if (i > 0)
      require(f.rgb.width() == seq.frames.front().width() &&
                  f.rgb.height() == seq.frames.front().height(),
              ErrorCode::parse, rgb_path.string() + ": frame size differs from frame 0");
    for (auto& d : f.depth.data())
      if (d > kMaxDepthMm) d = kMaxDepthMm;
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

void write_text_atomic(const fs::path& file, const std::string& text) {
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    require(out.good(), ErrorCode::io, "cannot create " + tmp.string());
    out << text;
    require(out.good(), ErrorCode::io, "failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, file, ec);
  if (ec) {
    fs::remove(tmp);
    fail(ErrorCode::io, "cannot move temp file into place for " + file.string());
  }
}

namespace {

const char* error_name(FrameError e) {
  switch (e) {
    case FrameError::none: return "none";
    case FrameError::type1: return "I";
    case FrameError::type2: return "II";
    case FrameError::type3: return "III";
  }
  return "none";
}

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

void write_frames_csv(const fs::path& file, std::span<const FrameScore> scores) {
  std::string text = "frame,r,cpe,error_type\n";
  for (size_t i = 0; i < scores.size(); ++i) {
    const FrameScore& s = scores[i];
    text += std::to_string(i) + "," + fmt(s.r) + ",";
    text += s.cpe.has_value() ? fmt(*s.cpe) : "NaN";
    text += std::string(",") + error_name(s.error) + "\n";
  }
  write_text_atomic(file, text);
}

std::string format_summary_table(std::span<const SummaryRow> rows, double rt) {
  std::string text = "sequence,R@" + fmt(rt, "%g") + ",typeI,typeII,typeIII,speed,speed_mean\n";
  for (const auto& row : rows) {
    const SequenceMetrics& m = row.metrics;
    text += row.name + "," + fmt(m.success_rate) + "," + fmt(m.type1) + "," + fmt(m.type2) + "," +
            fmt(m.type3) + ",";
    text += m.speed.has_value() ? fmt(m.speed->max) : "NaN";
    text += ",";
    text += m.speed.has_value() ? fmt(m.speed->mean) : "NaN";
    text += "\n";
  }
  return text;
}

void write_summary_csv(const fs::path& file, std::span<const SummaryRow> rows, double rt) {
  write_text_atomic(file, format_summary_table(rows, rt));
}

void write_curve_csv(const fs::path& file, std::span<const std::pair<double, double>> curve) {
  std::string text = "r_t,R\n";
  for (const auto& [rt, r] : curve) text += fmt(rt) + "," + fmt(r) + "\n";
  write_text_atomic(file, text);
}

}  // namespace rgbdt
