#include "rgbdt/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <variant>

#include "rgbdt/error.hpp"

namespace rgbdt {

bool mode_uses_depth(TrackMode m) { return m == TrackMode::rgbd || m == TrackMode::rgbd_occ; }

bool mode_uses_occlusion(TrackMode m) { return m == TrackMode::rgb_occ || m == TrackMode::rgbd_occ; }

TrackMode parse_mode(std::string_view name) {
  std::string s(name);
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "rgb") return TrackMode::rgb;
  if (s == "rgbd") return TrackMode::rgbd;
  if (s == "rgbocc") return TrackMode::rgb_occ;
  if (s == "rgbdocc") return TrackMode::rgbd_occ;
  fail(ErrorCode::invalid_argument, "unknown tracking mode: " + std::string(name));
}

std::string mode_name(TrackMode m) {
  switch (m) {
    case TrackMode::rgb: return "rgb";
    case TrackMode::rgbd: return "rgbd";
    case TrackMode::rgb_occ: return "rgbocc";
    case TrackMode::rgbd_occ: return "rgbdocc";
  }
  return "rgb";
}

namespace {

using FieldRef = std::variant<double TrackerConfig::*, int TrackerConfig::*, uint64_t TrackerConfig::*>;

struct FieldEntry {
  const char* name;
  FieldRef ref;
};

const FieldEntry kFields[] = {
    {"alpha", &TrackerConfig::alpha},
    {"occ_enter_threshold", &TrackerConfig::occ_enter_threshold},
    {"tau_accept", &TrackerConfig::tau_accept},
    {"tau_detect", &TrackerConfig::tau_detect},
    {"cell_size", &TrackerConfig::cell_size},
    {"orientation_bins", &TrackerConfig::orientation_bins},
    {"block_cap", &TrackerConfig::block_cap},
    {"min_cells", &TrackerConfig::min_cells},
    {"max_cells", &TrackerConfig::max_cells},
    {"scale_step", &TrackerConfig::scale_step},
    {"top_k", &TrackerConfig::top_k},
    {"svm_c", &TrackerConfig::svm_c},
    {"svm_epochs", &TrackerConfig::svm_epochs},
    {"pos_capacity", &TrackerConfig::pos_capacity},
    {"neg_capacity", &TrackerConfig::neg_capacity},
    {"init_negatives", &TrackerConfig::init_negatives},
    {"init_negative_min_dist", &TrackerConfig::init_negative_min_dist},
    {"hard_neg_per_frame", &TrackerConfig::hard_neg_per_frame},
    {"hard_neg_margin", &TrackerConfig::hard_neg_margin},
    {"hard_neg_max_overlap", &TrackerConfig::hard_neg_max_overlap},
    {"detect_pool", &TrackerConfig::detect_pool},
    {"bin_width_mm", &TrackerConfig::bin_width_mm},
    {"update_rate", &TrackerConfig::update_rate},
    {"sigma_floor_mm", &TrackerConfig::sigma_floor_mm},
    {"gate_sigma_mult", &TrackerConfig::gate_sigma_mult},
    {"gate_slack_mm", &TrackerConfig::gate_slack_mm},
    {"recenter_expand", &TrackerConfig::recenter_expand},
    {"max_depth_mm", &TrackerConfig::max_depth_mm},
    {"flow_grid", &TrackerConfig::flow_grid},
    {"flow_levels", &TrackerConfig::flow_levels},
    {"flow_win_radius", &TrackerConfig::flow_win_radius},
    {"flow_iterations", &TrackerConfig::flow_iterations},
    {"flow_fb_thresh_px", &TrackerConfig::flow_fb_thresh_px},
    {"flow_min_survival", &TrackerConfig::flow_min_survival},
    {"flow_ncc_min", &TrackerConfig::flow_ncc_min},
    {"flow_scale_clamp", &TrackerConfig::flow_scale_clamp},
    {"search_scale", &TrackerConfig::search_scale},
    {"recover_area_ratio", &TrackerConfig::recover_area_ratio},
    {"recover_max_occ_overlap", &TrackerConfig::recover_max_occ_overlap},
    {"depth_seg_thresh_mm", &TrackerConfig::depth_seg_thresh_mm},
    {"rgb_seg_thresh", &TrackerConfig::rgb_seg_thresh},
    {"seg_min_area_ratio", &TrackerConfig::seg_min_area_ratio},
    {"seed", &TrackerConfig::seed},
};

const FieldEntry* find_field(std::string_view key) {
  for (const auto& f : kFields)
    if (key == f.name) return &f;
  return nullptr;
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void TrackerConfig::set(std::string_view key, std::string_view value) {
  const FieldEntry* f = find_field(key);
  require(f != nullptr, ErrorCode::parse, "unknown config key: " + std::string(key));
  const std::string v = trim(value);
  require(!v.empty(), ErrorCode::parse, "empty value for config key: " + std::string(key));
  try {
    std::visit(
        [&](auto member) {
          using T = std::remove_cvref_t<decltype(this->*member)>;
          size_t pos = 0;
          if constexpr (std::is_same_v<T, double>) {
            this->*member = std::stod(v, &pos);
          } else if constexpr (std::is_same_v<T, int>) {
            this->*member = std::stoi(v, &pos);
          } else {
            this->*member = std::stoull(v, &pos);
          }
          if (pos != v.size()) throw std::invalid_argument("trailing characters");
        },
        f->ref);
  } catch (const std::exception&) {
    fail(ErrorCode::parse, "bad value '" + v + "' for config key " + std::string(key));
  }
}

std::string TrackerConfig::get(std::string_view key) const {
  const FieldEntry* f = find_field(key);
  require(f != nullptr, ErrorCode::parse, "unknown config key: " + std::string(key));
  return std::visit(
      [&](auto member) -> std::string {
        using T = std::remove_cvref_t<decltype(this->*member)>;
        if constexpr (std::is_same_v<T, double>) return format_double(this->*member);
        else return std::to_string(this->*member);
      },
      f->ref);
}

std::vector<std::string> TrackerConfig::keys() const {
  std::vector<std::string> out;
  for (const auto& f : kFields) out.emplace_back(f.name);
  return out;
}

std::string TrackerConfig::serialize() const {
  std::ostringstream os;
  for (const auto& f : kFields) os << f.name << "=" << get(f.name) << "\n";
  return os.str();
}

TrackerConfig TrackerConfig::parse(std::string_view text) {
  TrackerConfig cfg;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line = trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty() || line[0] == '#') continue;
    const size_t eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::parse,
            "config line " + std::to_string(line_no) + ": expected key=value");
    cfg.set(trim(std::string_view(line).substr(0, eq)), std::string_view(line).substr(eq + 1));
    if (end == text.size()) break;
  }
  return cfg;
}

TrackerConfig TrackerConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open config file: " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str());
}

void TrackerConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  require(out.good(), ErrorCode::io, "cannot write config file: " + path.string());
  out << serialize();
  require(out.good(), ErrorCode::io, "failed writing config file: " + path.string());
}

}  // namespace rgbdt
