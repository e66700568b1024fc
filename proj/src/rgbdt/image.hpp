#pragma once

#include <cstdint>
#include <vector>

#include "rgbdt/error.hpp"
#include "rgbdt/geometry.hpp"

namespace rgbdt {

/// Row-major interleaved image. Depth maps use T = uint16_t (millimeters,
/// 0 = invalid / no sensor return), RGB uses T = uint8_t with 3 channels.
template <typename T>
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, T fill = T{})
      : width_(width), height_(height), channels_(channels),
        data_(static_cast<size_t>(width) * height * channels, fill) {
    require(width > 0 && height > 0 && channels > 0, ErrorCode::invalid_argument,
            "image dimensions must be positive");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }

  T& at(int x, int y, int c = 0) { return data_[idx(x, y, c)]; }
  const T& at(int x, int y, int c = 0) const { return data_[idx(x, y, c)]; }

  /// Clamped access; reads replicate the border.
  const T& at_clamped(int x, int y, int c = 0) const {
    x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
    y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
    return data_[idx(x, y, c)];
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

 private:
  size_t idx(int x, int y, int c) const {
    return (static_cast<size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<T> data_;
};

using ImageU8 = Image<uint8_t>;
using ImageU16 = Image<uint16_t>;
using ImageF = Image<float>;

/// One RGBD frame. rgb and depth share dimensions; depth is in millimeters
/// with 0 marking invalid pixels and values clamped to kMaxDepthMm on load.
struct Frame {
  ImageU8 rgb;
  ImageU16 depth;
  int index = 0;

  int width() const { return rgb.width(); }
  int height() const { return rgb.height(); }
};

inline constexpr int kMaxDepthMm = 10000;

void validate_frame(const Frame& f);

/// Luminance grayscale (0.299 R + 0.587 G + 0.114 B).
ImageF to_gray(const ImageU8& rgb);

/// RGB channels as float planes (interleaved, 3 channels).
ImageF to_float(const ImageU8& rgb);

/// Bilinear resize of a float image with any channel count.
ImageF resize_bilinear(const ImageF& src, int width, int height);

/// 2x2 box-filter downsample (floor halving), used by the flow pyramid.
ImageF downsample_half(const ImageF& src);

/// Samples src at continuous coordinates with border replication.
float sample_bilinear(const ImageF& src, double x, double y, int c = 0);

}  // namespace rgbdt
