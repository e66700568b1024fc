#include "rgbdt/image.hpp"

#include <cmath>

namespace rgbdt {

void validate_frame(const Frame& f) {
  require(!f.rgb.empty() && f.rgb.channels() == 3, ErrorCode::invalid_argument,
          "frame rgb must be non-empty with 3 channels");
  require(f.depth.width() == f.rgb.width() && f.depth.height() == f.rgb.height(),
          ErrorCode::invalid_argument, "rgb and depth dimensions differ");
  require(f.index >= 0, ErrorCode::invalid_argument, "frame index must be >= 0");
}

ImageF to_gray(const ImageU8& rgb) {
  ImageF out(rgb.width(), rgb.height(), 1);
  for (int y = 0; y < rgb.height(); ++y)
    for (int x = 0; x < rgb.width(); ++x)
      out.at(x, y) = 0.299f * rgb.at(x, y, 0) + 0.587f * rgb.at(x, y, 1) +
                     0.114f * rgb.at(x, y, 2);
  return out;
}

ImageF to_float(const ImageU8& rgb) {
  ImageF out(rgb.width(), rgb.height(), rgb.channels());
  for (int y = 0; y < rgb.height(); ++y)
    for (int x = 0; x < rgb.width(); ++x)
      for (int c = 0; c < rgb.channels(); ++c) out.at(x, y, c) = rgb.at(x, y, c);
  return out;
}

float sample_bilinear(const ImageF& src, double x, double y, int c) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  const double v00 = src.at_clamped(x0, y0, c);
  const double v10 = src.at_clamped(x0 + 1, y0, c);
  const double v01 = src.at_clamped(x0, y0 + 1, c);
  const double v11 = src.at_clamped(x0 + 1, y0 + 1, c);
  return static_cast<float>((v00 * (1.0 - fx) + v10 * fx) * (1.0 - fy) +
                            (v01 * (1.0 - fx) + v11 * fx) * fy);
}

ImageF resize_bilinear(const ImageF& src, int width, int height) {
  require(width > 0 && height > 0, ErrorCode::invalid_argument, "resize target must be positive");
  ImageF out(width, height, src.channels());
  const double sx = static_cast<double>(src.width()) / width;
  const double sy = static_cast<double>(src.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double srcy = (y + 0.5) * sy - 0.5;
    for (int x = 0; x < width; ++x) {
      const double srcx = (x + 0.5) * sx - 0.5;
      for (int c = 0; c < src.channels(); ++c)
        out.at(x, y, c) = sample_bilinear(src, srcx, srcy, c);
    }
  }
  return out;
}

ImageF downsample_half(const ImageF& src) {
  const int w = std::max(1, src.width() / 2);
  const int h = std::max(1, src.height() / 2);
  ImageF out(w, h, src.channels());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < src.channels(); ++c) {
        const float sum = src.at_clamped(2 * x, 2 * y, c) + src.at_clamped(2 * x + 1, 2 * y, c) +
                          src.at_clamped(2 * x, 2 * y + 1, c) +
                          src.at_clamped(2 * x + 1, 2 * y + 1, c);
        out.at(x, y, c) = 0.25f * sum;
      }
  return out;
}

}  // namespace rgbdt
