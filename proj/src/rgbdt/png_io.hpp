#pragma once

#include <filesystem>

#include "rgbdt/image.hpp"

namespace rgbdt {

/// 8-bit color PNG (palette/gray/alpha inputs are expanded to RGB;
/// 16-bit files are rejected).
ImageU8 read_png_rgb8(const std::filesystem::path& path);

/// 16-bit single-channel PNG holding depth in millimeters.
ImageU16 read_png_gray16(const std::filesystem::path& path);

/// Writers are whole-file atomic (temp file + rename).
void write_png_rgb8(const ImageU8& img, const std::filesystem::path& path);
void write_png_gray16(const ImageU16& img, const std::filesystem::path& path);

}  // namespace rgbdt
