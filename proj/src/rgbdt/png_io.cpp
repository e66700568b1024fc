#include "rgbdt/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <vector>

#include "rgbdt/error.hpp"

namespace rgbdt {

namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
};

void read_signature(FILE* f, const std::filesystem::path& path) {
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, f) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    fail(ErrorCode::parse, path.string() + ": not a PNG file");
}

}  // namespace

ImageU8 read_png_rgb8(const std::filesystem::path& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  require(f != nullptr, ErrorCode::io, "cannot open " + path.string());
  read_signature(f.get(), path);

  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  require(r.png, ErrorCode::io, "libpng init failed");
  r.info = png_create_info_struct(r.png);
  require(r.info, ErrorCode::io, "libpng init failed");
  if (setjmp(png_jmpbuf(r.png))) fail(ErrorCode::parse, path.string() + ": corrupt PNG data");

  png_init_io(r.png, f.get());
  png_set_sig_bytes(r.png, 8);
  png_read_info(r.png, r.info);

  const int bit_depth = png_get_bit_depth(r.png, r.info);
  const int color_type = png_get_color_type(r.png, r.info);
  require(bit_depth <= 8, ErrorCode::parse,
          path.string() + ": wrong bit depth for an RGB image (expected 8-bit, got " +
              std::to_string(bit_depth) + ")");

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(r.png);
  if (bit_depth < 8) png_set_expand(r.png);
  if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
  png_set_strip_alpha(r.png);
  png_read_update_info(r.png, r.info);

  const int w = static_cast<int>(png_get_image_width(r.png, r.info));
  const int h = static_cast<int>(png_get_image_height(r.png, r.info));
  require(png_get_channels(r.png, r.info) == 3, ErrorCode::parse,
          path.string() + ": expected a 3-channel image after expansion");

  ImageU8 img(w, h, 3);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = &img.at(0, y, 0);
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return img;
}

ImageU16 read_png_gray16(const std::filesystem::path& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  require(f != nullptr, ErrorCode::io, "cannot open " + path.string());
  read_signature(f.get(), path);

  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  require(r.png, ErrorCode::io, "libpng init failed");
  r.info = png_create_info_struct(r.png);
  require(r.info, ErrorCode::io, "libpng init failed");
  if (setjmp(png_jmpbuf(r.png))) fail(ErrorCode::parse, path.string() + ": corrupt PNG data");

  png_init_io(r.png, f.get());
  png_set_sig_bytes(r.png, 8);
  png_read_info(r.png, r.info);

  const int bit_depth = png_get_bit_depth(r.png, r.info);
  const int color_type = png_get_color_type(r.png, r.info);
  require(bit_depth == 16 && color_type == PNG_COLOR_TYPE_GRAY, ErrorCode::parse,
          path.string() + ": wrong bit depth for a depth map (expected 16-bit grayscale, got " +
              std::to_string(bit_depth) + "-bit color type " + std::to_string(color_type) + ")");

  const int w = static_cast<int>(png_get_image_width(r.png, r.info));
  const int h = static_cast<int>(png_get_image_height(r.png, r.info));

  // PNG 16-bit samples are big-endian in the stream; assemble by hand so
  // the result does not depend on host byte order.
  std::vector<unsigned char> raw(static_cast<size_t>(w) * h * 2);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = raw.data() + static_cast<size_t>(y) * w * 2;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);

  ImageU16 img(w, h, 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const size_t i = (static_cast<size_t>(y) * w + x) * 2;
      img.at(x, y) = static_cast<uint16_t>((raw[i] << 8) | raw[i + 1]);
    }
  return img;
}

namespace {

void atomic_rename(const std::filesystem::path& tmp, const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    fail(ErrorCode::io, "cannot move temp file into place for " + path.string());
  }
}

}  // namespace

void write_png_rgb8(const ImageU8& img, const std::filesystem::path& path) {
  require(img.channels() == 3, ErrorCode::invalid_argument, "write_png_rgb8 expects 3 channels");
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    FilePtr f(std::fopen(tmp.c_str(), "wb"));
    require(f != nullptr, ErrorCode::io, "cannot create " + tmp.string());

    PngWriter w;
    w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    require(w.png, ErrorCode::io, "libpng init failed");
    w.info = png_create_info_struct(w.png);
    require(w.info, ErrorCode::io, "libpng init failed");
    if (setjmp(png_jmpbuf(w.png))) fail(ErrorCode::io, "PNG write failed for " + path.string());

    png_init_io(w.png, f.get());
    png_set_IHDR(w.png, w.info, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    for (int y = 0; y < img.height(); ++y)
      png_write_row(w.png, const_cast<png_bytep>(&img.at(0, y, 0)));
    png_write_end(w.png, nullptr);
  }
  atomic_rename(tmp, path);
}

void write_png_gray16(const ImageU16& img, const std::filesystem::path& path) {
  require(img.channels() == 1, ErrorCode::invalid_argument, "write_png_gray16 expects 1 channel");
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    FilePtr f(std::fopen(tmp.c_str(), "wb"));
    require(f != nullptr, ErrorCode::io, "cannot create " + tmp.string());

    PngWriter w;
    w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    require(w.png, ErrorCode::io, "libpng init failed");
    w.info = png_create_info_struct(w.png);
    require(w.info, ErrorCode::io, "libpng init failed");
    if (setjmp(png_jmpbuf(w.png))) fail(ErrorCode::io, "PNG write failed for " + path.string());

    png_init_io(w.png, f.get());
    png_set_IHDR(w.png, w.info, img.width(), img.height(), 16, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);

    std::vector<unsigned char> row(static_cast<size_t>(img.width()) * 2);
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        const uint16_t v = img.at(x, y);
        row[2 * x] = static_cast<unsigned char>(v >> 8);
        row[2 * x + 1] = static_cast<unsigned char>(v & 0xff);
      }
      png_write_row(w.png, row.data());
    }
    png_write_end(w.png, nullptr);
  }
  atomic_rename(tmp, path);
}

}  // namespace rgbdt
