#include "msm/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <string>

#include "msm/error.hpp"

namespace msm {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode, ErrorCode code) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  if (!f) fail(code, "cannot open '" + path.string() + "'");
  return f;
}

[[noreturn]] void png_error_handler(png_structp png, png_const_charp message) {
  auto* buffer = static_cast<std::string*>(png_get_error_ptr(png));
  if (buffer != nullptr) *buffer = message;
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

// Decoded rows plus the source geometry; transforms leave either 8-bit RGBA or
// 16-bit gray depending on `want_gray16`.
struct Decoded {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;
  int bit_depth = 8;
  int color_type = 0;
};

Decoded decode(const std::filesystem::path& path, bool want_gray16) {
  FilePtr file = open_file(path, "rb", ErrorCode::input);
  std::uint8_t sig[8] = {};
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    fail(ErrorCode::input, "'" + path.string() + "' is not a PNG file");
  }
  std::string message;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, png_error_handler, png_warning_handler);
  if (png == nullptr) fail(ErrorCode::internal, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  Decoded out;
  // Rows are heap storage owned by `out`; nothing with a destructor is created
  // between setjmp and the decode calls.
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorCode::input, "failed to decode '" + path.string() + "': " + message);
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.bit_depth = png_get_bit_depth(png, info);
  out.color_type = png_get_color_type(png, info);
  if (out.width < 1 || out.height < 1 || out.width > kMaxImageSide || out.height > kMaxImageSide) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorCode::input, "'" + path.string() + "' has unsupported dimensions");
  }
  if (want_gray16) {
    if (out.color_type != PNG_COLOR_TYPE_GRAY || out.bit_depth != 16) {
      png_destroy_read_struct(&png, &info, nullptr);
      fail(ErrorCode::input, "'" + path.string() + "' is not a 16-bit grayscale PNG");
    }
  } else {
    if (out.bit_depth == 16) png_set_strip_16(png);
    if (out.color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (out.color_type == PNG_COLOR_TYPE_GRAY && out.bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (out.color_type == PNG_COLOR_TYPE_GRAY || out.color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
      png_set_gray_to_rgb(png);
    }
    png_set_filler(png, 0xFF, PNG_FILLER_AFTER);
  }
  png_read_update_info(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  out.data.resize(stride * static_cast<std::size_t>(out.height));
  rows.resize(static_cast<std::size_t>(out.height));
  for (int y = 0; y < out.height; ++y) rows[static_cast<std::size_t>(y)] = &out.data[stride * y];
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void encode(const std::filesystem::path& path, int width, int height, int bit_depth, int color_type,
            const std::vector<png_bytep>& rows) {
  FilePtr file = open_file(path, "wb", ErrorCode::io);
  std::string message;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, png_error_handler, png_warning_handler);
  if (png == nullptr) fail(ErrorCode::internal, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorCode::io, "failed to encode '" + path.string() + "': " + message);
  }
  png_init_io(png, file.get());
  png_set_compression_level(png, 6);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_SUB | PNG_FILTER_UP | PNG_FILTER_PAETH);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

RasterImage load_png(const std::filesystem::path& path) {
  const Decoded d = decode(path, false);
  return RasterImage::from_bytes(d.width, d.height, d.data);
}

void save_png(const std::filesystem::path& path, const RasterImage& image) {
  std::vector<std::uint8_t> bytes = image.to_bytes();
  const std::size_t stride = static_cast<std::size_t>(image.width()) * 4;
  std::vector<png_bytep> rows(static_cast<std::size_t>(image.height()));
  for (int y = 0; y < image.height(); ++y) rows[static_cast<std::size_t>(y)] = &bytes[stride * y];
  encode(path, image.width(), image.height(), 8, PNG_COLOR_TYPE_RGBA, rows);
}

Gray16Image load_png_gray16(const std::filesystem::path& path) {
  const Decoded d = decode(path, true);
  Gray16Image out{d.width, d.height, {}};
  out.values.resize(static_cast<std::size_t>(d.width) * d.height);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = static_cast<std::uint16_t>((d.data[2 * i] << 8) | d.data[2 * i + 1]);
  }
  return out;
}

void save_png_gray16(const std::filesystem::path& path, const Gray16Image& image) {
  require(image.width >= 1 && image.height >= 1 &&
              image.values.size() == static_cast<std::size_t>(image.width) * image.height,
          "gray16 image size mismatch");
  // PNG stores 16-bit samples big-endian.
  std::vector<std::uint8_t> bytes(image.values.size() * 2);
  for (std::size_t i = 0; i < image.values.size(); ++i) {
    bytes[2 * i] = static_cast<std::uint8_t>(image.values[i] >> 8);
    bytes[2 * i + 1] = static_cast<std::uint8_t>(image.values[i] & 0xFF);
  }
  const std::size_t stride = static_cast<std::size_t>(image.width) * 2;
  std::vector<png_bytep> rows(static_cast<std::size_t>(image.height));
  for (int y = 0; y < image.height; ++y) rows[static_cast<std::size_t>(y)] = &bytes[stride * y];
  encode(path, image.width, image.height, 16, PNG_COLOR_TYPE_GRAY, rows);
}

}  // namespace msm
