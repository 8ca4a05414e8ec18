#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "msm/raster.hpp"

namespace msm {

/// Decodes any 8/16-bit PNG into straight-alpha RGBA8. Throws ErrorCode::input.
RasterImage load_png(const std::filesystem::path& path);

/// Writes RGBA8 with fixed zlib settings, so equal images give equal bytes.
void save_png(const std::filesystem::path& path, const RasterImage& image);

struct Gray16Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> values;
};

Gray16Image load_png_gray16(const std::filesystem::path& path);
void save_png_gray16(const std::filesystem::path& path, const Gray16Image& image);

}  // namespace msm
