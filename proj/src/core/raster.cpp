#include "msm/raster.hpp"

#include <cmath>
#include <string>

#include "msm/error.hpp"

namespace msm {

PixelPos nearest_pixel(Point2 p) {
  return PixelPos{static_cast<int>(std::floor(p.x + 0.5)),
                  static_cast<int>(std::floor(p.y + 0.5))};
}

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

Rect intersect(const Rect& a, const Rect& b) {
  Rect r{std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1),
         std::min(a.y1, b.y1)};
  if (r.empty()) return Rect{};
  return r;
}

Rect bounding_union(const Rect& a, const Rect& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return Rect{std::min(a.x0, b.x0), std::min(a.y0, b.y0), std::max(a.x1, b.x1),
              std::max(a.y1, b.y1)};
}

namespace {

std::uint8_t mix_channel(std::uint8_t a, std::uint8_t b, double t) {
  const double v = static_cast<double>(a) * (1.0 - t) + static_cast<double>(b) * t;
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

}  // namespace

Rgba lerp_color(Rgba a, Rgba b, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    fail(ErrorCode::invalid_argument, "lerp_color: t must lie in [0, 1]");
  }
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  return Rgba{mix_channel(a.r, b.r, t), mix_channel(a.g, b.g, t), mix_channel(a.b, b.b, t),
              mix_channel(a.a, b.a, t)};
}

RasterImage::RasterImage(int width, int height, Rgba fill)
    : width_(width), height_(height) {
  require(width >= 1 && height >= 1, "image dimensions must be at least 1x1");
  require(width <= kMaxImageSide && height <= kMaxImageSide,
          "image dimensions exceed " + std::to_string(kMaxImageSide));
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

RasterImage::RasterImage(int width, int height, std::vector<Rgba> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  require(width >= 1 && height >= 1, "image dimensions must be at least 1x1");
  require(width <= kMaxImageSide && height <= kMaxImageSide,
          "image dimensions exceed " + std::to_string(kMaxImageSide));
  require(pixels_.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
          "pixel count does not match image dimensions");
}

std::vector<std::uint8_t> RasterImage::to_bytes() const {
  std::vector<std::uint8_t> out;
  out.reserve(pixels_.size() * 4);
  for (const Rgba& p : pixels_) {
    out.push_back(p.r);
    out.push_back(p.g);
    out.push_back(p.b);
    out.push_back(p.a);
  }
  return out;
}

RasterImage RasterImage::from_bytes(int width, int height, std::span<const std::uint8_t> rgba) {
  require(width >= 1 && height >= 1, "image dimensions must be at least 1x1");
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  require(rgba.size() == n * 4, "RGBA buffer size does not match image dimensions");
  std::vector<Rgba> px(n);
  for (std::size_t i = 0; i < n; ++i) {
    px[i] = Rgba{rgba[4 * i], rgba[4 * i + 1], rgba[4 * i + 2], rgba[4 * i + 3]};
  }
  return RasterImage(width, height, std::move(px));
}

void RasterImage::fill_rect(const Rect& r, Rgba c) {
  const Rect clip = intersect(r, bounds());
  for (int y = clip.y0; y < clip.y1; ++y) {
    for (int x = clip.x0; x < clip.x1; ++x) at(x, y) = c;
  }
}

}  // namespace msm
