#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace msm {

inline constexpr int kMaxImageSide = 8192;

/// Straight-alpha 8-bit color. Alpha is blended like any other channel.
struct Rgba {
  std::uint8_t r = 0, g = 0, b = 0, a = 255;

  friend bool operator==(const Rgba&, const Rgba&) = default;

  std::uint8_t operator[](int channel) const {
    switch (channel) {
      case 0: return r;
      case 1: return g;
      case 2: return b;
      default: return a;
    }
  }
};

struct PixelPos {
  int x = 0;
  int y = 0;
  friend bool operator==(const PixelPos&, const PixelPos&) = default;
};

/// Continuous canvas position; pixel (x, y) has its center at (x, y).
struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Nearest pixel center, halves rounded up.
PixelPos nearest_pixel(Point2 p);

double distance(Point2 a, Point2 b);

/// Half-open integer rectangle [x0, x1) x [y0, y1).
struct Rect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  bool empty() const { return x1 <= x0 || y1 <= y0; }
  int width() const { return std::max(0, x1 - x0); }
  int height() const { return std::max(0, y1 - y0); }
  bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

Rect intersect(const Rect& a, const Rect& b);
Rect bounding_union(const Rect& a, const Rect& b);

/// Per channel round(a*(1-t) + b*t), halves rounded up. Throws on t outside [0, 1].
Rgba lerp_color(Rgba a, Rgba b, double t);

/// Row-major RGBA canvas. Single writer; copies are independent snapshots.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, Rgba fill = Rgba{0, 0, 0, 0});
  RasterImage(int width, int height, std::vector<Rgba> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  Rect bounds() const { return Rect{0, 0, width_, height_}; }
  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  Rgba at(int x, int y) const { return pixels_[index(x, y)]; }
  Rgba& at(int x, int y) { return pixels_[index(x, y)]; }
  void set(int x, int y, Rgba c) { pixels_[index(x, y)] = c; }

  std::span<const Rgba> pixels() const { return pixels_; }
  std::span<Rgba> pixels() { return pixels_; }

  /// Packed RGBA bytes, row-major.
  std::vector<std::uint8_t> to_bytes() const;
  static RasterImage from_bytes(int width, int height, std::span<const std::uint8_t> rgba);

  void fill_rect(const Rect& r, Rgba c);

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Rgba> pixels_;
};

}  // namespace msm
