#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "msm/error.hpp"
#include "msm/png_io.hpp"
#include "msm/raster.hpp"

using namespace msm;

namespace {

std::uint8_t scalar_lerp(std::uint8_t a, std::uint8_t b, double t) {
  return static_cast<std::uint8_t>(std::floor(a * (1.0 - t) + b * t + 0.5));
}

std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "msm_unit";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::vector<char> file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("lerp_color endpoints and midpoint") {
  const Rgba black{0, 0, 0, 255}, white{255, 255, 255, 255};
  CHECK(lerp_color(black, white, 0.0) == black);
  CHECK(lerp_color(black, white, 1.0) == white);
  CHECK(lerp_color(black, white, 0.5) == Rgba{128, 128, 128, 255});
}

TEST_CASE("lerp_color matches a per-channel scalar oracle and is monotone in t") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> ch(0, 255);
  for (int i = 0; i < 2000; ++i) {
    const Rgba a{static_cast<std::uint8_t>(ch(rng)), static_cast<std::uint8_t>(ch(rng)),
                 static_cast<std::uint8_t>(ch(rng)), static_cast<std::uint8_t>(ch(rng))};
    const Rgba b{static_cast<std::uint8_t>(ch(rng)), static_cast<std::uint8_t>(ch(rng)),
                 static_cast<std::uint8_t>(ch(rng)), static_cast<std::uint8_t>(ch(rng))};
    const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const Rgba c = lerp_color(a, b, t);
    for (int k = 0; k < 4; ++k) REQUIRE(c[k] == scalar_lerp(a[k], b[k], t));
    const Rgba d = lerp_color(a, b, std::min(1.0, t + 0.1));
    for (int k = 0; k < 4; ++k) {
      if (b[k] >= a[k]) CHECK(d[k] >= c[k]);
      else CHECK(d[k] <= c[k]);
    }
  }
}

TEST_CASE("lerp_color rejects t outside [0, 1]") {
  CHECK_THROWS_AS(lerp_color(Rgba{}, Rgba{}, -0.01), Error);
  CHECK_THROWS_AS(lerp_color(Rgba{}, Rgba{}, 1.01), Error);
  CHECK_THROWS_AS(lerp_color(Rgba{}, Rgba{}, std::nan("")), Error);
}

TEST_CASE("RasterImage validates its size") {
  CHECK_THROWS_AS(RasterImage(0, 4), Error);
  CHECK_THROWS_AS(RasterImage(4, 0), Error);
  CHECK_THROWS_AS(RasterImage(kMaxImageSide + 1, 1), Error);
  RasterImage img(3, 2, Rgba{1, 2, 3, 4});
  CHECK(img.pixels().size() == 6);
  CHECK(img.to_bytes().size() == 24);
  const std::vector<std::uint8_t> short_bytes(5);
  CHECK_THROWS_AS(RasterImage::from_bytes(3, 2, short_bytes), Error);
}

TEST_CASE("nearest_pixel rounds halves up") {
  CHECK(nearest_pixel(Point2{1.5, 2.49}) == PixelPos{2, 2});
  CHECK(nearest_pixel(Point2{-0.5, -0.51}) == PixelPos{0, -1});
}

TEST_CASE("PNG round trip is lossless and byte-deterministic") {
  std::mt19937 rng(3);
  RasterImage img(37, 21);
  for (Rgba& p : img.pixels()) {
    p = Rgba{static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()),
             static_cast<std::uint8_t>(rng())};
  }
  const auto a = temp_path("rt_a.png"), b = temp_path("rt_b.png");
  save_png(a, img);
  save_png(b, load_png(a));
  CHECK(load_png(a) == img);
  CHECK(file_bytes(a) == file_bytes(b));
}

TEST_CASE("16-bit gray PNG round trip") {
  Gray16Image g{5, 3, {}};
  for (int i = 0; i < 15; ++i) g.values.push_back(static_cast<std::uint16_t>(i * 4099));
  const auto p = temp_path("g16.png");
  save_png_gray16(p, g);
  const Gray16Image back = load_png_gray16(p);
  CHECK(back.width == 5);
  CHECK(back.height == 3);
  CHECK(back.values == g.values);
}

TEST_CASE("unreadable or non-PNG input is an input error") {
  const auto p = temp_path("not_png.png");
  std::ofstream(p) << "hello";
  try {
    load_png(p);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::input);
  }
  CHECK_THROWS_AS(load_png(temp_path("missing.png")), Error);
}
