#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "msm/distance.hpp"
#include "msm/error.hpp"
#include "msm/regions.hpp"
#include "oracles.hpp"

using namespace msm;

namespace {

const Rgba kRed{220, 30, 30, 255}, kBlue{20, 40, 210, 255}, kWhite{250, 250, 250, 255};

std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "msm_unit";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::vector<char> file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void check_partition(const RegionMap& map) {
  std::size_t total = 0;
  for (const Region& r : map.regions()) {
    CHECK(!r.area.empty());
    CHECK(is_subset(r.boundary, r.area));
    CHECK(is_subset(r.boundary, r.dilated_boundary));
    total += r.area.size();
    r.area.for_each([&](int x, int y) { REQUIRE(map.label_at(x, y) == r.id); });
  }
  CHECK(total == static_cast<std::size_t>(map.width()) * map.height());
}

}  // namespace

TEST_CASE("flat_fill_regions examples") {
  SUBCASE("uniform image") {
    const RegionMap m = flat_fill_regions(RasterImage(20, 10, kRed));
    CHECK(m.size() == 1);
    CHECK(m.region(0).area.size() == 200);
    CHECK(m.region(0).color == kRed);
  }
  SUBCASE("left and right halves") {
    RasterImage img(20, 10, kRed);
    img.fill_rect(Rect{10, 0, 20, 10}, kBlue);
    const RegionMap m = flat_fill_regions(img);
    REQUIRE(m.size() == 2);
    CHECK(m.region(0).area.size() == 100);
    CHECK(m.region(1).color == kBlue);
  }
  SUBCASE("same color split by a stripe gives distinct regions") {
    RasterImage img(30, 10, kRed);
    img.fill_rect(Rect{14, 0, 16, 10}, kWhite);
    const RegionMap m = flat_fill_regions(img);
    std::vector<int> values;
    for (const Rgba& p : img.pixels()) values.push_back(p == kRed ? 0 : 1);
    const std::vector<int> ref = oracle::components(values, 30, 10);
    CHECK(m.size() == 3);
    for (std::size_t i = 0; i < ref.size(); ++i) REQUIRE(m.labels()[i] == ref[i]);
  }
}

TEST_CASE("flat_fill_regions matches a flood-fill oracle on random paintings and is idempotent") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int w = 8 + static_cast<int>(rng() % 60), h = 8 + static_cast<int>(rng() % 60);
    const std::vector<int> labels = fixtures::random_partition(rng, w, h, 6);
    const RasterImage img = fixtures::paint(labels, w, h);
    const RegionMap m = flat_fill_regions(img);
    const std::vector<int> ref = oracle::components(labels, w, h);
    for (std::size_t i = 0; i < ref.size(); ++i) REQUIRE(m.labels()[i] == ref[i]);
    check_partition(m);
    const RegionMap again = flat_fill_regions(m.render());
    CHECK(std::equal(again.labels().begin(), again.labels().end(), m.labels().begin()));
    for (const Region& r : m.regions()) {
      CHECK(r.dilated_boundary == dilate(r.boundary, 10.0));
      CHECK(oracle::same(oracle::boundary(oracle::from_points(r.area)), r.boundary));
    }
  }
}

TEST_CASE("region_boundary examples") {
  SUBCASE("single pixel region") {
    RasterImage img(5, 5, kRed);
    img.set(2, 2, kBlue);
    const RegionMap m = flat_fill_regions(img);
    const Region& r = m.region(m.label_at(2, 2));
    CHECK(region_boundary(r, m).size() == 1);
  }
  SUBCASE("10x10 square has 36 perimeter pixels") {
    RasterImage img(30, 30, kRed);
    img.fill_rect(Rect{10, 10, 20, 20}, kBlue);
    const RegionMap m = flat_fill_regions(img);
    const Region& r = m.region(m.label_at(15, 15));
    CHECK(region_boundary(r, m).size() == 36);
    CHECK(oracle::boundary(oracle::from_points(r.area)).count() == 36);
  }
  SUBCASE("full 8x8 region has 28 border pixels") {
    const RegionMap m = flat_fill_regions(RasterImage(8, 8, kRed));
    CHECK(region_boundary(m.region(0), m).size() == 28);
  }
}

TEST_CASE("meanshift_regions on noiseless flat input equals flat fill") {
  RasterImage img(40, 30, kRed);
  img.fill_rect(Rect{0, 15, 40, 30}, kBlue);
  img.fill_rect(Rect{5, 3, 14, 11}, kWhite);
  const RegionMap a = meanshift_regions(img);
  const RegionMap b = flat_fill_regions(img);
  CHECK(std::equal(a.labels().begin(), a.labels().end(), b.labels().begin(), b.labels().end()));
  check_partition(a);
}

TEST_CASE("meanshift_regions recovers two noisy halves") {
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> noise(-3, 3);
  RasterImage img(48, 32);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 48; ++x) {
      const Rgba base = x < 24 ? Rgba{180, 60, 60, 255} : Rgba{60, 70, 190, 255};
      const auto jitter = [&](std::uint8_t v) { return static_cast<std::uint8_t>(std::clamp(v + noise(rng), 0, 255)); };
      img.set(x, y, Rgba{jitter(base.r), jitter(base.g), jitter(base.b), 255});
    }
  }
  const RegionMap m = meanshift_regions(img);
  CHECK(m.size() == 2);
  std::size_t agree = 0;
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 48; ++x) agree += (m.label_at(x, y) == (x < 24 ? 0 : 1)) ? 1 : 0;
  }
  CHECK(static_cast<double>(agree) >= 0.99 * 48 * 32);
  check_partition(m);
}

TEST_CASE("meanshift_regions merges small components and handles 1x1") {
  RasterImage img(32, 32, kRed);
  img.fill_rect(Rect{10, 10, 13, 13}, Rgba{230, 40, 40, 255});  // 9 px, a separate mode below min_region
  img.fill_rect(Rect{20, 20, 24, 24}, kBlue);  // 16 px island
  const RegionMap m = meanshift_regions(img, MeanShiftParams{8, 16, 64, 20, 0.01});
  CHECK(m.size() == 1);
  check_partition(m);
  CHECK(meanshift_regions(RasterImage(1, 1, kBlue)).size() == 1);
  CHECK_THROWS_AS(meanshift_regions(img, MeanShiftParams{0, 16, 64, 20, 0.01}), Error);
}

TEST_CASE("sidecar round trip is exact and byte-deterministic") {
  std::mt19937 rng(8);
  const std::vector<int> labels = fixtures::random_partition(rng, 50, 40, 7);
  const RegionMap m = flat_fill_regions(fixtures::paint(labels, 50, 40));
  save_region_map(m, temp_path("a.labels.png"), temp_path("a.regions.json"));
  save_region_map(m, temp_path("b.labels.png"), temp_path("b.regions.json"));
  CHECK(file_bytes(temp_path("a.labels.png")) == file_bytes(temp_path("b.labels.png")));
  CHECK(file_bytes(temp_path("a.regions.json")) == file_bytes(temp_path("b.regions.json")));
  const RegionMap back = load_region_map(temp_path("a.labels.png"), temp_path("a.regions.json"));
  CHECK(std::equal(back.labels().begin(), back.labels().end(), m.labels().begin(), m.labels().end()));
  for (const Region& r : m.regions()) {
    CHECK(back.region(r.id).color == r.color);
    CHECK(back.region(r.id).dilated_boundary == r.dilated_boundary);
  }
}

TEST_CASE("sidecar loader rejects inconsistent files") {
  RasterImage img(10, 10, kRed);
  img.fill_rect(Rect{0, 0, 5, 10}, kBlue);
  const RegionMap m = flat_fill_regions(img);
  save_region_map(m, temp_path("c.labels.png"), temp_path("c.regions.json"));
  std::ofstream(temp_path("bad.regions.json")) << "{\"width\": 10, \"height\": 10, \"regions\": []}";
  try {
    load_region_map(temp_path("c.labels.png"), temp_path("bad.regions.json"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::input);
  }
  std::ofstream(temp_path("broken.regions.json")) << "{ nope";
  CHECK_THROWS_AS(load_region_map(temp_path("c.labels.png"), temp_path("broken.regions.json")), Error);
}
