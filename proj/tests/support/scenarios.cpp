#include "scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fixtures.hpp"

namespace scenarios {

namespace {

using msm::Point2;
using msm::Rgba;

// A 110 px footprint spans a third of a 256 px canvas; 60 px keeps the brush
// at the scale of the regions being painted.
const nlohmann::json kDeskParams = {{"stroke_width", 60}};

template <class F>
std::vector<int> grid(int w, int h, F&& label) {
  std::vector<int> out(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out[static_cast<std::size_t>(y) * w + x] = label(x, y);
  return out;
}

Scenario boundary_following() {
  Scenario s;
  s.name = "boundary_following";
  s.description = "Stroke drawn down the edge between two regions; both are meant to blend.";
  s.labels = grid(256, 256, [](int x, int) { return x < 128 ? 0 : 1; });
  s.palette = {Rgba{214, 72, 54, 255}, Rgba{58, 96, 196, 255}};
  s.strokes = {fixtures::line_stroke({124, 24}, {128, 232}, 4)};
  s.intended_labels = {0, 1};
  s.params = kDeskParams;
  return s;
}

// Square subject inside a background frame; the stroke enters from the frame
// and ends deep inside the square.
Scenario into_region() {
  Scenario s;
  s.name = "into_region";
  s.description = "Stroke that starts in the background and moves deep into a subject region.";
  s.labels = grid(256, 256, [](int x, int y) { return x >= 24 && x < 232 && y >= 24 && y < 232 ? 1 : 0; });
  s.palette = {Rgba{236, 220, 180, 255}, Rgba{120, 168, 72, 255}};
  s.strokes = {fixtures::path_stroke({{6, 128}, {150, 128}, {150, 180}}, 4)};
  s.intended_labels = {1};
  s.params = kDeskParams;
  return s;
}

// Capsule subject around the stroke; a narrow finger of the background reaches
// down to within 18 px of the stroke near its end.
Scenario crossing_unwanted() {
  Scenario s;
  s.name = "crossing_unwanted";
  s.description = "Brush path that sweeps past a narrow protrusion of an unwanted region.";
  s.labels = grid(256, 256, [](int x, int y) {
    if (x >= 166 && x < 174 && y < 110) return 0;
    const double px = std::clamp(static_cast<double>(x), 73.0, 183.0);
    return std::hypot(x - px, y - 128.0) <= 32.0 ? 1 : 0;
  });
  s.palette = {Rgba{240, 200, 40, 255}, Rgba{90, 140, 200, 255}};
  s.strokes = {fixtures::line_stroke({73, 128}, {183, 128}, 4)};
  s.intended_labels = {1};
  s.unwanted_label = 0;
  s.params = kDeskParams;
  return s;
}

// Four quadrants; the stroke runs along the diagonal through the junction, so
// the two quadrants it crosses touch only at a corner.
Scenario ts_discontinuity() {
  Scenario s;
  s.name = "ts_discontinuity";
  s.description = "Diagonal stroke through a four-region junction.";
  s.labels = grid(256, 256, [](int x, int y) { return (x < 128 ? 0 : 1) + (y < 128 ? 0 : 2); });
  s.palette = {Rgba{200, 80, 120, 255}, Rgba{250, 240, 200, 255}, Rgba{60, 150, 140, 255}, Rgba{80, 60, 160, 255}};
  s.strokes = {fixtures::line_stroke({40, 40}, {216, 216}, 4)};
  s.intended_labels = {0, 3};
  s.ts_discontinuous = true;
  s.params = kDeskParams;
  return s;
}

}  // namespace

msm::RasterImage Scenario::paint() const {
  msm::RasterImage img(w, h);
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> noise(-texture, texture);
  const auto channel = [&](std::uint8_t v) { return static_cast<std::uint8_t>(std::clamp(v + noise(rng), 0, 255)); };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Rgba c = palette[static_cast<std::size_t>(labels[static_cast<std::size_t>(y) * w + x])];
      img.set(x, y, texture == 0 ? c : Rgba{channel(c.r), channel(c.g), channel(c.b), c.a});
    }
  }
  return img;
}

Scenario edge_recovery() {
  Scenario s;
  s.name = "edge_recovery";
  s.description = "Textured halves blurred across their edge, then restored from each side.";
  s.labels = grid(256, 256, [](int x, int) { return x < 128 ? 0 : 1; });
  s.palette = {Rgba{200, 60, 50, 255}, Rgba{40, 90, 200, 255}};
  s.texture = 12;
  s.intended_labels = {0, 1};
  // SS strokes stop 7 px short of the edge: the 6 px footprint radius stays in
  // the half while the theta-sized brush reaches the edge pixels.
  s.params = {{"stroke_width", 12}};
  for (int y = 8; y <= 244; y += 8) {
    s.strokes.push_back(fixtures::line_stroke({96, double(y)}, {160, double(y)}, 2));
    s.strokes.push_back(fixtures::line_stroke({160, double(y + 4)}, {96, double(y + 4)}, 2));
  }
  s.tools.assign(s.strokes.size(), msm::Tool::bs);
  for (int pass = 0; pass < 2; ++pass) {
    for (int y = 6; y <= 250; y += 3) {
      s.strokes.push_back(fixtures::line_stroke({40, double(y)}, {120, double(y)}, 2));
      s.strokes.push_back(fixtures::line_stroke({215, double(y)}, {135, double(y)}, 2));
    }
  }
  s.tools.resize(s.strokes.size(), msm::Tool::ss);
  return s;
}

std::vector<Scenario> all() { return {boundary_following(), into_region(), crossing_unwanted(), ts_discontinuity()}; }

}  // namespace scenarios
