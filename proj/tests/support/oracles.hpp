#pragma once

// Brute-force reference implementations. They share no code with the engine:
// sets are plain byte grids and every quantity is recomputed from scratch.

#include <cstdint>
#include <vector>

#include "msm/engine.hpp"

namespace oracle {

struct Grid {
  int w = 0;
  int h = 0;
  std::vector<std::uint8_t> bits;

  Grid() = default;
  Grid(int width, int height) : w(width), h(height), bits(static_cast<std::size_t>(width) * height, 0) {}
  bool get(int x, int y) const { return x >= 0 && y >= 0 && x < w && y < h && bits[idx(x, y)] != 0; }
  void set(int x, int y) {
    if (x >= 0 && y >= 0 && x < w && y < h) bits[idx(x, y)] = 1;
  }
  std::size_t count() const;
  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * w + x; }
};

Grid from_points(const msm::PointSet& s);
bool same(const Grid& g, const msm::PointSet& s);
std::size_t intersect_count(const Grid& a, const Grid& b);
Grid unite(const Grid& a, const Grid& b);

/// All-pairs nearest distance to set pixels.
std::vector<double> edt(const Grid& mask);
/// Stamps a disk of `radius` around every member.
Grid dilate(const Grid& points, double radius);
/// Members with a 4-neighbor outside the set or grid.
Grid boundary(const Grid& area);

/// Plain point-to-segment distance, written independently of the engine.
double segment_distance(double px, double py, double ax, double ay, double bx, double by);
/// Pixels within `radius` of the polyline through `pts` (a disk for one point).
Grid polyline_within(const std::vector<msm::Point2>& pts, double radius, int w, int h);

/// 4-connected components of equal value, numbered in raster order.
std::vector<int> components(const std::vector<int>& values, int w, int h);

/// Region geometry recomputed from a label grid.
struct Regions {
  int w = 0;
  int h = 0;
  std::vector<int> labels;
  std::vector<Grid> area;
  std::vector<Grid> dilated_boundary;
};
Regions regions_from_labels(const std::vector<int>& labels, int w, int h, double dilation);

struct Counts {
  std::size_t footprint = 0, area = 0, area_hits = 0, bone = 0, boundary = 0, boundary_hits = 0;
};

Counts counts(const Grid& footprint, const Grid& bone, const Regions& r, const std::vector<int>& candidate);
double score(const Counts& c, double alpha, double beta);

struct Step {
  std::vector<int> covered, base, selected;
  double base_score = 0.0;
  std::vector<std::pair<int, double>> candidates;
};

/// One selection update, recomputed from the raw definitions.
Step update(const std::vector<int>& prev_selected, const Grid& footprint, const Grid& bone, const Regions& r,
            double alpha, double beta, double gamma);

/// Same recurrence over a whole stroke: resampled samples fed one raw sample
/// at a time through the engine's resampler, geometry and scoring by brute force.
std::vector<std::vector<int>> ss_trajectory(const std::vector<msm::StrokeSample>& raw, const Regions& r,
                                            const msm::SessionParams& params);

/// True when the union of the labelled areas is 4-connected.
bool connected(const std::vector<int>& selected, const Regions& r);

}  // namespace oracle
