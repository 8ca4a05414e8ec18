#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "msm/point_set.hpp"
#include "msm/raster.hpp"

namespace msm {

struct RegionConfig {
  /// Radius applied to every region boundary before boundary resemblance.
  double boundary_dilation = 10.0;
};

/// One 4-connected color region.
struct Region {
  int id = 0;
  PointSet area;
  PointSet boundary;          ///< area pixels with a 4-neighbor outside the area or grid
  PointSet dilated_boundary;  ///< boundary dilated by RegionConfig::boundary_dilation
  Rgba color;
};

/// Full partition of a canvas into regions with consecutive ids 0..n-1,
/// numbered in raster order of each region's first pixel. Immutable.
class RegionMap {
 public:
  RegionMap() = default;

  /// Splits every label class into 4-connected components and renumbers them.
  /// `colors`, when given, holds one color per input label value; otherwise
  /// each region's color is the rounded mean of `image` (if provided) or black.
  static RegionMap from_labels(int width, int height, std::span<const std::int32_t> labels,
                               std::optional<std::span<const Rgba>> colors,
                               const RasterImage* image, const RegionConfig& config = {});

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return regions_.size(); }
  double boundary_dilation() const { return boundary_dilation_; }

  int label_at(int x, int y) const {
    return labels_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(x)];
  }
  std::span<const std::int32_t> labels() const { return labels_; }
  const std::vector<Region>& regions() const { return regions_; }
  const Region& region(int id) const;

  /// Canvas filled with each region's representative color.
  RasterImage render() const;

 private:
  int width_ = 0;
  int height_ = 0;
  double boundary_dilation_ = 10.0;
  std::vector<std::int32_t> labels_;
  std::vector<Region> regions_;
};

/// Maximal 4-connected components of exactly equal RGBA.
RegionMap flat_fill_regions(const RasterImage& image, const RegionConfig& config = {});

struct MeanShiftParams {
  double spatial_bandwidth = 8.0;  ///< pixels
  double color_bandwidth = 16.0;   ///< channel units
  int min_region = 64;             ///< pixels; smaller components are merged away
  int max_iterations = 20;
  double convergence = 0.01;       ///< shift length in bandwidth-normalized units
};

/// Joint spatial-color mean shift (uniform kernel on X, Y, R, G, B, A scaled by
/// the bandwidths), 4-connected grouping of pixels whose modes lie within half
/// a color bandwidth, then merging of components below min_region into the
/// adjacent region with the nearest representative color (ties: lower id).
RegionMap meanshift_regions(const RasterImage& image, const MeanShiftParams& params = {},
                            const RegionConfig& config = {});

/// Pixels of `area` with at least one 4-neighbor outside it; the grid border
/// counts as outside.
PointSet area_boundary(const PointSet& area);

PointSet region_boundary(const Region& region, const RegionMap& map);

/// Sidecar cache: 16-bit grayscale label PNG + JSON index of colors and areas.
void save_region_map(const RegionMap& map, const std::filesystem::path& label_png,
                     const std::filesystem::path& index_json);
RegionMap load_region_map(const std::filesystem::path& label_png,
                          const std::filesystem::path& index_json, const RegionConfig& config = {});

}  // namespace msm
