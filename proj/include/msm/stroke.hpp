#pragma once

#include <optional>
#include <span>
#include <vector>

#include "msm/point_set.hpp"
#include "msm/raster.hpp"

namespace msm {

struct StrokeSample {
  Point2 pos;
  double t_ms = 0.0;
  std::optional<double> pressure;

  friend bool operator==(const StrokeSample&, const StrokeSample&) = default;
};

/// Uniformly resampled stroke: consecutive samples are exactly `spacing` apart
/// except the final gap, which ends on the last raw sample and is shorter.
struct Stroke {
  std::vector<StrokeSample> samples;
  double spacing = 2.0;
};

/// Streams raw input samples into a uniformly resampled polyline.
///
/// Each new point is the first place along the raw polyline at Euclidean
/// distance `spacing` from the previous output point. Chord spacing (rather
/// than arc-length stepping) makes resampling idempotent on its own output.
/// Timestamps and pressure are interpolated along the raw segment.
class StrokeBuilder {
 public:
  explicit StrokeBuilder(double spacing = 2.0);

  void add(const StrokeSample& raw);

  bool empty() const { return committed_.empty(); }
  double spacing() const { return spacing_; }

  /// Committed points plus the trailing raw sample when it is not already one.
  Stroke stroke() const;
  /// Same as stroke().samples without copying the committed prefix twice.
  void resampled(std::vector<StrokeSample>& out) const;

 private:
  double spacing_;
  std::vector<StrokeSample> committed_;
  std::optional<StrokeSample> last_raw_;
};

Stroke resample_uniform(std::span<const StrokeSample> raw, double spacing);

/// Sum of distances between consecutive samples.
double arc_length(std::span<const StrokeSample> samples);

/// Trailing window of the live stroke with its rasterized features.
struct PartialStroke {
  std::vector<StrokeSample> window;
  double length_budget = 110.0;
  double width = 110.0;
  PointSet footprint;       ///< pixels within width/2 of the window polyline
  PointSet bone_expansion;  ///< pixels within the bone radius of the polyline
};

/// Longest suffix whose arc length is <= l. A one-sample stroke yields itself.
std::vector<StrokeSample> partial_window(std::span<const StrokeSample> stroke, double l);

/// Squared distance from p to segment [a, b].
double squared_distance_to_segment(Point2 p, Point2 a, Point2 b);

/// Pixels whose centers lie within `radius` of the window polyline (a union of
/// capsules; a single sample gives a disk). Clipped to the grid.
PointSet rasterize_within(std::span<const StrokeSample> window, double radius, int grid_width,
                          int grid_height);

PointSet rasterize_footprint(std::span<const StrokeSample> window, double w, int grid_width,
                             int grid_height);

PointSet bone_expansion(std::span<const StrokeSample> window, double radius, int grid_width,
                        int grid_height);

struct StrokeParams {
  double length = 110.0;         ///< partial-stroke arc length l, pixels
  double width = 110.0;          ///< footprint width w (full width), pixels
  double resample_spacing = 2.0;
  double bone_radius = 5.0;
};

PartialStroke make_partial_stroke(std::span<const StrokeSample> resampled, const StrokeParams& params,
                                  int grid_width, int grid_height);

}  // namespace msm
