#pragma once

#include <limits>
#include <vector>

#include "msm/point_set.hpp"

namespace msm {

/// Exact Euclidean distance, in pixels, from every grid pixel to the nearest
/// pixel of a mask. Squared distances are integers and stored exactly.
class DistanceField {
 public:
  DistanceField() = default;
  DistanceField(int width, int height, std::vector<double> squared)
      : width_(width), height_(height), squared_(std::move(squared)) {}

  int width() const { return width_; }
  int height() const { return height_; }

  double squared(int x, int y) const { return squared_[index(x, y)]; }
  double at(int x, int y) const;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> squared_;
};

/// Separable two-pass (columns, then rows) lower-envelope transform.
/// Throws Error("no boundary pixels") on an empty mask.
DistanceField distance_transform(const PointSet& mask);

/// Same transform restricted to `window`; distances are to mask pixels inside
/// the window only. Returned values are indexed relative to window.x0/y0.
DistanceField distance_transform(const PointSet& mask, const Rect& window);

/// { q : exists p in points, |p - q| <= radius }, clipped to the grid.
/// Agrees exactly with thresholding distance_transform(points) at radius.
PointSet dilate(const PointSet& points, double radius);

}  // namespace msm
