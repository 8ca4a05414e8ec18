#include "msm/stroke.hpp"

#include <algorithm>
#include <cmath>

#include "msm/error.hpp"

namespace msm {

namespace {

constexpr double kCoincident = 1e-9;

StrokeSample interpolate(const StrokeSample& a, const StrokeSample& b, double u) {
  StrokeSample s;
  s.pos = Point2{a.pos.x + (b.pos.x - a.pos.x) * u, a.pos.y + (b.pos.y - a.pos.y) * u};
  s.t_ms = a.t_ms + (b.t_ms - a.t_ms) * u;
  if (a.pressure.has_value() && b.pressure.has_value()) {
    s.pressure = *a.pressure + (*b.pressure - *a.pressure) * u;
  } else if (a.pressure.has_value() || b.pressure.has_value()) {
    s.pressure = u < 0.5 ? a.pressure : b.pressure;
  }
  return s;
}

}  // namespace

StrokeBuilder::StrokeBuilder(double spacing) : spacing_(spacing) {
  require(spacing > 0.0, "resample spacing must be positive");
}

void StrokeBuilder::add(const StrokeSample& raw) {
  if (!last_raw_.has_value()) {
    committed_.push_back(raw);
    last_raw_ = raw;
    return;
  }
  const StrokeSample a = *last_raw_;
  const StrokeSample& b = raw;
  last_raw_ = raw;
  const double dx = b.pos.x - a.pos.x;
  const double dy = b.pos.y - a.pos.y;
  const double seg2 = dx * dx + dy * dy;
  if (seg2 <= kCoincident * kCoincident) return;

  // Walk the segment, emitting every point at distance `spacing` from the
  // previous emitted point. The walk stays inside that point's circle, so the
  // exit is the larger root of |a + u d - p|^2 = s^2.
  double u0 = 0.0;
  bool fresh_segment = true;
  const double s2 = spacing_ * spacing_;
  while (true) {
    const Point2 p = committed_.back().pos;
    const double fx = a.pos.x - p.x;
    const double fy = a.pos.y - p.y;
    const double qb = 2.0 * (fx * dx + fy * dy);
    const double qc = fx * fx + fy * fy - s2;
    const double disc = qb * qb - 4.0 * seg2 * qc;
    if (disc < 0.0) break;
    double u = (-qb + std::sqrt(disc)) / (2.0 * seg2);
    if (fresh_segment) {
      // Round-off can leave the exit a hair before the segment start.
      if (u < -1e-9) break;
      u = std::max(u, 0.0);
    } else if (u <= u0) {
      break;
    }
    if (u > 1.0) {
      // A segment end lying on the circle up to round-off is the next point;
      // skipping it would let a sharp turn jump to the far exit.
      if (u - 1.0 > 1e-9) break;
      u = 1.0;
    }
    committed_.push_back(interpolate(a, b, u));
    u0 = u;
    fresh_segment = false;
  }
}

void StrokeBuilder::resampled(std::vector<StrokeSample>& out) const {
  out.assign(committed_.begin(), committed_.end());
  if (last_raw_.has_value() && !committed_.empty() &&
      distance(committed_.back().pos, last_raw_->pos) > kCoincident) {
    out.push_back(*last_raw_);
  }
}

Stroke StrokeBuilder::stroke() const {
  Stroke s;
  s.spacing = spacing_;
  resampled(s.samples);
  return s;
}

Stroke resample_uniform(std::span<const StrokeSample> raw, double spacing) {
  require(!raw.empty(), "resample_uniform needs at least one sample");
  StrokeBuilder builder(spacing);
  for (const StrokeSample& s : raw) builder.add(s);
  return builder.stroke();
}

double arc_length(std::span<const StrokeSample> samples) {
  double total = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) total += distance(samples[i - 1].pos, samples[i].pos);
  return total;
}

std::vector<StrokeSample> partial_window(std::span<const StrokeSample> stroke, double l) {
  require(!stroke.empty(), "partial_window needs a non-empty stroke");
  require(l > 0.0, "partial stroke length must be positive");
  std::size_t first = stroke.size() - 1;
  double length = 0.0;
  while (first > 0) {
    const double step = distance(stroke[first - 1].pos, stroke[first].pos);
    if (length + step > l) break;
    length += step;
    --first;
  }
  return std::vector<StrokeSample>(stroke.begin() + static_cast<std::ptrdiff_t>(first), stroke.end());
}

double squared_distance_to_segment(Point2 p, Point2 a, Point2 b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double u = 0.0;
  if (len2 > 0.0) u = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  const double ex = p.x - (a.x + u * dx);
  const double ey = p.y - (a.y + u * dy);
  return ex * ex + ey * ey;
}

namespace {

// Inserts, for every row, the run of pixel centers inside the capsule around
// [a, b]. The capsule is convex so each row meets it in one interval; the
// analytic interval is snapped to the exact distance predicate at both ends.
void insert_capsule(PointSet& out, Point2 a, Point2 b, double radius) {
  const double r2 = radius * radius;
  const int y_begin = std::max(0, static_cast<int>(std::ceil(std::min(a.y, b.y) - radius)));
  const int y_end = std::min(out.height() - 1, static_cast<int>(std::floor(std::max(a.y, b.y) + radius)));
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  const double len = std::sqrt(len2);
  const auto inside = [&](int x, int y) {
    return squared_distance_to_segment(Point2{static_cast<double>(x), static_cast<double>(y)}, a, b) <= r2;
  };
  for (int y = y_begin; y <= y_end; ++y) {
    const double yc = static_cast<double>(y);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    const auto disk = [&](Point2 c) {
      const double h2 = r2 - (yc - c.y) * (yc - c.y);
      if (h2 < 0.0) return;
      const double h = std::sqrt(h2);
      lo = std::min(lo, c.x - h);
      hi = std::max(hi, c.x + h);
    };
    disk(a);
    disk(b);
    if (len > 0.0) {
      // Band |cross| <= r*len and 0 <= dot <= len2, both linear in x.
      double band_lo = -std::numeric_limits<double>::infinity();
      double band_hi = std::numeric_limits<double>::infinity();
      const auto clip = [&](double coef, double offset, double min_v, double max_v) {
        // min_v <= coef * x + offset <= max_v
        if (coef == 0.0) {
          if (offset < min_v || offset > max_v) {
            band_lo = std::numeric_limits<double>::infinity();
            band_hi = -std::numeric_limits<double>::infinity();
          }
          return;
        }
        double x1 = (min_v - offset) / coef;
        double x2 = (max_v - offset) / coef;
        if (x1 > x2) std::swap(x1, x2);
        band_lo = std::max(band_lo, x1);
        band_hi = std::min(band_hi, x2);
      };
      const double ry = yc - a.y;
      clip(dx, ry * dy - a.x * dx, 0.0, len2);                      // dot
      clip(dy, -ry * dx - a.x * dy, -radius * len, radius * len);  // cross
      if (band_lo <= band_hi) {
        lo = std::min(lo, band_lo);
        hi = std::max(hi, band_hi);
      }
    }
    if (!(lo <= hi)) continue;
    int x0 = static_cast<int>(std::ceil(lo));
    int x1 = static_cast<int>(std::floor(hi));
    x0 = std::max(x0, -1);
    x1 = std::min(x1, out.width());
    while (x0 - 1 >= 0 && inside(x0 - 1, y)) --x0;
    while (x0 <= x1 && !inside(x0, y)) ++x0;
    while (x1 + 1 < out.width() && inside(x1 + 1, y)) ++x1;
    while (x1 >= x0 && !inside(x1, y)) --x1;
    if (x0 <= x1) out.insert_span(y, x0, x1 + 1);
  }
}

}  // namespace

PointSet rasterize_within(std::span<const StrokeSample> window, double radius, int grid_width,
                          int grid_height) {
  require(radius >= 0.0, "rasterization radius must be non-negative");
  PointSet out(grid_width, grid_height);
  if (window.empty()) return out;
  double x0 = window[0].pos.x, x1 = x0, y0 = window[0].pos.y, y1 = y0;
  for (const StrokeSample& s : window) {
    x0 = std::min(x0, s.pos.x);
    x1 = std::max(x1, s.pos.x);
    y0 = std::min(y0, s.pos.y);
    y1 = std::max(y1, s.pos.y);
  }
  const Rect box{static_cast<int>(std::floor(x0 - radius)), static_cast<int>(std::floor(y0 - radius)),
                 static_cast<int>(std::ceil(x1 + radius)) + 1, static_cast<int>(std::ceil(y1 + radius)) + 1};
  out.reserve(box);
  if (window.size() == 1) {
    insert_capsule(out, window[0].pos, window[0].pos, radius);
    return out;
  }
  for (std::size_t i = 1; i < window.size(); ++i) insert_capsule(out, window[i - 1].pos, window[i].pos, radius);
  return out;
}

PointSet rasterize_footprint(std::span<const StrokeSample> window, double w, int grid_width,
                             int grid_height) {
  require(w > 0.0, "stroke width must be positive");
  return rasterize_within(window, w / 2.0, grid_width, grid_height);
}

PointSet bone_expansion(std::span<const StrokeSample> window, double radius, int grid_width,
                        int grid_height) {
  return rasterize_within(window, radius, grid_width, grid_height);
}

PartialStroke make_partial_stroke(std::span<const StrokeSample> resampled, const StrokeParams& params,
                                  int grid_width, int grid_height) {
  PartialStroke p;
  p.window = partial_window(resampled, params.length);
  p.length_budget = params.length;
  p.width = params.width;
  p.footprint = rasterize_footprint(p.window, params.width, grid_width, grid_height);
  p.bone_expansion = bone_expansion(p.window, params.bone_radius, grid_width, grid_height);
  return p;
}

}  // namespace msm
