#include "msm/distance.hpp"

#include <cmath>

#include "msm/error.hpp"

namespace msm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared distance transform over a lower envelope of parabolas
// (Felzenszwalb-Huttenlocher). Infinite samples contribute no parabola, so the
// envelope arithmetic never sees inf - inf.
class EnvelopeScratch {
 public:
  void run(const double* f, double* out, int n) {
    v_.resize(static_cast<std::size_t>(n));
    z_.resize(static_cast<std::size_t>(n) + 1);
    int k = -1;
    for (int q = 0; q < n; ++q) {
      const double fq = f[q];
      if (fq == kInf) continue;
      if (k < 0) {
        k = 0;
        v_[0] = q;
        z_[0] = -kInf;
        z_[1] = kInf;
        continue;
      }
      // z_[0] is -inf, so the scan always stops at k >= 0.
      double s = 0.0;
      while (true) {
        const int p = v_[static_cast<std::size_t>(k)];
        const double fp = f[p];
        s = ((fq + static_cast<double>(q) * q) - (fp + static_cast<double>(p) * p)) /
            (2.0 * (q - p));
        if (s > z_[static_cast<std::size_t>(k)]) break;
        --k;
      }
      ++k;
      v_[static_cast<std::size_t>(k)] = q;
      z_[static_cast<std::size_t>(k)] = s;
      z_[static_cast<std::size_t>(k) + 1] = kInf;
    }
    if (k < 0) {
      for (int q = 0; q < n; ++q) out[q] = kInf;
      return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
      while (z_[static_cast<std::size_t>(j) + 1] < q) ++j;
      const int p = v_[static_cast<std::size_t>(j)];
      const double d = static_cast<double>(q - p);
      out[q] = d * d + f[p];
    }
  }

 private:
  std::vector<int> v_;
  std::vector<double> z_;
};

std::vector<double> squared_edt(const PointSet& mask, const Rect& win) {
  const int w = win.width();
  const int h = win.height();
  std::vector<double> grid(static_cast<std::size_t>(w) * h, kInf);
  mask.for_each([&](int x, int y) {
    if (win.contains(x, y)) {
      grid[static_cast<std::size_t>(y - win.y0) * w + (x - win.x0)] = 0.0;
    }
  });
  EnvelopeScratch scratch;
  std::vector<double> col(static_cast<std::size_t>(h));
  std::vector<double> col_out(static_cast<std::size_t>(h));
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) col[static_cast<std::size_t>(y)] = grid[static_cast<std::size_t>(y) * w + x];
    scratch.run(col.data(), col_out.data(), h);
    for (int y = 0; y < h; ++y) grid[static_cast<std::size_t>(y) * w + x] = col_out[static_cast<std::size_t>(y)];
  }
  std::vector<double> row_out(static_cast<std::size_t>(w));
  for (int y = 0; y < h; ++y) {
    double* row = &grid[static_cast<std::size_t>(y) * w];
    scratch.run(row, row_out.data(), w);
    std::copy(row_out.begin(), row_out.end(), row);
  }
  return grid;
}

}  // namespace

double DistanceField::at(int x, int y) const { return std::sqrt(squared(x, y)); }

DistanceField distance_transform(const PointSet& mask) {
  return distance_transform(mask, Rect{0, 0, mask.width(), mask.height()});
}

DistanceField distance_transform(const PointSet& mask, const Rect& window) {
  if (mask.empty()) fail(ErrorCode::invalid_argument, "no boundary pixels");
  const Rect win = intersect(window, Rect{0, 0, mask.width(), mask.height()});
  require(!win.empty(), "distance transform window lies outside the grid");
  return DistanceField(win.width(), win.height(), squared_edt(mask, win));
}

PointSet dilate(const PointSet& points, double radius) {
  require(radius >= 0.0, "dilation radius must be non-negative");
  PointSet out(points.width(), points.height());
  if (points.empty()) return out;
  const Rect b = points.bounds();
  const int pad = static_cast<int>(std::floor(radius));
  const Rect win = intersect(Rect{b.x0 - pad, b.y0 - pad, b.x1 + pad, b.y1 + pad},
                             Rect{0, 0, points.width(), points.height()});
  const std::vector<double> sq = squared_edt(points, win);
  out.reserve(win);
  const int w = win.width();
  for (int y = win.y0; y < win.y1; ++y) {
    int run_start = -1;
    for (int x = win.x0; x <= win.x1; ++x) {
      const bool in = x < win.x1 &&
                      std::sqrt(sq[static_cast<std::size_t>(y - win.y0) * w + (x - win.x0)]) <= radius;
      if (in && run_start < 0) run_start = x;
      if (!in && run_start >= 0) {
        out.insert_span(y, run_start, x);
        run_start = -1;
      }
    }
  }
  return out;
}

}  // namespace msm
