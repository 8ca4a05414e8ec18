#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace oracle {

std::size_t Grid::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

Grid from_points(const msm::PointSet& s) {
  Grid g(s.width(), s.height());
  for (int y = 0; y < g.h; ++y) {
    for (int x = 0; x < g.w; ++x) {
      if (s.contains(x, y)) g.set(x, y);
    }
  }
  return g;
}

bool same(const Grid& g, const msm::PointSet& s) {
  if (g.w != s.width() || g.h != s.height()) return false;
  std::size_t n = 0;
  for (int y = 0; y < g.h; ++y) {
    for (int x = 0; x < g.w; ++x) {
      if (g.get(x, y) != s.contains(x, y)) return false;
      n += g.get(x, y) ? 1 : 0;
    }
  }
  return n == s.size();
}

std::size_t intersect_count(const Grid& a, const Grid& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) n += (a.bits[i] & b.bits[i]) ? 1 : 0;
  return n;
}

Grid unite(const Grid& a, const Grid& b) {
  Grid out = a;
  for (std::size_t i = 0; i < a.bits.size(); ++i) out.bits[i] = a.bits[i] | b.bits[i];
  return out;
}

std::vector<double> edt(const Grid& mask) {
  std::vector<std::pair<int, int>> pts;
  for (int y = 0; y < mask.h; ++y) {
    for (int x = 0; x < mask.w; ++x) {
      if (mask.get(x, y)) pts.emplace_back(x, y);
    }
  }
  std::vector<double> out(mask.bits.size(), std::numeric_limits<double>::infinity());
  for (int y = 0; y < mask.h; ++y) {
    for (int x = 0; x < mask.w; ++x) {
      long long best = std::numeric_limits<long long>::max();
      for (auto [px, py] : pts) {
        const long long d = static_cast<long long>(px - x) * (px - x) + static_cast<long long>(py - y) * (py - y);
        best = std::min(best, d);
      }
      if (!pts.empty()) out[mask.idx(x, y)] = std::sqrt(static_cast<double>(best));
    }
  }
  return out;
}

Grid dilate(const Grid& points, double radius) {
  Grid out(points.w, points.h);
  const int e = static_cast<int>(std::floor(radius)) + 1;
  for (int y = 0; y < points.h; ++y) {
    for (int x = 0; x < points.w; ++x) {
      if (!points.get(x, y)) continue;
      for (int dy = -e; dy <= e; ++dy) {
        for (int dx = -e; dx <= e; ++dx) {
          if (std::sqrt(static_cast<double>(dx * dx + dy * dy)) <= radius) out.set(x + dx, y + dy);
        }
      }
    }
  }
  return out;
}

Grid boundary(const Grid& area) {
  Grid out(area.w, area.h);
  for (int y = 0; y < area.h; ++y) {
    for (int x = 0; x < area.w; ++x) {
      if (area.get(x, y) && (!area.get(x - 1, y) || !area.get(x + 1, y) || !area.get(x, y - 1) || !area.get(x, y + 1))) {
        out.set(x, y);
      }
    }
  }
  return out;
}

double segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double vx = bx - ax, vy = by - ay;
  const double wx = px - ax, wy = py - ay;
  const double vv = vx * vx + vy * vy;
  double t = vv > 0 ? (wx * vx + wy * vy) / vv : 0.0;
  t = std::max(0.0, std::min(1.0, t));
  const double dx = px - (ax + t * vx), dy = py - (ay + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

Grid polyline_within(const std::vector<msm::Point2>& pts, double radius, int w, int h) {
  Grid out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool in = false;
      if (pts.size() == 1) {
        in = segment_distance(x, y, pts[0].x, pts[0].y, pts[0].x, pts[0].y) <= radius;
      }
      for (std::size_t i = 1; i < pts.size() && !in; ++i) {
        const double d = segment_distance(x, y, pts[i - 1].x, pts[i - 1].y, pts[i].x, pts[i].y);
        in = d <= radius;
      }
      if (in) out.set(x, y);
    }
  }
  return out;
}

std::vector<int> components(const std::vector<int>& values, int w, int h) {
  std::vector<int> out(values.size(), -1);
  int next = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t s = static_cast<std::size_t>(y) * w + x;
      if (out[s] >= 0) continue;
      std::deque<std::pair<int, int>> q{{x, y}};
      out[s] = next;
      while (!q.empty()) {
        auto [cx, cy] = q.front();
        q.pop_front();
        const int dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto& d : dirs) {
          const int nx = cx + d[0], ny = cy + d[1];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t t = static_cast<std::size_t>(ny) * w + nx;
          if (out[t] < 0 && values[t] == values[s]) {
            out[t] = next;
            q.emplace_back(nx, ny);
          }
        }
      }
      ++next;
    }
  }
  return out;
}

Regions regions_from_labels(const std::vector<int>& labels, int w, int h, double dilation) {
  Regions r;
  r.w = w;
  r.h = h;
  r.labels = components(labels, w, h);
  const int n = *std::max_element(r.labels.begin(), r.labels.end()) + 1;
  r.area.assign(static_cast<std::size_t>(n), Grid(w, h));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) r.area[static_cast<std::size_t>(r.labels[static_cast<std::size_t>(y) * w + x])].set(x, y);
  }
  for (const Grid& a : r.area) r.dilated_boundary.push_back(dilate(boundary(a), dilation));
  return r;
}

Counts counts(const Grid& footprint, const Grid& bone, const Regions& r, const std::vector<int>& candidate) {
  Counts c;
  c.footprint = footprint.count();
  c.bone = bone.count();
  Grid area(r.w, r.h), bdy(r.w, r.h);
  for (int id : candidate) {
    area = unite(area, r.area[static_cast<std::size_t>(id)]);
    bdy = unite(bdy, r.dilated_boundary[static_cast<std::size_t>(id)]);
  }
  c.area = area.count();
  c.area_hits = intersect_count(area, footprint);
  c.boundary = bdy.count();
  c.boundary_hits = intersect_count(bdy, bone);
  return c;
}

double score(const Counts& c, double alpha, double beta) {
  if (c.area == 0) return 0.0;
  const auto pair = [](std::size_t hit, std::size_t target, std::size_t probe) {
    if (probe == 0 || target == 0) return 0.0;
    return static_cast<double>(hit) / static_cast<double>(target) + static_cast<double>(hit) / static_cast<double>(probe);
  };
  return alpha * pair(c.area_hits, c.area, c.footprint) + beta * pair(c.boundary_hits, c.boundary, c.bone);
}

Step update(const std::vector<int>& prev_selected, const Grid& footprint, const Grid& bone, const Regions& r,
            double alpha, double beta, double gamma) {
  Step s;
  for (std::size_t id = 0; id < r.area.size(); ++id) {
    if (intersect_count(r.area[id], footprint) > 0) s.covered.push_back(static_cast<int>(id));
  }
  for (int id : prev_selected) {
    if (std::find(s.covered.begin(), s.covered.end(), id) != s.covered.end()) s.base.push_back(id);
  }
  std::sort(s.base.begin(), s.base.end());
  s.base_score = s.base.empty() ? 0.0 : score(counts(footprint, bone, r, s.base), alpha, beta);
  int best = -1;
  double best_score = -1.0;
  for (int id : s.covered) {
    if (std::find(s.base.begin(), s.base.end(), id) != s.base.end()) continue;
    std::vector<int> cand = s.base;
    cand.push_back(id);
    const double sc = score(counts(footprint, bone, r, cand), alpha, beta);
    s.candidates.emplace_back(id, sc);
    if (sc > best_score) {
      best_score = sc;
      best = id;
    }
  }
  s.selected = s.base;
  if (best >= 0 && best_score > gamma * s.base_score) {
    s.selected.push_back(best);
    std::sort(s.selected.begin(), s.selected.end());
  }
  return s;
}

std::vector<std::vector<int>> ss_trajectory(const std::vector<msm::StrokeSample>& raw, const Regions& r,
                                            const msm::SessionParams& params) {
  std::vector<std::vector<int>> out;
  msm::StrokeBuilder builder(params.stroke.resample_spacing);
  std::vector<int> selected;
  for (const msm::StrokeSample& s0 : raw) {
    msm::StrokeSample s = s0;
    s.pos.x = std::clamp(s.pos.x, 0.0, r.w - 1.0);
    s.pos.y = std::clamp(s.pos.y, 0.0, r.h - 1.0);
    builder.add(s);
    const std::vector<msm::StrokeSample> all = builder.stroke().samples;
    // Longest suffix with arc length <= l, recomputed directly.
    std::size_t first = all.size() - 1;
    double len = 0.0;
    while (first > 0) {
      const double d = std::hypot(all[first].pos.x - all[first - 1].pos.x, all[first].pos.y - all[first - 1].pos.y);
      if (len + d > params.stroke.length) break;
      len += d;
      --first;
    }
    std::vector<msm::Point2> pts;
    for (std::size_t i = first; i < all.size(); ++i) pts.push_back(all[i].pos);
    const Grid footprint = polyline_within(pts, params.stroke.width / 2.0, r.w, r.h);
    const Grid bone = polyline_within(pts, params.stroke.bone_radius, r.w, r.h);
    const Step step = update(selected, footprint, bone, r, params.resemblance.alpha, params.resemblance.beta,
                             params.resemblance.gamma);
    selected = step.selected;
    out.push_back(selected);
  }
  return out;
}

bool connected(const std::vector<int>& selected, const Regions& r) {
  if (selected.empty()) return true;
  Grid m(r.w, r.h);
  for (int id : selected) m = unite(m, r.area[static_cast<std::size_t>(id)]);
  std::vector<int> values(m.bits.begin(), m.bits.end());
  const std::vector<int> comp = components(values, r.w, r.h);
  int label = -1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0) continue;
    if (label < 0) label = comp[i];
    if (comp[i] != label) return false;
  }
  return true;
}

}  // namespace oracle
