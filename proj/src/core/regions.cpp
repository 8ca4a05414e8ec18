#include "msm/regions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <string>

#include <json.hpp>

#include "msm/distance.hpp"
#include "msm/error.hpp"
#include "msm/png_io.hpp"

namespace msm {

namespace {

using Labels = std::vector<std::int32_t>;

std::size_t idx(int x, int y, int width) {
  return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
}

// Connected components of equal input label; output ids follow raster order of
// each component's first pixel. Returns the source label of each component.
std::vector<std::int32_t> label_components(int width, int height, std::span<const std::int32_t> in,
                                           Labels& out) {
  out.assign(in.size(), -1);
  std::vector<std::int32_t> source;
  std::vector<std::size_t> stack;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t seed = idx(x, y, width);
      if (out[seed] >= 0) continue;
      const auto id = static_cast<std::int32_t>(source.size());
      const std::int32_t value = in[seed];
      source.push_back(value);
      out[seed] = id;
      stack.push_back(seed);
      while (!stack.empty()) {
        const std::size_t p = stack.back();
        stack.pop_back();
        const int px = static_cast<int>(p % static_cast<std::size_t>(width));
        const int py = static_cast<int>(p / static_cast<std::size_t>(width));
        const auto visit = [&](int nx, int ny) {
          if (nx < 0 || ny < 0 || nx >= width || ny >= height) return;
          const std::size_t q = idx(nx, ny, width);
          if (out[q] < 0 && in[q] == value) {
            out[q] = id;
            stack.push_back(q);
          }
        };
        visit(px - 1, py);
        visit(px + 1, py);
        visit(px, py - 1);
        visit(px, py + 1);
      }
    }
  }
  return source;
}

}  // namespace

PointSet area_boundary(const PointSet& area) {
  PointSet out(area.width(), area.height());
  if (area.empty()) return out;
  out.reserve(area.bounds());
  area.for_each([&](int x, int y) {
    if (!area.contains(x - 1, y) || !area.contains(x + 1, y) || !area.contains(x, y - 1) ||
        !area.contains(x, y + 1)) {
      out.insert(x, y);
    }
  });
  return out;
}

PointSet region_boundary(const Region& region, const RegionMap& map) {
  require(region.id >= 0 && static_cast<std::size_t>(region.id) < map.size() &&
              region.area.width() == map.width() && region.area.height() == map.height(),
          "region does not belong to this region map");
  return area_boundary(region.area);
}

RegionMap RegionMap::from_labels(int width, int height, std::span<const std::int32_t> labels,
                                 std::optional<std::span<const Rgba>> colors,
                                 const RasterImage* image, const RegionConfig& config) {
  require(width >= 1 && height >= 1, "region map dimensions must be at least 1x1");
  require(labels.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
          "label grid size does not match dimensions");
  require(image == nullptr || (image->width() == width && image->height() == height),
          "image size does not match label grid");
  require(config.boundary_dilation >= 0.0, "boundary dilation must be non-negative");

  RegionMap map;
  map.width_ = width;
  map.height_ = height;
  map.boundary_dilation_ = config.boundary_dilation;
  const std::vector<std::int32_t> source = label_components(width, height, labels, map.labels_);
  const std::size_t n = source.size();

  std::vector<Rect> boxes(n, Rect{width, height, -1, -1});
  std::vector<std::array<double, 4>> sums(n, std::array<double, 4>{0, 0, 0, 0});
  std::vector<std::size_t> counts(n, 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const auto id = static_cast<std::size_t>(map.labels_[idx(x, y, width)]);
      Rect& b = boxes[id];
      b.x0 = std::min(b.x0, x);
      b.y0 = std::min(b.y0, y);
      b.x1 = std::max(b.x1, x + 1);
      b.y1 = std::max(b.y1, y + 1);
      ++counts[id];
      if (image != nullptr) {
        const Rgba c = image->at(x, y);
        for (int ch = 0; ch < 4; ++ch) sums[id][static_cast<std::size_t>(ch)] += c[ch];
      }
    }
  }

  map.regions_.resize(n);
  for (std::size_t id = 0; id < n; ++id) {
    Region& r = map.regions_[id];
    r.id = static_cast<int>(id);
    r.area = PointSet(width, height);
    r.area.reserve(boxes[id]);
    if (colors.has_value()) {
      const auto src = static_cast<std::size_t>(source[id]);
      require(source[id] >= 0 && src < colors->size(), "no color given for label " +
                                                          std::to_string(source[id]));
      r.color = (*colors)[src];
    } else if (image != nullptr) {
      const auto avg = [&](int ch) {
        return static_cast<std::uint8_t>(
            std::floor(sums[id][static_cast<std::size_t>(ch)] / static_cast<double>(counts[id]) + 0.5));
      };
      r.color = Rgba{avg(0), avg(1), avg(2), avg(3)};
    }
  }
  for (int y = 0; y < height; ++y) {
    int x = 0;
    while (x < width) {
      const std::int32_t id = map.labels_[idx(x, y, width)];
      int end = x + 1;
      while (end < width && map.labels_[idx(end, y, width)] == id) ++end;
      map.regions_[static_cast<std::size_t>(id)].area.insert_span(y, x, end);
      x = end;
    }
  }
  for (Region& r : map.regions_) {
    r.boundary = area_boundary(r.area);
    r.dilated_boundary = dilate(r.boundary, config.boundary_dilation);
  }
  return map;
}

const Region& RegionMap::region(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= regions_.size()) {
    fail(ErrorCode::invalid_argument, "unknown region id " + std::to_string(id));
  }
  return regions_[static_cast<std::size_t>(id)];
}

RasterImage RegionMap::render() const {
  RasterImage out(width_, height_);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) out.set(x, y, regions_[static_cast<std::size_t>(label_at(x, y))].color);
  }
  return out;
}

RegionMap flat_fill_regions(const RasterImage& image, const RegionConfig& config) {
  // Each distinct color gets a label value; components split it further.
  std::map<std::uint32_t, std::int32_t> palette;
  std::vector<Rgba> colors;
  Labels labels(image.pixels().size());
  const auto pixels = image.pixels();
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const Rgba c = pixels[i];
    const std::uint32_t key = (static_cast<std::uint32_t>(c.r) << 24) |
                              (static_cast<std::uint32_t>(c.g) << 16) |
                              (static_cast<std::uint32_t>(c.b) << 8) | c.a;
    auto [it, inserted] = palette.try_emplace(key, static_cast<std::int32_t>(colors.size()));
    if (inserted) colors.push_back(c);
    labels[i] = it->second;
  }
  return RegionMap::from_labels(image.width(), image.height(), labels,
                                std::span<const Rgba>(colors), nullptr, config);
}

namespace {

struct Feature {
  double x, y;
  double c[4];
};

// Runs mean shift from every pixel; returns each pixel's converged color mode.
std::vector<std::array<double, 4>> seek_modes(const RasterImage& image, const MeanShiftParams& p) {
  const int w = image.width();
  const int h = image.height();
  const double hs = p.spatial_bandwidth;
  const double hr = p.color_bandwidth;
  const int reach = static_cast<int>(std::floor(hs));
  std::vector<std::array<double, 4>> modes(static_cast<std::size_t>(w) * h);
  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      const Rgba c0 = image.at(x0, y0);
      Feature f{static_cast<double>(x0), static_cast<double>(y0),
                {static_cast<double>(c0.r), static_cast<double>(c0.g), static_cast<double>(c0.b),
                 static_cast<double>(c0.a)}};
      for (int it = 0; it < p.max_iterations; ++it) {
        const int cx = static_cast<int>(std::floor(f.x + 0.5));
        const int cy = static_cast<int>(std::floor(f.y + 0.5));
        double sx = 0, sy = 0, sc[4] = {0, 0, 0, 0};
        std::size_t n = 0;
        for (int y = std::max(0, cy - reach - 1); y <= std::min(h - 1, cy + reach + 1); ++y) {
          const double dy = (y - f.y) / hs;
          for (int x = std::max(0, cx - reach - 1); x <= std::min(w - 1, cx + reach + 1); ++x) {
            const double dx = (x - f.x) / hs;
            double d2 = dx * dx + dy * dy;
            if (d2 > 1.0) continue;
            const Rgba c = image.at(x, y);
            for (int ch = 0; ch < 4 && d2 <= 1.0; ++ch) {
              const double dc = (c[ch] - f.c[ch]) / hr;
              d2 += dc * dc;
            }
            if (d2 > 1.0) continue;
            sx += x;
            sy += y;
            for (int ch = 0; ch < 4; ++ch) sc[ch] += c[ch];
            ++n;
          }
        }
        if (n == 0) break;
        const double inv = 1.0 / static_cast<double>(n);
        Feature next{sx * inv, sy * inv, {sc[0] * inv, sc[1] * inv, sc[2] * inv, sc[3] * inv}};
        double shift = ((next.x - f.x) / hs) * ((next.x - f.x) / hs) +
                       ((next.y - f.y) / hs) * ((next.y - f.y) / hs);
        for (int ch = 0; ch < 4; ++ch) {
          const double d = (next.c[ch] - f.c[ch]) / hr;
          shift += d * d;
        }
        f = next;
        if (shift < p.convergence * p.convergence) break;
      }
      modes[idx(x0, y0, w)] = {f.c[0], f.c[1], f.c[2], f.c[3]};
    }
  }
  return modes;
}

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
  std::vector<std::size_t> parent;
};

double color_distance2(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  double d = 0;
  for (std::size_t ch = 0; ch < 4; ++ch) d += (a[ch] - b[ch]) * (a[ch] - b[ch]);
  return d;
}

}  // namespace

RegionMap meanshift_regions(const RasterImage& image, const MeanShiftParams& params,
                            const RegionConfig& config) {
  require(params.spatial_bandwidth > 0 && params.color_bandwidth > 0,
          "mean shift bandwidths must be positive");
  require(params.min_region >= 1, "min_region must be at least 1");
  require(params.max_iterations >= 1, "max_iterations must be at least 1");
  const int w = image.width();
  const int h = image.height();
  const auto modes = seek_modes(image, params);

  DisjointSets sets(modes.size());
  const double join2 = 0.25 * params.color_bandwidth * params.color_bandwidth;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t p = idx(x, y, w);
      if (x + 1 < w && color_distance2(modes[p], modes[p + 1]) < join2) sets.unite(p, p + 1);
      if (y + 1 < h && color_distance2(modes[p], modes[p + static_cast<std::size_t>(w)]) < join2) {
        sets.unite(p, p + static_cast<std::size_t>(w));
      }
    }
  }
  Labels raw(modes.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<std::int32_t>(sets.find(i));
  Labels labels;
  const std::size_t n = label_components(w, h, raw, labels).size();

  // Region statistics on original colors; merged regions accumulate sums.
  std::vector<std::array<double, 4>> sums(n, std::array<double, 4>{0, 0, 0, 0});
  std::vector<std::size_t> sizes(n, 0);
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto id = static_cast<std::size_t>(labels[i]);
    const Rgba c = image.pixels()[i];
    for (int ch = 0; ch < 4; ++ch) sums[id][static_cast<std::size_t>(ch)] += c[ch];
    ++sizes[id];
    members[id].push_back(i);
  }
  const auto mean = [&](std::size_t id) {
    std::array<double, 4> m{};
    for (std::size_t ch = 0; ch < 4; ++ch) m[ch] = sums[id][ch] / static_cast<double>(sizes[id]);
    return m;
  };

  std::size_t alive = n;
  const auto min_region = static_cast<std::size_t>(params.min_region);
  while (alive > 1) {
    std::size_t victim = n;
    for (std::size_t id = 0; id < n; ++id) {
      if (sizes[id] == 0 || sizes[id] >= min_region) continue;
      if (victim == n || sizes[id] < sizes[victim]) victim = id;
    }
    if (victim == n) break;
    std::size_t target = n;
    double best = 0;
    const auto victim_mean = mean(victim);
    for (std::size_t p : members[victim]) {
      const int x = static_cast<int>(p % static_cast<std::size_t>(w));
      const int y = static_cast<int>(p / static_cast<std::size_t>(w));
      const auto consider = [&](int nx, int ny) {
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) return;
        const auto other = static_cast<std::size_t>(labels[idx(nx, ny, w)]);
        if (other == victim) return;
        const double d = color_distance2(victim_mean, mean(other));
        if (target == n || d < best || (d == best && other < target)) {
          target = other;
          best = d;
        }
      };
      consider(x - 1, y);
      consider(x + 1, y);
      consider(x, y - 1);
      consider(x, y + 1);
    }
    if (target == n) break;
    for (std::size_t p : members[victim]) labels[p] = static_cast<std::int32_t>(target);
    members[target].insert(members[target].end(), members[victim].begin(), members[victim].end());
    members[victim].clear();
    for (std::size_t ch = 0; ch < 4; ++ch) sums[target][ch] += sums[victim][ch];
    sizes[target] += sizes[victim];
    sizes[victim] = 0;
    --alive;
  }
  return RegionMap::from_labels(w, h, labels, std::nullopt, &image, config);
}

void save_region_map(const RegionMap& map, const std::filesystem::path& label_png,
                     const std::filesystem::path& index_json) {
  if (map.size() > 65536) {
    fail(ErrorCode::invalid_argument, "region map has more than 65536 regions; cannot store as 16-bit");
  }
  Gray16Image labels{map.width(), map.height(), {}};
  labels.values.reserve(map.labels().size());
  for (std::int32_t l : map.labels()) labels.values.push_back(static_cast<std::uint16_t>(l));
  save_png_gray16(label_png, labels);

  nlohmann::ordered_json index;
  index["format"] = "msm-regions";
  index["version"] = 1;
  index["width"] = map.width();
  index["height"] = map.height();
  index["boundary_dilation"] = map.boundary_dilation();
  nlohmann::ordered_json regions = nlohmann::ordered_json::array();
  for (const Region& r : map.regions()) {
    regions.push_back({{"id", r.id},
                       {"color", {r.color.r, r.color.g, r.color.b, r.color.a}},
                       {"area", r.area.size()}});
  }
  index["regions"] = std::move(regions);
  std::ofstream out(index_json, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write '" + index_json.string() + "'");
  out << index.dump(2) << '\n';
}

RegionMap load_region_map(const std::filesystem::path& label_png,
                          const std::filesystem::path& index_json, const RegionConfig& config) {
  const Gray16Image labels16 = load_png_gray16(label_png);
  std::ifstream in(index_json, std::ios::binary);
  if (!in) fail(ErrorCode::input, "cannot open '" + index_json.string() + "'");
  nlohmann::json index;
  try {
    index = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::input, "'" + index_json.string() + "': " + e.what());
  }
  std::vector<Rgba> colors;
  std::vector<std::size_t> areas;
  try {
    if (index.at("width").get<int>() != labels16.width ||
        index.at("height").get<int>() != labels16.height) {
      fail(ErrorCode::input, "region index dimensions do not match the label image");
    }
    for (const auto& r : index.at("regions")) {
      const auto& c = r.at("color");
      if (!c.is_array() || c.size() != 4) fail(ErrorCode::input, "region color must be [r,g,b,a]");
      colors.push_back(Rgba{c[0].get<std::uint8_t>(), c[1].get<std::uint8_t>(),
                            c[2].get<std::uint8_t>(), c[3].get<std::uint8_t>()});
      areas.push_back(r.at("area").get<std::size_t>());
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::input, "'" + index_json.string() + "': " + e.what());
  }
  Labels labels(labels16.values.begin(), labels16.values.end());
  for (std::int32_t l : labels) {
    if (static_cast<std::size_t>(l) >= colors.size()) {
      fail(ErrorCode::input, "label " + std::to_string(l) + " has no entry in the region index");
    }
  }
  RegionMap map = RegionMap::from_labels(labels16.width, labels16.height, labels,
                                         std::span<const Rgba>(colors), nullptr, config);
  if (map.size() != colors.size() || !std::equal(labels.begin(), labels.end(), map.labels().begin())) {
    fail(ErrorCode::input, "label image is not a canonical region map (regions are not consecutive 4-connected components)");
  }
  for (const Region& r : map.regions()) {
    if (r.area.size() != areas[static_cast<std::size_t>(r.id)]) {
      fail(ErrorCode::input, "region " + std::to_string(r.id) + " area does not match the index");
    }
  }
  return map;
}

}  // namespace msm
