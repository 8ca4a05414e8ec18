#include "fixtures.hpp"

#include <cmath>

namespace fixtures {

std::filesystem::path fixture_dir() { return MSM_FIXTURE_DIR; }

std::vector<int> random_partition(std::mt19937& rng, int w, int h, int shapes) {
  std::vector<int> labels(static_cast<std::size_t>(w) * h, 0);
  std::uniform_int_distribution<int> count(1, shapes);
  const int n = count(rng);
  for (int s = 1; s <= n; ++s) {
    std::uniform_int_distribution<int> px(0, w - 1), py(0, h - 1);
    std::uniform_int_distribution<int> size(3, std::max(4, w / 2));
    const int cx = px(rng), cy = py(rng), a = size(rng), b = size(rng);
    const bool disk = rng() % 2 == 0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const bool in = disk ? (x - cx) * (x - cx) + (y - cy) * (y - cy) <= (a / 2) * (a / 2)
                             : std::abs(x - cx) <= a / 2 && std::abs(y - cy) <= b / 2;
        if (in) labels[static_cast<std::size_t>(y) * w + x] = s;
      }
    }
  }
  return labels;
}

msm::RasterImage paint(const std::vector<int>& labels, int w, int h) {
  msm::RasterImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto v = static_cast<unsigned>(labels[static_cast<std::size_t>(y) * w + x]);
      img.set(x, y, msm::Rgba{static_cast<std::uint8_t>(40 + 37 * v % 200), static_cast<std::uint8_t>(90 + 71 * v % 160),
                              static_cast<std::uint8_t>(200 - 53 * v % 180), 255});
    }
  }
  return img;
}

std::vector<msm::StrokeSample> random_window(std::mt19937& rng, int w, int h, int max_samples) {
  std::uniform_int_distribution<int> n(1, max_samples);
  std::uniform_real_distribution<double> px(-4.0, w + 3.0), py(-4.0, h + 3.0);
  std::vector<msm::StrokeSample> out;
  const int k = n(rng);
  for (int i = 0; i < k; ++i) out.push_back(msm::StrokeSample{msm::Point2{px(rng), py(rng)}, i * 10.0, std::nullopt});
  return out;
}

msm::RegionMap engine_regions(const std::vector<int>& labels, int w, int h, double dilation) {
  const std::vector<std::int32_t> l(labels.begin(), labels.end());
  const msm::RasterImage img = paint(labels, w, h);
  return msm::RegionMap::from_labels(w, h, l, std::nullopt, &img, msm::RegionConfig{dilation});
}

std::vector<msm::StrokeSample> line_stroke(msm::Point2 a, msm::Point2 b, double step, double t0) {
  const double len = msm::distance(a, b);
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  std::vector<msm::StrokeSample> out;
  for (int i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / n;
    out.push_back(msm::StrokeSample{msm::Point2{a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u}, t0 + i * 8.0, std::nullopt});
  }
  return out;
}

std::vector<msm::StrokeSample> path_stroke(const std::vector<msm::Point2>& waypoints, double step) {
  std::vector<msm::StrokeSample> out{msm::StrokeSample{waypoints.front(), 0.0, std::nullopt}};
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    std::vector<msm::StrokeSample> seg = line_stroke(waypoints[i - 1], waypoints[i], step, out.back().t_ms);
    out.insert(out.end(), seg.begin() + 1, seg.end());
  }
  return out;
}

std::vector<msm::RegionSet> run_stroke(msm::SmudgeSession& session, msm::Tool tool,
                                       const std::vector<msm::StrokeSample>& raw) {
  std::vector<msm::RegionSet> out;
  session.begin_stroke(tool, raw.front());
  out.push_back(session.targets().selected);
  for (std::size_t i = 1; i < raw.size(); ++i) {
    session.advance(raw[i]);
    out.push_back(session.targets().selected);
  }
  session.end_stroke();
  return out;
}

}  // namespace fixtures
