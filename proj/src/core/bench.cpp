#include "msm/bench.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "msm/error.hpp"

namespace msm {

std::optional<PublishedReference> published_reference(int size) {
  if (size == 512) return PublishedReference{1.39, 20.83, 720, 48};
  if (size == 1024) return PublishedReference{4.17, 66.67, 240, 15};
  return std::nullopt;
}

RasterImage synthetic_painting(int size) {
  require(size >= 64 && size <= kMaxImageSide, "bench size must lie in [64, 8192]");
  std::mt19937 rng(20240611u);
  std::uniform_int_distribution<int> channel(0, 255);
  const auto color = [&] {
    return Rgba{static_cast<std::uint8_t>(channel(rng)), static_cast<std::uint8_t>(channel(rng)),
                static_cast<std::uint8_t>(channel(rng)), 255};
  };
  RasterImage img(size, size, Rgba{240, 236, 228, 255});
  // 64 px cells inset by a background gutter, so the background is one
  // region whose boundary spans the canvas.
  const int cell = 64;
  const int gutter = 6;
  for (int cy = 0; cy * cell < size; ++cy) {
    for (int cx = 0; cx * cell < size; ++cx) {
      const Rect r = intersect(Rect{cx * cell + gutter, cy * cell + gutter, (cx + 1) * cell, (cy + 1) * cell},
                               img.bounds());
      img.fill_rect(r, color());
      if ((cx + cy) % 2 == 0) {
        const Rgba disk = color();
        const double ox = (r.x0 + r.x1 - 1) / 2.0;
        const double oy = (r.y0 + r.y1 - 1) / 2.0;
        const double rad = r.width() * 0.3;
        for (int y = r.y0; y < r.y1; ++y) {
          for (int x = r.x0; x < r.x1; ++x) {
            if ((x - ox) * (x - ox) + (y - oy) * (y - oy) <= rad * rad) img.set(x, y, disk);
          }
        }
      }
    }
  }
  return img;
}

BenchResult run_bench(int size, int iterations, const SessionParams& params) {
  if (iterations < 1) fail(ErrorCode::invalid_argument, "need \xe2\x89\xa5 1 iteration");
  BenchResult result;
  result.size = size;
  result.iterations = iterations;
  SmudgeSession session(params);
  session.open_canvas(synthetic_painting(size));
  session.segment_flat();
  result.regions = session.regions().size();

  // Lissajous path walked at 6 px per sample, 200 samples per stroke.
  const double c = size / 2.0;
  const double a = size * 0.4;
  const auto curve = [&](double u) { return Point2{c + a * std::sin(u), c + a * std::sin(1.3 * u + 0.7)}; };
  double u = 0.0;
  const auto next_point = [&] {
    const Point2 from = curve(u);
    while (distance(from, curve(u)) < 6.0) u += 1e-3;
    return curve(u);
  };
  const int per_stroke = 200;
  std::vector<double> sel, adv;
  while (static_cast<int>(adv.size()) < iterations) {
    session.begin_stroke(Tool::ss, StrokeSample{next_point(), 0.0, std::nullopt});
    for (int k = 1; k < per_stroke && static_cast<int>(adv.size()) < iterations; ++k) {
      const TileDiff d = session.advance(StrokeSample{next_point(), k * 8.0, std::nullopt});
      result.stamps += d.stamps;
      sel.push_back(session.timings().back().selection_ms);
      adv.push_back(session.timings().back().smudge_ms);
    }
    session.end_stroke();
    session.undo();
  }
  result.selection_ms = summarize(std::move(sel));
  result.advance_ms = summarize(std::move(adv));
  return result;
}

nlohmann::ordered_json bench_report(const BenchResult& r) {
  nlohmann::ordered_json j;
  j["format"] = "msm-bench";
  j["version"] = 1;
  j["size"] = r.size;
  j["iterations"] = r.iterations;
  j["regions"] = r.regions;
  j["stamps"] = r.stamps;
  j["selection_ms"] = {{"mean", r.selection_ms.mean}, {"median", r.selection_ms.median}, {"max", r.selection_ms.max}};
  j["smudge_ms"] = {{"mean", r.advance_ms.mean}, {"median", r.advance_ms.median}, {"max", r.advance_ms.max}};
  if (const auto ref = published_reference(r.size)) {
    j["reference"] = {{"selection_ms", ref->selection_ms},
                      {"smudge_ms", ref->smudge_ms},
                      {"selection_fps", ref->selection_fps},
                      {"smudge_fps", ref->smudge_fps}};
  } else {
    j["reference"] = nullptr;
  }
  return j;
}

std::string bench_table(const BenchResult& r) {
  char buf[512];
  std::string out;
  std::snprintf(buf, sizeof buf, "canvas %dx%d, %zu regions, %d iterations, %zu stamps\n", r.size, r.size,
                r.regions, r.iterations, r.stamps);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-10s %14s %14s %12s %12s\n", "", "selection ms", "smudge ms", "sel fps",
                "smudge fps");
  out += buf;
  const auto fps = [](double ms) { return ms > 0.0 ? 1000.0 / ms : 0.0; };
  std::snprintf(buf, sizeof buf, "%-10s %14.3f %14.3f %12.0f %12.0f\n", "median", r.selection_ms.median,
                r.advance_ms.median, fps(r.selection_ms.median), fps(r.advance_ms.median));
  out += buf;
  std::snprintf(buf, sizeof buf, "%-10s %14.3f %14.3f %12.0f %12.0f\n", "mean", r.selection_ms.mean,
                r.advance_ms.mean, fps(r.selection_ms.mean), fps(r.advance_ms.mean));
  out += buf;
  if (const auto ref = published_reference(r.size)) {
    std::snprintf(buf, sizeof buf, "%-10s %14.2f %14.2f %8.0f fps %8.0f fps\n", "reference", ref->selection_ms,
                  ref->smudge_ms, static_cast<double>(ref->selection_fps), static_cast<double>(ref->smudge_fps));
  } else {
    std::snprintf(buf, sizeof buf, "%-10s %14s %14s\n", "reference", "n/a", "n/a");
  }
  out += buf;
  return out;
}

}  // namespace msm
