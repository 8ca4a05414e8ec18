#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "msm/engine.hpp"
#include "msm/error.hpp"
#include "oracles.hpp"

using namespace msm;

namespace {

PointSet rect_set(int w, int h, Rect r) {
  PointSet s(w, h);
  for (int y = r.y0; y < r.y1; ++y) s.insert_span(y, r.x0, r.x1);
  return s;
}

// Two-half canvas: region 0 on the left, region 1 on the right.
RegionMap halves(int w = 80, int h = 60) {
  std::vector<int> labels(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) labels[static_cast<std::size_t>(y) * w + x] = x < w / 2 ? 0 : 1;
  return fixtures::engine_regions(labels, w, h);
}

PartialStroke partial_of(const std::vector<StrokeSample>& raw, int w, int h, StrokeParams p = {}) {
  return make_partial_stroke(resample_uniform(raw, p.resample_spacing).samples, p, w, h);
}

}  // namespace

TEST_CASE("covered_regions examples") {
  const RegionMap m = halves();
  CHECK(covered_regions(rect_set(80, 60, Rect{5, 5, 20, 20}), m) == RegionSet{0});
  CHECK(covered_regions(rect_set(80, 60, Rect{30, 5, 50, 20}), m) == RegionSet{0, 1});
  CHECK(covered_regions(rect_set(80, 60, Rect{10, 5, 41, 20}), m) == RegionSet{0, 1});
  CHECK(covered_regions(PointSet(80, 60), m).empty());
}

TEST_CASE("region_resemblance examples") {
  const PointSet area = rect_set(64, 64, Rect{0, 0, 20, 20});
  CHECK(region_resemblance(area, area) == 2.0);
  CHECK(region_resemblance(rect_set(64, 64, Rect{30, 30, 40, 40}), area) == 0.0);
  CHECK(region_resemblance(rect_set(64, 64, Rect{5, 5, 15, 15}), area) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(region_resemblance(PointSet(64, 64), area) == 0.0);
  CHECK_THROWS_AS(region_resemblance(area, PointSet(64, 64)), Error);
}

TEST_CASE("boundary_resemblance examples") {
  // 500 px boundary set, 200 px bone set sharing 50 px.
  const PointSet bdy = rect_set(100, 100, Rect{0, 0, 50, 10});
  const PointSet bone = rect_set(100, 100, Rect{45, 0, 65, 10});
  REQUIRE(bdy.size() == 500);
  REQUIRE(bone.size() == 200);
  CHECK(boundary_resemblance(bone, bdy) == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(boundary_resemblance(bdy, bdy) == 2.0);
  CHECK(boundary_resemblance(rect_set(100, 100, Rect{80, 80, 90, 90}), bdy) == 0.0);
  CHECK_THROWS_AS(boundary_resemblance(bone, PointSet(100, 100)), Error);
}

TEST_CASE("score_from_counts weights the two terms") {
  const ResemblanceParams p;
  CHECK(score_from_counts(ResemblanceCounts{10, 10, 10, 5, 7, 0}, p) == doctest::Approx(0.6));
  CHECK(score_from_counts(ResemblanceCounts{10, 30, 0, 5, 5, 5}, p) == doctest::Approx(1.4));
  CHECK(score_from_counts(ResemblanceCounts{}, p) == 0.0);
  ResemblanceParams bad;
  bad.gamma = 1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("resemblance matches the pixel-count oracle on random 64x64 fixtures") {
  std::mt19937 rng(64);
  const ResemblanceParams p;
  for (int trial = 0; trial < 60; ++trial) {
    const std::vector<int> labels = fixtures::random_partition(rng, 64, 64, 8);
    const RegionMap m = fixtures::engine_regions(labels, 64, 64);
    const oracle::Regions r = oracle::regions_from_labels(labels, 64, 64, 10.0);
    REQUIRE(r.area.size() == m.size());
    const auto window = fixtures::random_window(rng, 64, 64, 6);
    const PartialStroke ps = make_partial_stroke(window, StrokeParams{110, 30, 2, 5}, 64, 64);
    const oracle::Grid f = oracle::from_points(ps.footprint), b = oracle::from_points(ps.bone_expansion);
    RegionSet cand;
    for (std::size_t id = 0; id < m.size(); ++id)
      if (rng() % 2 == 0) cand.push_back(static_cast<int>(id));
    if (cand.empty()) cand.push_back(0);
    const ResemblanceCounts c = resemblance_counts(ps, cand, m);
    const oracle::Counts o = oracle::counts(f, b, r, cand);
    CHECK(c.footprint == o.footprint);
    CHECK(c.area == o.area);
    CHECK(c.area_hits == o.area_hits);
    CHECK(c.bone == o.bone);
    CHECK(c.boundary == o.boundary);
    CHECK(c.boundary_hits == o.boundary_hits);
    const double s = resemblance(ps, cand, m, p);
    CHECK(s == doctest::Approx(oracle::score(o, p.alpha, p.beta)).epsilon(1e-12));
    CHECK(s >= 0.0);
    CHECK(s <= 2.0 * (p.alpha + p.beta) + 1e-12);
    CHECK(resemblance(ps, {}, m, p) == 0.0);
  }
}

TEST_CASE("update_target_set examples") {
  const RegionMap m = halves();
  const ResemblanceParams p;

  SUBCASE("first selection inside one region") {
    const PartialStroke ps = partial_of(fixtures::line_stroke({10, 30}, {20, 30}, 2), 80, 60, StrokeParams{110, 12, 2, 5});
    const TargetSet t = update_target_set(TargetSet{}, ps, m, p);
    CHECK(t.covered == RegionSet{0});
    CHECK(t.selected == RegionSet{0});
    CHECK(t.base.empty());
  }
  SUBCASE("uncovered regions are dropped") {
    TargetSet prev;
    prev.selected = {0, 1};
    const PartialStroke ps = partial_of(fixtures::line_stroke({60, 30}, {70, 30}, 2), 80, 60, StrokeParams{110, 12, 2, 5});
    const TargetSet t = update_target_set(prev, ps, m, p);
    CHECK(t.base == RegionSet{1});
    CHECK(t.selected == RegionSet{1});
  }
  SUBCASE("a bone along the shared boundary adds the neighbor") {
    TargetSet prev;
    prev.selected = {0};
    const PartialStroke ps = partial_of(fixtures::line_stroke({39.5, 5}, {39.5, 55}, 2), 80, 60);
    const TargetSet t = update_target_set(prev, ps, m, p);
    const oracle::Regions r = oracle::regions_from_labels(std::vector<int>(m.labels().begin(), m.labels().end()), 80, 60, 10);
    const oracle::Grid f = oracle::from_points(ps.footprint), b = oracle::from_points(ps.bone_expansion);
    const double both = oracle::score(oracle::counts(f, b, r, {0, 1}), p.alpha, p.beta);
    const double one = oracle::score(oracle::counts(f, b, r, {0}), p.alpha, p.beta);
    REQUIRE(both > p.gamma * one);
    CHECK(t.selected == RegionSet{0, 1});
  }
  SUBCASE("empty cover selects nothing") {
    PartialStroke ps;
    ps.footprint = PointSet(80, 60);
    ps.bone_expansion = PointSet(80, 60);
    TargetSet prev;
    prev.selected = {0};
    CHECK(update_target_set(prev, ps, m, p).selected.empty());
  }
}

TEST_CASE("update_target_set agrees with the oracle and keeps its invariants") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 80; ++trial) {
    const std::vector<int> labels = fixtures::random_partition(rng, 64, 64, 8);
    const RegionMap m = fixtures::engine_regions(labels, 64, 64);
    const oracle::Regions r = oracle::regions_from_labels(labels, 64, 64, 10.0);
    ResemblanceParams p;
    p.gamma = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    TargetSet prev;
    for (std::size_t id = 0; id < m.size(); ++id)
      if (rng() % 3 == 0) prev.selected.push_back(static_cast<int>(id));
    const PartialStroke ps = make_partial_stroke(fixtures::random_window(rng, 64, 64, 5), StrokeParams{110, 24, 2, 5}, 64, 64);
    const TargetSet t = update_target_set(prev, ps, m, p);
    const oracle::Step o = oracle::update(prev.selected, oracle::from_points(ps.footprint),
                                          oracle::from_points(ps.bone_expansion), r, p.alpha, p.beta, p.gamma);
    CHECK(t.covered == o.covered);
    CHECK(t.base == o.base);
    CHECK(t.selected == o.selected);
    CHECK(std::includes(t.selected.begin(), t.selected.end(), t.base.begin(), t.base.end()));
    CHECK(std::includes(t.covered.begin(), t.covered.end(), t.selected.begin(), t.selected.end()));
    CHECK(t.selected.size() <= t.base.size() + 1);
    for (int id : prev.selected)
      if (contains(t.covered, id)) CHECK(contains(t.selected, id));
  }
}

TEST_CASE("ties go to the lowest region id") {
  // Mirror-symmetric canvas: regions 0 and 2 are images of each other about x = 40.
  std::vector<int> labels(80 * 40);
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 80; ++x) labels[static_cast<std::size_t>(y) * 80 + x] = x < 30 ? 0 : (x < 50 ? 1 : 2);
  const RegionMap m = fixtures::engine_regions(labels, 80, 40);
  const PartialStroke ps = partial_of(fixtures::line_stroke({39.5, 19.5}, {39.5, 19.5}, 2), 80, 40, StrokeParams{110, 30, 2, 5});
  ResemblanceParams p;
  p.gamma = 0.01;
  TargetSet prev;
  prev.selected = {1};
  const TargetSet t = update_target_set(prev, ps, m, p);
  REQUIRE(t.candidates.size() == 2);
  REQUIRE(t.candidates[0].score == t.candidates[1].score);
  CHECK(t.selected == RegionSet{0, 1});
}

TEST_CASE("bs_select and ts_select examples") {
  const PointSet f = rect_set(40, 40, Rect{3, 3, 30, 9});
  CHECK(bs_select(f) == f);
  CHECK(bs_select(PointSet(40, 40)).empty());

  // Three regions of a long strip; a stroke along the middle one.
  std::vector<int> labels(120 * 60);
  for (int y = 0; y < 60; ++y)
    for (int x = 0; x < 120; ++x) labels[static_cast<std::size_t>(y) * 120 + x] = y < 20 ? 0 : (y < 40 ? 1 : 2);
  const RegionMap m = fixtures::engine_regions(labels, 120, 60);
  const PartialStroke ps = partial_of(fixtures::line_stroke({10, 30}, {110, 30}, 2), 120, 60, StrokeParams{110, 44, 2, 5});
  const ResemblanceParams p;
  const RegionSet covered = covered_regions(ps.footprint, m);
  REQUIRE(covered == RegionSet{0, 1, 2});
  std::vector<CandidateScore> scores;
  const RegionSet kept = ts_select(ps, covered, m, p, &scores);
  double best = 0.0;
  for (const CandidateScore& c : scores) best = std::max(best, c.score);
  RegionSet expect;
  for (const CandidateScore& c : scores)
    if (c.score >= p.ts_fraction * best) expect.push_back(c.region);
  CHECK(kept == expect);
  CHECK(contains(kept, 1));
  CHECK(ts_select(ps, {}, m, p).empty());
  CHECK(ts_select(ps, {2}, m, p) == RegionSet{2});
}

TEST_CASE("ts threshold arithmetic keeps 1.0 and 0.9 but not 0.1") {
  const double fraction = ResemblanceParams{}.ts_fraction;
  const std::vector<double> s{1.0, 0.9, 0.1};
  std::vector<int> kept;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] >= fraction * 1.0) kept.push_back(static_cast<int>(i));
  CHECK(kept == std::vector<int>{0, 1});
}

TEST_CASE("selection is translation-equivariant") {
  std::mt19937 rng(5);
  constexpr int kInner = 64, kOuter = 112;
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<int> inner = fixtures::random_partition(rng, kInner, kInner, 6);
    const auto embed = [&](int ox, int oy) {
      std::vector<int> out(static_cast<std::size_t>(kOuter) * kOuter, 1000);
      for (int y = 0; y < kInner; ++y)
        for (int x = 0; x < kInner; ++x)
          out[static_cast<std::size_t>(y + oy) * kOuter + x + ox] = inner[static_cast<std::size_t>(y) * kInner + x];
      return out;
    };
    const std::vector<Point2> way{{14, 14}, {50, 20}, {30, 48}};
    std::vector<std::vector<std::vector<PixelPos>>> runs;
    for (const auto& [ox, oy] : {std::pair{12, 15}, std::pair{36, 30}}) {
      SessionParams params;
      params.stroke.width = 20;
      params.stroke.length = 40;
      SmudgeSession s(params);
      const std::vector<int> labels = embed(ox, oy);
      s.open_canvas(fixtures::paint(labels, kOuter, kOuter));
      s.set_region_map(fixtures::engine_regions(labels, kOuter, kOuter));
      std::vector<Point2> moved;
      for (Point2 p : way) moved.push_back(Point2{p.x + ox, p.y + oy});
      const auto sets = fixtures::run_stroke(s, Tool::ss, fixtures::path_stroke(moved, 3));
      std::vector<std::vector<PixelPos>> firsts;
      for (const RegionSet& set : sets) {
        std::vector<PixelPos> f;
        for (int id : set) {
          PixelPos p = s.regions().region(id).area.points().front();
          f.push_back(PixelPos{p.x - ox, p.y - oy});
        }
        firsts.push_back(f);
      }
      runs.push_back(firsts);
    }
    CHECK(runs[0] == runs[1]);
  }
}
