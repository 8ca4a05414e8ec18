#include "msm/selection.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "msm/error.hpp"

namespace msm {

std::string_view to_string(Tool tool) {
  switch (tool) {
    case Tool::ss: return "ss";
    case Tool::bs: return "bs";
    case Tool::ts: return "ts";
  }
  return "ss";
}

Tool parse_tool(std::string_view name) {
  if (name == "ss" || name == "SS") return Tool::ss;
  if (name == "bs" || name == "BS") return Tool::bs;
  if (name == "ts" || name == "TS") return Tool::ts;
  fail(ErrorCode::input, "unknown tool '" + std::string(name) + "' (expected ss, bs or ts)");
}

void ResemblanceParams::validate() const {
  const auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  require(open_unit(alpha), "alpha must lie in (0, 1)");
  require(open_unit(beta), "beta must lie in (0, 1)");
  require(open_unit(gamma), "gamma must lie in (0, 1)");
  require(ts_fraction > 0.0 && ts_fraction <= 1.0, "ts_fraction must lie in (0, 1]");
}

bool contains(const RegionSet& set, int id) { return std::binary_search(set.begin(), set.end(), id); }

RegionSet set_intersection(const RegionSet& a, const RegionSet& b) {
  RegionSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

RegionSet set_union(const RegionSet& a, const RegionSet& b) {
  RegionSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

RegionSet set_difference(const RegionSet& a, const RegionSet& b) {
  RegionSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

namespace {

// Footprint pixel count per region label, only for labels that occur.
std::vector<std::size_t> hits_per_region(const PointSet& footprint, const RegionMap& map) {
  require(footprint.width() == map.width() && footprint.height() == map.height(),
          "footprint and region map use different grids");
  std::vector<std::size_t> hits(map.size(), 0);
  footprint.for_each([&](int x, int y) { ++hits[static_cast<std::size_t>(map.label_at(x, y))]; });
  return hits;
}

RegionSet nonzero_ids(const std::vector<std::size_t>& hits) {
  RegionSet out;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits[i] > 0) out.push_back(static_cast<int>(i));
  }
  return out;
}

double ratio_pair(std::size_t hits, std::size_t target, std::size_t probe) {
  if (probe == 0) return 0.0;
  return static_cast<double>(hits) / static_cast<double>(target) +
         static_cast<double>(hits) / static_cast<double>(probe);
}

PointSet union_boundary(const RegionSet& regions, const RegionMap& map) {
  PointSet out(map.width(), map.height());
  for (int id : regions) out |= map.region(id).dilated_boundary;
  return out;
}

}  // namespace

RegionSet covered_regions(const PointSet& footprint, const RegionMap& map) {
  return nonzero_ids(hits_per_region(footprint, map));
}

double region_resemblance(const PointSet& footprint, const PointSet& candidate_area) {
  require(!candidate_area.empty(), "candidate area is empty");
  return ratio_pair(intersection_count(footprint, candidate_area), candidate_area.size(), footprint.size());
}

double boundary_resemblance(const PointSet& bone_exp, const PointSet& candidate_dilated_boundary) {
  require(!candidate_dilated_boundary.empty(), "candidate boundary set is empty");
  return ratio_pair(intersection_count(bone_exp, candidate_dilated_boundary),
                    candidate_dilated_boundary.size(), bone_exp.size());
}

double score_from_counts(const ResemblanceCounts& c, const ResemblanceParams& params) {
  if (c.area == 0) return 0.0;
  const double rr = ratio_pair(c.area_hits, c.area, c.footprint);
  const double rb = c.boundary == 0 ? 0.0 : ratio_pair(c.boundary_hits, c.boundary, c.bone);
  return params.alpha * rr + params.beta * rb;
}

ResemblanceCounts resemblance_counts(const PartialStroke& partial, const RegionSet& candidate,
                                     const RegionMap& map) {
  ResemblanceCounts c;
  c.footprint = partial.footprint.size();
  c.bone = partial.bone_expansion.size();
  for (int id : candidate) {
    const Region& r = map.region(id);
    c.area += r.area.size();
    c.area_hits += intersection_count(partial.footprint, r.area);
  }
  const PointSet boundary = union_boundary(candidate, map);
  c.boundary = boundary.size();
  c.boundary_hits = intersection_count(partial.bone_expansion, boundary);
  return c;
}

double resemblance(const PartialStroke& partial, const RegionSet& candidate, const RegionMap& map,
                   const ResemblanceParams& params) {
  if (candidate.empty()) return 0.0;
  return score_from_counts(resemblance_counts(partial, candidate, map), params);
}

TargetSet update_target_set(const TargetSet& prev, const PartialStroke& partial, const RegionMap& map,
                            const ResemblanceParams& params) {
  TargetSet next;
  next.t = prev.t + 1;
  const std::vector<std::size_t> hits = hits_per_region(partial.footprint, map);
  next.covered = nonzero_ids(hits);
  next.base = set_intersection(prev.selected, next.covered);

  // Areas are disjoint, so area terms add up; dilated boundaries overlap and
  // need a real union.
  ResemblanceCounts base;
  base.footprint = partial.footprint.size();
  base.bone = partial.bone_expansion.size();
  for (int id : next.base) {
    base.area += map.region(id).area.size();
    base.area_hits += hits[static_cast<std::size_t>(id)];
  }
  const PointSet base_boundary = union_boundary(next.base, map);
  base.boundary = base_boundary.size();
  base.boundary_hits = intersection_count(partial.bone_expansion, base_boundary);
  next.base_score = next.base.empty() ? 0.0 : score_from_counts(base, params);

  int best = -1;
  double best_score = 0.0;
  for (int id : set_difference(next.covered, next.base)) {
    const Region& r = map.region(id);
    ResemblanceCounts c = base;
    c.area += r.area.size();
    c.area_hits += hits[static_cast<std::size_t>(id)];
    const PointSet boundary = set_union(base_boundary, r.dilated_boundary);
    c.boundary = boundary.size();
    c.boundary_hits = intersection_count(partial.bone_expansion, boundary);
    const double score = score_from_counts(c, params);
    next.candidates.push_back(CandidateScore{id, score});
    if (best < 0 || score > best_score) {
      best = id;
      best_score = score;
    }
  }
  next.selected = next.base;
  if (best >= 0 && best_score > params.gamma * next.base_score) {
    next.selected = set_union(next.base, RegionSet{best});
  }
  return next;
}

PointSet bs_select(const PointSet& footprint) { return footprint; }

RegionSet ts_select(const PartialStroke& partial, const RegionSet& covered, const RegionMap& map,
                    const ResemblanceParams& params, std::vector<CandidateScore>* scores) {
  require(params.ts_fraction > 0.0 && params.ts_fraction <= 1.0, "ts_fraction must lie in (0, 1]");
  std::vector<CandidateScore> all;
  double best = 0.0;
  for (int id : covered) {
    const double s = resemblance(partial, RegionSet{id}, map, params);
    all.push_back(CandidateScore{id, s});
    best = std::max(best, s);
  }
  RegionSet out;
  for (const CandidateScore& c : all) {
    if (c.score >= params.ts_fraction * best) out.push_back(c.region);
  }
  if (scores != nullptr) *scores = std::move(all);
  return out;
}

PointSet union_area(const RegionSet& regions, const RegionMap& map) {
  PointSet out(map.width(), map.height());
  for (int id : regions) out |= map.region(id).area;
  return out;
}

}  // namespace msm
