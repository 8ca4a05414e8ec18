#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "msm/point_set.hpp"
#include "msm/regions.hpp"
#include "msm/stroke.hpp"

namespace msm {

/// Sorted, duplicate-free region ids.
using RegionSet = std::vector<int>;

enum class Tool { ss, bs, ts };

std::string_view to_string(Tool tool);
Tool parse_tool(std::string_view name);

/// Weights of the combined score and the acceptance threshold.
struct ResemblanceParams {
  double alpha = 0.3;        ///< region resemblance weight
  double beta = 0.7;         ///< boundary resemblance weight
  double gamma = 0.7;        ///< a one-region extension must beat gamma * R(base)
  double ts_fraction = 0.85; ///< TS baseline keeps scores >= fraction * max

  void validate() const;
};

struct CandidateScore {
  int region = 0;   ///< region added to the base set
  double score = 0.0;
};

/// Selection state at one timestamp. base <= selected <= covered.
struct TargetSet {
  RegionSet covered;
  RegionSet base;
  RegionSet selected;
  long long t = -1;  ///< -1 before the first update
  double base_score = 0.0;
  std::vector<CandidateScore> candidates;  ///< in increasing region order
};

/// Ids of regions whose area meets the footprint in at least one pixel.
RegionSet covered_regions(const PointSet& footprint, const RegionMap& map);

/// |F & A| / |A| + |F & A| / |F|; 0 for an empty footprint.
double region_resemblance(const PointSet& footprint, const PointSet& candidate_area);

/// |E & B| / |B| + |E & B| / |E|; 0 for an empty bone expansion.
double boundary_resemblance(const PointSet& bone_exp, const PointSet& candidate_dilated_boundary);

/// Integer ingredients of a resemblance score, exposed for verification.
struct ResemblanceCounts {
  std::size_t footprint = 0;
  std::size_t area = 0;
  std::size_t area_hits = 0;
  std::size_t bone = 0;
  std::size_t boundary = 0;
  std::size_t boundary_hits = 0;
};

double score_from_counts(const ResemblanceCounts& c, const ResemblanceParams& params);

/// alpha * R_r(footprint, union of areas) + beta * R_b(bone, union of dilated
/// boundaries). The empty candidate set scores 0.
double resemblance(const PartialStroke& partial, const RegionSet& candidate, const RegionMap& map,
                   const ResemblanceParams& params);

ResemblanceCounts resemblance_counts(const PartialStroke& partial, const RegionSet& candidate,
                                     const RegionMap& map);

/// One timestamp of the dynamic selection: drop uncovered regions, then accept
/// the best single-region extension if it beats gamma times the base score.
TargetSet update_target_set(const TargetSet& prev, const PartialStroke& partial, const RegionMap& map,
                            const ResemblanceParams& params);

/// Baseline: the raw footprint is the smudge mask.
PointSet bs_select(const PointSet& footprint);

/// Baseline: every covered region whose singleton score reaches
/// ts_fraction * (best singleton score).
RegionSet ts_select(const PartialStroke& partial, const RegionSet& covered, const RegionMap& map,
                    const ResemblanceParams& params, std::vector<CandidateScore>* scores = nullptr);

/// Union of the areas of `regions`.
PointSet union_area(const RegionSet& regions, const RegionMap& map);

bool contains(const RegionSet& set, int id);
RegionSet set_intersection(const RegionSet& a, const RegionSet& b);
RegionSet set_union(const RegionSet& a, const RegionSet& b);
RegionSet set_difference(const RegionSet& a, const RegionSet& b);

}  // namespace msm
