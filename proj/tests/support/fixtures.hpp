#pragma once

#include <filesystem>
#include <random>
#include <vector>

#include "msm/engine.hpp"
#include "oracles.hpp"

namespace fixtures {

std::filesystem::path fixture_dir();

/// Random partition label grid: overlapping rectangles and disks painted
/// over a background, with up to `shapes` shapes.
std::vector<int> random_partition(std::mt19937& rng, int w, int h, int shapes);

/// Distinct, deterministic color per label value.
msm::RasterImage paint(const std::vector<int>& labels, int w, int h);

/// Random window of 1..max_samples points inside (or slightly outside) the grid.
std::vector<msm::StrokeSample> random_window(std::mt19937& rng, int w, int h, int max_samples);

msm::RegionMap engine_regions(const std::vector<int>& labels, int w, int h, double dilation = 10.0);

/// Straight raw stroke from a to b with samples every `step` pixels.
std::vector<msm::StrokeSample> line_stroke(msm::Point2 a, msm::Point2 b, double step, double t0 = 0.0);
/// Raw stroke through the given waypoints.
std::vector<msm::StrokeSample> path_stroke(const std::vector<msm::Point2>& waypoints, double step);

/// Runs one stroke on `session`; returns the selected set after every sample.
std::vector<msm::RegionSet> run_stroke(msm::SmudgeSession& session, msm::Tool tool,
                                       const std::vector<msm::StrokeSample>& raw);

}  // namespace fixtures
