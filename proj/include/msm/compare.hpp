#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "msm/replay.hpp"

namespace msm {

/// Mean over 4-adjacent pixel pairs with different labels in `map` of the
/// largest per-channel absolute difference in `image`.
double boundary_sharpness(const RasterImage& image, const RegionMap& map);

/// Same measure restricted to pairs whose labels are exactly {a, b}.
double boundary_sharpness(const RasterImage& image, const RegionMap& map, int a, int b);

/// True when the union of the areas of `selected` is 4-connected (vacuously
/// true for zero regions).
bool selection_connected(const RegionSet& selected, const RegionMap& map);

/// Expected outcomes stored beside a scenario.
struct ScenarioExpectation {
  std::optional<RegionSet> intended;                       ///< regions the stroke is meant to smudge
  std::optional<std::vector<std::vector<RegionSet>>> ss_selected;  ///< per stroke, per timestamp
  std::optional<int> unwanted_region;
  std::optional<bool> ts_discontinuous;
};

ScenarioExpectation parse_expectation(const nlohmann::json& doc);

struct ToolMetrics {
  Tool tool = Tool::ss;
  std::size_t pixels_changed = 0;
  std::size_t pixels_changed_outside_selection = 0;
  std::optional<std::size_t> outside_intent_pixels;
  std::optional<std::size_t> unwanted_region_pixels;
  std::optional<bool> continuity;  ///< absent for BS, which selects no regions
  std::size_t discontinuous_timestamps = 0;
  std::size_t timestamps = 0;
  double sharpness_before = 0.0;
  double sharpness_after = 0.0;
  double boundary_blur = 0.0;  ///< max(0, 1 - after / before)
  std::optional<bool> matches_expected;
  std::size_t mismatched_timestamps = 0;
  ReplayRun run;
};

struct CompareResult {
  std::vector<ToolMetrics> tools;  ///< ss, bs, ts
  ScenarioExpectation expectation;
};

/// Replays the scenario's script once per tool. Writes <out_dir>/{ss,bs,ts}.png,
/// <out_dir>/{ss,bs,ts}.trace.jsonl and <out_dir>/metrics.json when out_dir is
/// non-empty.
CompareResult run_compare(const std::filesystem::path& scenario_dir, const std::filesystem::path& out_dir,
                          const nlohmann::json& param_overrides = nlohmann::json::object());

nlohmann::ordered_json compare_metrics_json(const CompareResult& result);

}  // namespace msm
