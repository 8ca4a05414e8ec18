#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "msm/engine.hpp"
#include "msm/params.hpp"

namespace msm {

struct ScriptStroke {
  std::optional<Tool> tool;  ///< falls back to the session tool
  std::vector<StrokeSample> samples;
};

/// Stroke script: {"canvas": path, "strokes": [{"tool", "samples": [{x, y,
/// t_ms, pressure}]}], "params": {...}, "segmentation": {...}, "regions":
/// {"labels": path, "index": path}}. Relative paths resolve against base_dir.
struct Script {
  std::filesystem::path canvas;
  std::filesystem::path base_dir;
  std::vector<ScriptStroke> strokes;
  nlohmann::json params = nlohmann::json::object();
  SegmentationSpec segmentation;
  std::optional<std::filesystem::path> region_labels;
  std::optional<std::filesystem::path> region_index;

  std::filesystem::path resolve(const std::filesystem::path& p) const;
};

Script parse_script(const std::filesystem::path& path);
Script parse_script_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
nlohmann::ordered_json script_to_json(const Script& script);

nlohmann::ordered_json sample_to_json(const StrokeSample& s);
nlohmann::ordered_json stroke_record_to_json(const StrokeRecord& record);

struct ReplayOptions {
  nlohmann::json param_overrides = nlohmann::json::object();  ///< applied after script params
  std::optional<Tool> tool;                                   ///< forces every stroke's tool
  std::filesystem::path out;                                  ///< output PNG; empty skips writing
  std::filesystem::path trace;                                ///< JSON-lines trace; empty skips
  bool keep_traces = false;                                   ///< retain per-stroke TargetSets
};

struct TimingStats {
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;
};

TimingStats summarize(std::vector<double> values);

struct StrokeStats {
  Tool tool = Tool::ss;
  std::size_t samples = 0;
  std::size_t stamps = 0;
  TimingStats selection_ms;
  TimingStats smudge_ms;
  std::size_t pixels_changed = 0;
  /// Changed pixels outside the regions selected at any timestamp of the
  /// stroke. BS selects no regions, so every changed pixel counts.
  std::size_t pixels_changed_outside_selection = 0;
  RegionSet ever_selected;
  std::size_t clamped_samples = 0;
};

struct ReplayRun {
  RasterImage input;
  RasterImage output;
  RegionMap regions;
  SessionParams params;
  std::vector<StrokeStats> strokes;
  std::vector<std::vector<TargetSet>> traces;  ///< filled when keep_traces
  std::size_t pixels_changed_outside_selection = 0;
};

SessionParams resolve_params(const Script& script, const ReplayOptions& options);
RegionMap script_regions(const Script& script, const RasterImage& canvas, const SessionParams& params);

ReplayRun run_replay(const Script& script, const ReplayOptions& options);

/// Report JSON (schema in docs/report-schema.md).
nlohmann::ordered_json replay_report(const ReplayRun& run, const ReplayOptions& options);

}  // namespace msm
