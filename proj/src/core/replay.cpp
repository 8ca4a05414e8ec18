#include "msm/replay.hpp"

#include <algorithm>
#include <cmath>

#include "msm/error.hpp"
#include "msm/png_io.hpp"
#include "msm/trace.hpp"

namespace msm {

namespace {

[[noreturn]] void script_error(const std::string& where, const std::string& what) {
  fail(ErrorCode::input, "script " + where + ": " + what);
}

double number_at(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) script_error(where, std::string("missing '") + key + "'");
  if (!it->is_number()) script_error(where + "." + key, "expected a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) script_error(where + "." + key, "must be finite");
  return v;
}

StrokeSample parse_sample(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) script_error(where, "sample must be an object");
  for (const auto& [key, unused] : j.items()) {
    if (key != "x" && key != "y" && key != "t_ms" && key != "pressure") {
      script_error(where, "unknown sample key '" + key + "'");
    }
  }
  StrokeSample s;
  s.pos = Point2{number_at(j, "x", where), number_at(j, "y", where)};
  if (j.contains("t_ms")) s.t_ms = number_at(j, "t_ms", where);
  if (j.contains("pressure") && !j.at("pressure").is_null()) {
    const double p = number_at(j, "pressure", where);
    if (p < 0.0 || p > 1.0) script_error(where + ".pressure", "must lie in [0, 1]");
    s.pressure = p;
  }
  return s;
}

std::filesystem::path path_at(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string() || it->get<std::string>().empty()) {
    script_error(where, std::string("'") + key + "' must be a non-empty path string");
  }
  return std::filesystem::path(it->get<std::string>());
}

}  // namespace

std::filesystem::path Script::resolve(const std::filesystem::path& p) const {
  return p.is_absolute() ? p : base_dir / p;
}

Script parse_script(const std::filesystem::path& path) {
  const nlohmann::json doc = read_json_file(path);
  return parse_script_json(doc, path.parent_path());
}

Script parse_script_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) script_error("root", "expected an object");
  Script script;
  script.base_dir = base_dir;
  for (const auto& [key, unused] : doc.items()) {
    if (key != "canvas" && key != "strokes" && key != "params" && key != "segmentation" &&
        key != "regions" && key != "description") {
      script_error("root", "unknown key '" + key + "'");
    }
  }
  script.canvas = path_at(doc, "canvas", "root");
  if (doc.contains("params")) {
    if (!doc.at("params").is_object()) script_error("params", "expected an object");
    script.params = doc.at("params");
    apply_params(script.params);  // validate early
  }
  if (doc.contains("segmentation")) script.segmentation = parse_segmentation(doc.at("segmentation"));
  if (doc.contains("regions")) {
    const nlohmann::json& r = doc.at("regions");
    if (!r.is_object()) script_error("regions", "expected an object");
    script.region_labels = path_at(r, "labels", "regions");
    script.region_index = path_at(r, "index", "regions");
  }
  const auto strokes = doc.find("strokes");
  if (strokes == doc.end()) script_error("root", "missing 'strokes'");
  if (!strokes->is_array()) script_error("strokes", "expected an array");
  for (std::size_t i = 0; i < strokes->size(); ++i) {
    const std::string where = "strokes[" + std::to_string(i) + "]";
    const nlohmann::json& sj = (*strokes)[i];
    if (!sj.is_object()) script_error(where, "expected an object");
    ScriptStroke stroke;
    if (sj.contains("tool")) {
      if (!sj.at("tool").is_string()) script_error(where + ".tool", "expected a string");
      try {
        stroke.tool = parse_tool(sj.at("tool").get<std::string>());
      } catch (const Error& e) {
        script_error(where + ".tool", e.what());
      }
    }
    const auto samples = sj.find("samples");
    if (samples == sj.end() || !samples->is_array() || samples->empty()) {
      script_error(where, "'samples' must be a non-empty array");
    }
    for (std::size_t k = 0; k < samples->size(); ++k) {
      const std::string sw = where + ".samples[" + std::to_string(k) + "]";
      StrokeSample s = parse_sample((*samples)[k], sw);
      if (!stroke.samples.empty() && s.t_ms < stroke.samples.back().t_ms) {
        script_error(sw + ".t_ms", "timestamps must be non-decreasing");
      }
      stroke.samples.push_back(s);
    }
    script.strokes.push_back(std::move(stroke));
  }
  return script;
}

nlohmann::ordered_json sample_to_json(const StrokeSample& s) {
  nlohmann::ordered_json j;
  j["x"] = s.pos.x;
  j["y"] = s.pos.y;
  j["t_ms"] = s.t_ms;
  if (s.pressure.has_value()) j["pressure"] = *s.pressure;
  return j;
}

nlohmann::ordered_json stroke_record_to_json(const StrokeRecord& record) {
  nlohmann::ordered_json j;
  j["tool"] = std::string(to_string(record.tool));
  j["samples"] = nlohmann::ordered_json::array();
  for (const StrokeSample& s : record.samples) j["samples"].push_back(sample_to_json(s));
  return j;
}

nlohmann::ordered_json script_to_json(const Script& script) {
  nlohmann::ordered_json j;
  j["canvas"] = script.canvas.generic_string();
  if (!script.params.empty()) j["params"] = script.params;
  j["segmentation"] = segmentation_to_json(script.segmentation);
  if (script.region_labels && script.region_index) {
    j["regions"] = {{"labels", script.region_labels->generic_string()},
                    {"index", script.region_index->generic_string()}};
  }
  j["strokes"] = nlohmann::ordered_json::array();
  for (const ScriptStroke& s : script.strokes) {
    nlohmann::ordered_json sj;
    if (s.tool) sj["tool"] = std::string(to_string(*s.tool));
    sj["samples"] = nlohmann::ordered_json::array();
    for (const StrokeSample& p : s.samples) sj["samples"].push_back(sample_to_json(p));
    j["strokes"].push_back(std::move(sj));
  }
  return j;
}

TimingStats summarize(std::vector<double> values) {
  TimingStats t;
  if (values.empty()) return t;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  t.mean = sum / static_cast<double>(values.size());
  const std::size_t n = values.size();
  t.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  t.max = values.back();
  return t;
}

SessionParams resolve_params(const Script& script, const ReplayOptions& options) {
  return apply_params(options.param_overrides, apply_params(script.params));
}

RegionMap script_regions(const Script& script, const RasterImage& canvas, const SessionParams& params) {
  if (script.region_labels && script.region_index) {
    RegionMap map = load_region_map(script.resolve(*script.region_labels), script.resolve(*script.region_index),
                                    params.regions);
    if (map.width() != canvas.width() || map.height() != canvas.height()) {
      fail(ErrorCode::input, "region sidecar size does not match the canvas");
    }
    return map;
  }
  return run_segmentation(canvas, script.segmentation, params.regions);
}

ReplayRun run_replay(const Script& script, const ReplayOptions& options) {
  ReplayRun run;
  run.params = resolve_params(script, options);
  run.input = load_png(script.resolve(script.canvas));
  run.regions = script_regions(script, run.input, run.params);

  SmudgeSession session(run.params);
  session.open_canvas(run.input);
  session.set_region_map(run.regions);

  std::optional<TraceWriter> trace;
  if (!options.trace.empty()) trace.emplace(options.trace);

  for (std::size_t i = 0; i < script.strokes.size(); ++i) {
    const ScriptStroke& stroke = script.strokes[i];
    const Tool tool = options.tool.value_or(stroke.tool.value_or(run.params.tool));
    const RasterImage before = session.canvas();
    StrokeStats stats;
    stats.tool = tool;
    stats.samples = stroke.samples.size();

    session.begin_stroke(tool, stroke.samples.front());
    for (std::size_t k = 1; k < stroke.samples.size(); ++k) {
      const TileDiff diff = session.advance(stroke.samples[k]);
      stats.stamps += diff.stamps;
      if (diff.clamped) ++stats.clamped_samples;
    }
    session.end_stroke();

    std::vector<double> sel, smudge;
    for (const AdvanceTiming& t : session.timings()) {
      sel.push_back(t.selection_ms);
      smudge.push_back(t.smudge_ms);
    }
    stats.selection_ms = summarize(std::move(sel));
    stats.smudge_ms = summarize(std::move(smudge));
    stats.ever_selected = session.ever_selected();

    const RasterImage& after = session.canvas();
    for (int y = 0; y < after.height(); ++y) {
      for (int x = 0; x < after.width(); ++x) {
        if (after.at(x, y) == before.at(x, y)) continue;
        ++stats.pixels_changed;
        if (tool == Tool::bs || !contains(stats.ever_selected, run.regions.label_at(x, y))) {
          ++stats.pixels_changed_outside_selection;
        }
      }
    }
    run.pixels_changed_outside_selection += stats.pixels_changed_outside_selection;
    if (trace) trace->write(i, session.trace());
    if (options.keep_traces) run.traces.push_back(session.trace());
    run.strokes.push_back(stats);
  }
  run.output = session.canvas();
  if (!options.out.empty()) save_png(options.out, run.output);
  return run;
}

namespace {

nlohmann::ordered_json timing_json(const TimingStats& t) {
  return {{"mean", t.mean}, {"median", t.median}, {"max", t.max}};
}

}  // namespace

nlohmann::ordered_json replay_report(const ReplayRun& run, const ReplayOptions& options) {
  nlohmann::ordered_json j;
  j["format"] = "msm-replay-report";
  j["version"] = 1;
  j["output"] = options.out.empty() ? nlohmann::ordered_json(nullptr)
                                    : nlohmann::ordered_json(options.out.generic_string());
  j["trace"] = options.trace.empty() ? nlohmann::ordered_json(nullptr)
                                     : nlohmann::ordered_json(options.trace.generic_string());
  j["width"] = run.output.width();
  j["height"] = run.output.height();
  j["regions"] = run.regions.size();
  j["params"] = params_to_json(run.params);
  j["pixels_changed_outside_selection"] = run.pixels_changed_outside_selection;
  j["strokes"] = nlohmann::ordered_json::array();
  for (const StrokeStats& s : run.strokes) {
    nlohmann::ordered_json sj;
    sj["tool"] = std::string(to_string(s.tool));
    sj["samples"] = s.samples;
    sj["stamps"] = s.stamps;
    sj["clamped_samples"] = s.clamped_samples;
    sj["selection_ms"] = timing_json(s.selection_ms);
    sj["smudge_ms"] = timing_json(s.smudge_ms);
    sj["pixels_changed"] = s.pixels_changed;
    sj["pixels_changed_outside_selection"] = s.pixels_changed_outside_selection;
    sj["ever_selected"] = s.ever_selected;
    j["strokes"].push_back(std::move(sj));
  }
  return j;
}

}  // namespace msm
