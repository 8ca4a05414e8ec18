#include "msm/compare.hpp"

#include <cstdlib>
#include <fstream>

#include "msm/error.hpp"

namespace msm {

namespace {

int max_channel_delta(Rgba a, Rgba b) {
  int m = 0;
  for (int c = 0; c < 4; ++c) m = std::max(m, std::abs(int{a[c]} - int{b[c]}));
  return m;
}

template <class Accept>
double edge_mean(const RasterImage& image, const RegionMap& map, Accept accept) {
  require(image.width() == map.width() && image.height() == map.height(), "image and region map differ in size");
  double sum = 0.0;
  std::size_t pairs = 0;
  const auto visit = [&](int x0, int y0, int x1, int y1) {
    const int la = map.label_at(x0, y0);
    const int lb = map.label_at(x1, y1);
    if (la == lb || !accept(la, lb)) return;
    sum += max_channel_delta(image.at(x0, y0), image.at(x1, y1));
    ++pairs;
  };
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (x + 1 < image.width()) visit(x, y, x + 1, y);
      if (y + 1 < image.height()) visit(x, y, x, y + 1);
    }
  }
  return pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
}

RegionSet region_set_from(const nlohmann::json& v, const std::string& where) {
  if (!v.is_array()) fail(ErrorCode::input, "expected.json " + where + ": expected an array of region ids");
  RegionSet s;
  for (const auto& e : v) {
    if (!e.is_number_integer()) fail(ErrorCode::input, "expected.json " + where + ": ids must be integers");
    s.push_back(e.get<int>());
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace

double boundary_sharpness(const RasterImage& image, const RegionMap& map) {
  return edge_mean(image, map, [](int, int) { return true; });
}

double boundary_sharpness(const RasterImage& image, const RegionMap& map, int a, int b) {
  return edge_mean(image, map, [a, b](int la, int lb) { return (la == a && lb == b) || (la == b && lb == a); });
}

bool selection_connected(const RegionSet& selected, const RegionMap& map) {
  if (selected.size() <= 1) return true;
  // Region areas are 4-connected, so the union is connected iff the region
  // adjacency graph restricted to `selected` is.
  std::vector<int> parent(selected.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  const auto find = [&](int i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  };
  const auto slot = [&](int label) -> int {
    const auto it = std::lower_bound(selected.begin(), selected.end(), label);
    return it != selected.end() && *it == label ? static_cast<int>(it - selected.begin()) : -1;
  };
  const auto join = [&](int la, int lb) {
    if (la == lb) return;
    const int a = slot(la);
    const int b = slot(lb);
    if (a < 0 || b < 0) return;
    parent[static_cast<std::size_t>(find(a))] = find(b);
  };
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (x + 1 < map.width()) join(map.label_at(x, y), map.label_at(x + 1, y));
      if (y + 1 < map.height()) join(map.label_at(x, y), map.label_at(x, y + 1));
    }
  }
  const int root = find(0);
  for (std::size_t i = 1; i < selected.size(); ++i) {
    if (find(static_cast<int>(i)) != root) return false;
  }
  return true;
}

ScenarioExpectation parse_expectation(const nlohmann::json& doc) {
  ScenarioExpectation e;
  if (doc.is_null()) return e;
  if (!doc.is_object()) fail(ErrorCode::input, "expected.json must be an object");
  if (doc.contains("intended_regions")) e.intended = region_set_from(doc.at("intended_regions"), "intended_regions");
  if (doc.contains("unwanted_region")) {
    if (!doc.at("unwanted_region").is_number_integer()) fail(ErrorCode::input, "expected.json unwanted_region must be an integer");
    e.unwanted_region = doc.at("unwanted_region").get<int>();
  }
  if (doc.contains("ts_discontinuous")) {
    if (!doc.at("ts_discontinuous").is_boolean()) fail(ErrorCode::input, "expected.json ts_discontinuous must be a boolean");
    e.ts_discontinuous = doc.at("ts_discontinuous").get<bool>();
  }
  if (doc.contains("ss_selected")) {
    const nlohmann::json& strokes = doc.at("ss_selected");
    if (!strokes.is_array()) fail(ErrorCode::input, "expected.json ss_selected must be an array per stroke");
    std::vector<std::vector<RegionSet>> all;
    for (std::size_t i = 0; i < strokes.size(); ++i) {
      if (!strokes[i].is_array()) fail(ErrorCode::input, "expected.json ss_selected entries must be arrays");
      std::vector<RegionSet> per_t;
      for (std::size_t t = 0; t < strokes[i].size(); ++t) {
        per_t.push_back(region_set_from(strokes[i][t], "ss_selected[" + std::to_string(i) + "][" + std::to_string(t) + "]"));
      }
      all.push_back(std::move(per_t));
    }
    e.ss_selected = std::move(all);
  }
  return e;
}

CompareResult run_compare(const std::filesystem::path& scenario_dir, const std::filesystem::path& out_dir,
                          const nlohmann::json& param_overrides) {
  const std::filesystem::path script_path = scenario_dir / "script.json";
  if (!std::filesystem::exists(script_path)) fail(ErrorCode::input, "scenario has no script.json: " + scenario_dir.string());
  const Script script = parse_script(script_path);
  CompareResult result;
  const std::filesystem::path expected_path = scenario_dir / "expected.json";
  if (std::filesystem::exists(expected_path)) result.expectation = parse_expectation(read_json_file(expected_path));
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  for (Tool tool : {Tool::ss, Tool::bs, Tool::ts}) {
    ReplayOptions options;
    options.param_overrides = param_overrides;
    options.tool = tool;
    options.keep_traces = true;
    const std::string name(to_string(tool));
    if (!out_dir.empty()) {
      options.out = out_dir / (name + ".png");
      options.trace = out_dir / (name + ".trace.jsonl");
    }
    ToolMetrics m;
    m.tool = tool;
    m.run = run_replay(script, options);
    const ReplayRun& run = m.run;
    m.pixels_changed_outside_selection = run.pixels_changed_outside_selection;
    std::size_t outside_intent = 0, unwanted = 0;
    for (int y = 0; y < run.input.height(); ++y) {
      for (int x = 0; x < run.input.width(); ++x) {
        if (run.input.at(x, y) == run.output.at(x, y)) continue;
        ++m.pixels_changed;
        const int label = run.regions.label_at(x, y);
        if (result.expectation.intended && !contains(*result.expectation.intended, label)) ++outside_intent;
        if (result.expectation.unwanted_region && label == *result.expectation.unwanted_region) ++unwanted;
      }
    }
    if (result.expectation.intended) m.outside_intent_pixels = outside_intent;
    if (result.expectation.unwanted_region) m.unwanted_region_pixels = unwanted;
    if (tool != Tool::bs) {
      bool connected = true;
      for (const auto& stroke : run.traces) {
        for (const TargetSet& s : stroke) {
          ++m.timestamps;
          if (!selection_connected(s.selected, run.regions)) {
            connected = false;
            ++m.discontinuous_timestamps;
          }
        }
      }
      m.continuity = connected;
    } else {
      for (const auto& stroke : run.traces) m.timestamps += stroke.size();
    }
    m.sharpness_before = boundary_sharpness(run.input, run.regions);
    m.sharpness_after = boundary_sharpness(run.output, run.regions);
    m.boundary_blur = m.sharpness_before > 0.0 ? std::max(0.0, 1.0 - m.sharpness_after / m.sharpness_before) : 0.0;
    if (tool == Tool::ss && result.expectation.ss_selected) {
      const auto& expected = *result.expectation.ss_selected;
      bool match = expected.size() == run.traces.size();
      for (std::size_t i = 0; i < std::min(expected.size(), run.traces.size()); ++i) {
        if (expected[i].size() != run.traces[i].size()) match = false;
        for (std::size_t t = 0; t < std::min(expected[i].size(), run.traces[i].size()); ++t) {
          if (expected[i][t] != run.traces[i][t].selected) {
            match = false;
            ++m.mismatched_timestamps;
          }
        }
      }
      m.matches_expected = match;
    }
    result.tools.push_back(std::move(m));
  }

  if (!out_dir.empty()) {
    std::ofstream out(out_dir / "metrics.json", std::ios::binary);
    out << compare_metrics_json(result).dump(2) << '\n';
    if (!out) fail(ErrorCode::io, "cannot write " + (out_dir / "metrics.json").string());
  }
  return result;
}

nlohmann::ordered_json compare_metrics_json(const CompareResult& result) {
  const auto opt = [](const auto& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json j;
  j["format"] = "msm-compare-metrics";
  j["version"] = 1;
  j["tools"] = nlohmann::ordered_json::object();
  for (const ToolMetrics& m : result.tools) {
    nlohmann::ordered_json t;
    t["pixels_changed"] = m.pixels_changed;
    t["pixels_changed_outside_selection"] = m.pixels_changed_outside_selection;
    t["outside_intent_pixels"] = opt(m.outside_intent_pixels);
    t["unwanted_region_pixels"] = opt(m.unwanted_region_pixels);
    t["continuity"] = opt(m.continuity);
    t["discontinuous_timestamps"] = m.discontinuous_timestamps;
    t["timestamps"] = m.timestamps;
    t["boundary_sharpness_before"] = m.sharpness_before;
    t["boundary_sharpness_after"] = m.sharpness_after;
    t["boundary_blur"] = m.boundary_blur;
    t["matches_expected"] = opt(m.matches_expected);
    t["mismatched_timestamps"] = m.mismatched_timestamps;
    j["tools"][std::string(to_string(m.tool))] = std::move(t);
  }
  return j;
}

}  // namespace msm
