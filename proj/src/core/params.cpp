#include "msm/params.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "msm/error.hpp"

namespace msm {

namespace {

using Setter = std::function<void(SessionParams&, double)>;

const std::map<std::string, Setter, std::less<>>& numeric_keys() {
  static const std::map<std::string, Setter, std::less<>> keys = {
      {"alpha", [](SessionParams& p, double v) { p.resemblance.alpha = v; }},
      {"beta", [](SessionParams& p, double v) { p.resemblance.beta = v; }},
      {"gamma", [](SessionParams& p, double v) { p.resemblance.gamma = v; }},
      {"ts_fraction", [](SessionParams& p, double v) { p.resemblance.ts_fraction = v; }},
      {"theta", [](SessionParams& p, double v) { p.brush.theta = v; }},
      {"brush_min", [](SessionParams& p, double v) { p.brush.brush_min = v; }},
      {"brush_max", [](SessionParams& p, double v) { p.brush.brush_max = v; }},
      {"strength", [](SessionParams& p, double v) { p.brush.strength = v; }},
      {"pickup_rate", [](SessionParams& p, double v) { p.brush.pickup_rate = v; }},
      {"stamp_spacing", [](SessionParams& p, double v) { p.brush.stamp_spacing = v; }},
      {"fixed_radius", [](SessionParams& p, double v) { p.brush.fixed_radius = v; }},
      {"stroke_length", [](SessionParams& p, double v) { p.stroke.length = v; }},
      {"stroke_width", [](SessionParams& p, double v) { p.stroke.width = v; }},
      {"resample_spacing", [](SessionParams& p, double v) { p.stroke.resample_spacing = v; }},
      {"bone_radius", [](SessionParams& p, double v) { p.stroke.bone_radius = v; }},
      {"boundary_dilation", [](SessionParams& p, double v) { p.regions.boundary_dilation = v; }},
  };
  return keys;
}

double number_field(const nlohmann::json& v, std::string_view key) {
  if (!v.is_number()) fail(ErrorCode::input, "parameter '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

}  // namespace

SessionParams apply_params(const nlohmann::json& object, SessionParams base) {
  if (object.is_null()) return base;
  if (!object.is_object()) fail(ErrorCode::input, "params must be a JSON object");
  for (const auto& [key, value] : object.items()) {
    if (key == "tool") {
      if (!value.is_string()) fail(ErrorCode::input, "parameter 'tool' must be a string");
      base.tool = parse_tool(value.get<std::string>());
    } else if (key == "undo_depth") {
      if (!value.is_number_integer() || value.get<long long>() < 1) {
        fail(ErrorCode::input, "parameter 'undo_depth' must be a positive integer");
      }
      base.undo_depth = value.get<std::size_t>();
    } else {
      const auto it = numeric_keys().find(key);
      if (it == numeric_keys().end()) fail(ErrorCode::input, "unknown parameter '" + key + "'");
      it->second(base, number_field(value, key));
    }
  }
  try {
    base.validate();
  } catch (const Error& e) {
    fail(ErrorCode::input, e.what());
  }
  return base;
}

nlohmann::ordered_json params_to_json(const SessionParams& p) {
  nlohmann::ordered_json j;
  j["alpha"] = p.resemblance.alpha;
  j["beta"] = p.resemblance.beta;
  j["gamma"] = p.resemblance.gamma;
  j["ts_fraction"] = p.resemblance.ts_fraction;
  j["theta"] = p.brush.theta;
  j["brush_min"] = p.brush.brush_min;
  j["brush_max"] = p.brush.brush_max;
  j["strength"] = p.brush.strength;
  j["pickup_rate"] = p.brush.pickup_rate;
  j["stamp_spacing"] = p.brush.stamp_spacing;
  j["fixed_radius"] = p.brush.fixed_radius;
  j["stroke_length"] = p.stroke.length;
  j["stroke_width"] = p.stroke.width;
  j["resample_spacing"] = p.stroke.resample_spacing;
  j["bone_radius"] = p.stroke.bone_radius;
  j["boundary_dilation"] = p.regions.boundary_dilation;
  j["tool"] = std::string(to_string(p.tool));
  j["undo_depth"] = p.undo_depth;
  return j;
}

SegmentationSpec parse_segmentation(const nlohmann::json& object) {
  SegmentationSpec spec;
  if (object.is_null()) return spec;
  if (!object.is_object()) fail(ErrorCode::input, "segmentation must be a JSON object");
  for (const auto& [key, value] : object.items()) {
    if (key == "method") {
      const std::string m = value.is_string() ? value.get<std::string>() : "";
      if (m == "flat") {
        spec.method = SegmentationSpec::Method::flat;
      } else if (m == "meanshift") {
        spec.method = SegmentationSpec::Method::meanshift;
      } else {
        fail(ErrorCode::input, "segmentation method must be \"flat\" or \"meanshift\"");
      }
    } else if (key == "spatial_bandwidth") {
      spec.meanshift.spatial_bandwidth = number_field(value, key);
    } else if (key == "color_bandwidth") {
      spec.meanshift.color_bandwidth = number_field(value, key);
    } else if (key == "min_region") {
      if (!value.is_number_integer()) fail(ErrorCode::input, "min_region must be an integer");
      spec.meanshift.min_region = value.get<int>();
    } else if (key == "max_iterations") {
      if (!value.is_number_integer()) fail(ErrorCode::input, "max_iterations must be an integer");
      spec.meanshift.max_iterations = value.get<int>();
    } else {
      fail(ErrorCode::input, "unknown segmentation key '" + key + "'");
    }
  }
  const MeanShiftParams& m = spec.meanshift;
  if (!(m.spatial_bandwidth > 0 && m.color_bandwidth > 0 && m.min_region >= 1 && m.max_iterations >= 1)) {
    fail(ErrorCode::input, "meanshift needs positive bandwidths, min_region >= 1 and max_iterations >= 1");
  }
  return spec;
}

nlohmann::ordered_json segmentation_to_json(const SegmentationSpec& spec) {
  nlohmann::ordered_json j;
  if (spec.method == SegmentationSpec::Method::flat) {
    j["method"] = "flat";
    return j;
  }
  j["method"] = "meanshift";
  j["spatial_bandwidth"] = spec.meanshift.spatial_bandwidth;
  j["color_bandwidth"] = spec.meanshift.color_bandwidth;
  j["min_region"] = spec.meanshift.min_region;
  j["max_iterations"] = spec.meanshift.max_iterations;
  return j;
}

RegionMap run_segmentation(const RasterImage& image, const SegmentationSpec& spec,
                           const RegionConfig& config) {
  if (spec.method == SegmentationSpec::Method::meanshift) {
    return meanshift_regions(image, spec.meanshift, config);
  }
  return flat_fill_regions(image, config);
}

nlohmann::json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // Byte offsets are 1-based and point at the offending character.
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << what << ": line " << line << ", column " << column << ": malformed JSON";
    fail(ErrorCode::input, msg.str());
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::input, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path.string());
}

}  // namespace msm
