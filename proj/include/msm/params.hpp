#pragma once

#include <json.hpp>

#include "msm/engine.hpp"
#include "msm/regions.hpp"

namespace msm {

/// Overlays the keys of a flat JSON object onto `base`. Unknown keys and
/// non-numeric values are input errors; the result is validated.
SessionParams apply_params(const nlohmann::json& object, SessionParams base = {});

nlohmann::ordered_json params_to_json(const SessionParams& params);

/// Segmentation request: {"method": "flat" | "meanshift", "spatial_bandwidth",
/// "color_bandwidth", "min_region"}. Missing method means flat.
struct SegmentationSpec {
  enum class Method { flat, meanshift } method = Method::flat;
  MeanShiftParams meanshift;
};

SegmentationSpec parse_segmentation(const nlohmann::json& object);
nlohmann::ordered_json segmentation_to_json(const SegmentationSpec& spec);

RegionMap run_segmentation(const RasterImage& image, const SegmentationSpec& spec,
                           const RegionConfig& config);

/// Parses JSON text, mapping syntax errors to input errors with line and column.
nlohmann::json parse_json_text(std::string_view text, std::string_view what);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace msm
