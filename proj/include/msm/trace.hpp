#pragma once

#include <filesystem>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "msm/selection.hpp"

namespace msm {

/// One debug-trace line: {stroke, t, covered, base, candidate_scores,
/// base_score, selected}.
nlohmann::ordered_json trace_record(std::size_t stroke, const TargetSet& state);

/// Protocol selection payload: {t, covered, base, selected, scores}.
nlohmann::ordered_json selection_payload(const TargetSet& state);

/// Appends JSON lines to a file, one record per call.
class TraceWriter {
 public:
  explicit TraceWriter(const std::filesystem::path& path);
  void write(std::size_t stroke, const std::vector<TargetSet>& states);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

/// Parses one trace line back into a TargetSet.
TargetSet parse_trace_record(const nlohmann::json& record, std::size_t* stroke = nullptr);

}  // namespace msm
