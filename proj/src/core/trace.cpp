#include "msm/trace.hpp"

#include <algorithm>

#include "msm/error.hpp"

namespace msm {

namespace {

nlohmann::ordered_json scores_json(const std::vector<CandidateScore>& scores) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const CandidateScore& c : scores) out.push_back({{"region", c.region}, {"score", c.score}});
  return out;
}

RegionSet region_set(const nlohmann::json& v) {
  if (!v.is_array()) fail(ErrorCode::input, "trace region sets must be arrays");
  RegionSet out = v.get<RegionSet>();
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

nlohmann::ordered_json trace_record(std::size_t stroke, const TargetSet& state) {
  nlohmann::ordered_json j;
  j["stroke"] = stroke;
  j["t"] = state.t;
  j["covered"] = state.covered;
  j["base"] = state.base;
  j["candidate_scores"] = scores_json(state.candidates);
  j["base_score"] = state.base_score;
  j["selected"] = state.selected;
  return j;
}

nlohmann::ordered_json selection_payload(const TargetSet& state) {
  nlohmann::ordered_json j;
  j["t"] = state.t;
  j["covered"] = state.covered;
  j["base"] = state.base;
  j["selected"] = state.selected;
  j["scores"] = scores_json(state.candidates);
  return j;
}

TraceWriter::TraceWriter(const std::filesystem::path& path) : out_(path, std::ios::binary), path_(path) {
  if (!out_) fail(ErrorCode::io, "cannot write trace " + path.string());
}

void TraceWriter::write(std::size_t stroke, const std::vector<TargetSet>& states) {
  for (const TargetSet& s : states) out_ << trace_record(stroke, s).dump() << '\n';
  out_.flush();
  if (!out_) fail(ErrorCode::io, "failed writing trace " + path_.string());
}

TargetSet parse_trace_record(const nlohmann::json& record, std::size_t* stroke) {
  if (!record.is_object()) fail(ErrorCode::input, "trace record must be an object");
  try {
    TargetSet s;
    s.t = record.at("t").get<long long>();
    s.covered = region_set(record.at("covered"));
    s.base = region_set(record.at("base"));
    s.selected = region_set(record.at("selected"));
    s.base_score = record.value("base_score", 0.0);
    for (const auto& c : record.value("candidate_scores", nlohmann::json::array())) {
      s.candidates.push_back(CandidateScore{c.at("region").get<int>(), c.at("score").get<double>()});
    }
    if (stroke != nullptr) *stroke = record.value("stroke", std::size_t{0});
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::input, std::string("malformed trace record: ") + e.what());
  }
}

}  // namespace msm
