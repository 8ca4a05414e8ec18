#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "msm/engine.hpp"
#include "msm/error.hpp"
#include "msm/replay.hpp"

namespace msm {

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws ErrorCode::input on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

inline constexpr std::uint32_t kMaxFrameBytes = 1u << 28;

/// Frame = 4-byte big-endian payload length, then the UTF-8 JSON payload.
std::string encode_frame(std::string_view payload);
/// Returns false on clean end of stream before a header; throws on truncation.
bool read_frame(int fd, std::string& payload);
void write_frame(int fd, std::string_view payload);

nlohmann::ordered_json tile_json(const Tile& tile);
nlohmann::ordered_json tile_diff_json(const TileDiff& diff, const TargetSet& selection);

/// Request dispatcher shared by the local channel and in-process callers.
/// Every request is an object with "type" and an optional "id" echoed back.
class ProtocolHandler {
 public:
  explicit ProtocolHandler(SmudgeSession& session) : session_(session) {}

  nlohmann::ordered_json handle(const nlohmann::json& request);
  /// Parses, dispatches and serializes; never throws.
  std::string handle_text(std::string_view request);

  bool shutdown_requested() const { return shutdown_; }
  /// Completed strokes since the canvas was opened, minus undone ones.
  const std::vector<StrokeRecord>& strokes() const { return strokes_; }

 private:
  nlohmann::ordered_json dispatch(const std::string& type, const nlohmann::json& request);

  SmudgeSession& session_;
  std::string canvas_path_;
  nlohmann::ordered_json segmentation_ = nlohmann::ordered_json::object();
  nlohmann::json params_json_ = nlohmann::json::object();
  std::vector<StrokeRecord> strokes_;
  bool shutdown_ = false;
};

nlohmann::ordered_json error_response(ErrorCode code, const std::string& message);

/// Serves framed requests until end of stream or a "shutdown" request.
void serve(SmudgeSession& session, int in_fd, int out_fd);

}  // namespace msm
