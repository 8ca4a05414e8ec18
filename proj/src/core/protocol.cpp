#include "msm/protocol.hpp"

#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>

#include "msm/error.hpp"
#include "msm/params.hpp"
#include "msm/png_io.hpp"
#include "msm/trace.hpp"

namespace msm {

namespace {

constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int decode_char(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

const char* code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::input: return "input";
    case ErrorCode::io: return "io";
    case ErrorCode::state: return "state";
    case ErrorCode::internal: return "internal";
  }
  return "internal";
}

double num(const nlohmann::json& req, const char* key) {
  const auto it = req.find(key);
  if (it == req.end() || !it->is_number()) fail(ErrorCode::input, std::string("request needs numeric '") + key + "'");
  return it->get<double>();
}

StrokeSample sample_from(const nlohmann::json& req) {
  StrokeSample s;
  s.pos = Point2{num(req, "x"), num(req, "y")};
  if (req.contains("t_ms")) s.t_ms = num(req, "t_ms");
  if (req.contains("pressure") && !req.at("pressure").is_null()) {
    const double p = num(req, "pressure");
    if (p < 0.0 || p > 1.0) fail(ErrorCode::input, "pressure must lie in [0, 1]");
    s.pressure = p;
  }
  return s;
}

std::string string_field(const nlohmann::json& req, const char* key) {
  const auto it = req.find(key);
  if (it == req.end() || !it->is_string()) fail(ErrorCode::input, std::string("request needs string '") + key + "'");
  return it->get<std::string>();
}

bool read_exact(int fd, char* data, std::size_t n, bool allow_eof_at_start) {
  std::size_t got = 0;
  while (got < n) {
    const ssize_t r = ::read(fd, data + got, n - got);
    if (r < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::io, std::string("read failed: ") + std::strerror(errno));
    }
    if (r == 0) {
      if (got == 0 && allow_eof_at_start) return false;
      fail(ErrorCode::input, "truncated frame");
    }
    got += static_cast<std::size_t>(r);
  }
  return true;
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (std::uint32_t{bytes[i]} << 16) | (std::uint32_t{bytes[i + 1]} << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i < bytes.size()) {
    std::uint32_t v = std::uint32_t{bytes[i]} << 16;
    if (i + 1 < bytes.size()) v |= std::uint32_t{bytes[i + 1]} << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) fail(ErrorCode::input, "base64 length must be a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    const int pad = last ? (text[i + 3] == '=') + (text[i + 2] == '=') : 0;
    if (pad == 1 && text[i + 2] == '=') fail(ErrorCode::input, "malformed base64 padding");
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + static_cast<std::size_t>(k)];
      int d = 0;
      if (k >= 4 - pad) {
        d = 0;
      } else {
        d = decode_char(c);
        if (d < 0) fail(ErrorCode::input, "invalid base64 character");
      }
      v = (v << 6) | static_cast<std::uint32_t>(d);
    }
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(v >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

std::string encode_frame(std::string_view payload) {
  if (payload.size() > kMaxFrameBytes) fail(ErrorCode::invalid_argument, "frame too large");
  const auto n = static_cast<std::uint32_t>(payload.size());
  std::string out;
  out.reserve(payload.size() + 4);
  out += static_cast<char>((n >> 24) & 0xff);
  out += static_cast<char>((n >> 16) & 0xff);
  out += static_cast<char>((n >> 8) & 0xff);
  out += static_cast<char>(n & 0xff);
  out.append(payload);
  return out;
}

bool read_frame(int fd, std::string& payload) {
  std::array<char, 4> header{};
  if (!read_exact(fd, header.data(), header.size(), true)) return false;
  std::uint32_t n = 0;
  for (char c : header) n = (n << 8) | static_cast<unsigned char>(c);
  if (n > kMaxFrameBytes) fail(ErrorCode::input, "frame exceeds the size limit");
  payload.resize(n);
  if (n > 0) read_exact(fd, payload.data(), n, false);
  return true;
}

void write_frame(int fd, std::string_view payload) {
  const std::string frame = encode_frame(payload);
  std::size_t done = 0;
  while (done < frame.size()) {
    const ssize_t w = ::write(fd, frame.data() + done, frame.size() - done);
    if (w < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::io, std::string("write failed: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(w);
  }
}

nlohmann::ordered_json tile_json(const Tile& tile) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(tile.pixels.size() * 4);
  for (const Rgba& p : tile.pixels) {
    bytes.push_back(p.r);
    bytes.push_back(p.g);
    bytes.push_back(p.b);
    bytes.push_back(p.a);
  }
  return {{"x", tile.rect.x0}, {"y", tile.rect.y0}, {"w", tile.rect.width()}, {"h", tile.rect.height()},
          {"pixels", base64_encode(bytes)}};
}

nlohmann::ordered_json tile_diff_json(const TileDiff& diff, const TargetSet& selection) {
  nlohmann::ordered_json j;
  j["type"] = "tile_diff";
  j["tiles"] = nlohmann::ordered_json::array();
  for (const Tile& t : diff.tiles) j["tiles"].push_back(tile_json(t));
  j["clamped"] = diff.clamped;
  j["stamps"] = diff.stamps;
  j["selection"] = selection_payload(selection);
  return j;
}

nlohmann::ordered_json error_response(ErrorCode code, const std::string& message) {
  return {{"type", "error"}, {"code", code_name(code)}, {"message", message}};
}

nlohmann::ordered_json ProtocolHandler::handle(const nlohmann::json& request) {
  nlohmann::ordered_json response;
  try {
    if (!request.is_object()) fail(ErrorCode::input, "request must be a JSON object");
    response = dispatch(string_field(request, "type"), request);
  } catch (const Error& e) {
    response = error_response(e.code(), e.what());
  } catch (const nlohmann::json::exception& e) {
    response = error_response(ErrorCode::input, e.what());
  } catch (const std::bad_alloc&) {
    response = error_response(ErrorCode::internal, "out of memory");
  } catch (const std::exception& e) {
    response = error_response(ErrorCode::internal, e.what());
  }
  if (request.is_object() && request.contains("id")) response["id"] = request.at("id");
  return response;
}

std::string ProtocolHandler::handle_text(std::string_view request) {
  nlohmann::json parsed;
  try {
    parsed = parse_json_text(request, "request");
  } catch (const Error& e) {
    return error_response(e.code(), e.what()).dump();
  }
  return handle(parsed).dump();
}

nlohmann::ordered_json ProtocolHandler::dispatch(const std::string& type, const nlohmann::json& req) {
  const nlohmann::ordered_json ack = {{"type", "ack"}, {"request", type}};
  if (type == "ping") return ack;
  if (type == "shutdown") {
    shutdown_ = true;
    return ack;
  }
  if (type == "open_canvas") {
    RasterImage image;
    if (req.contains("path")) {
      canvas_path_ = string_field(req, "path");
      image = load_png(canvas_path_);
    } else {
      const int w = static_cast<int>(num(req, "width"));
      const int h = static_cast<int>(num(req, "height"));
      const std::vector<std::uint8_t> bytes = base64_decode(string_field(req, "rgba"));
      image = RasterImage::from_bytes(w, h, bytes);
      canvas_path_ = req.value("name", std::string("canvas.png"));
    }
    session_.open_canvas(std::move(image));
    strokes_.clear();
    segmentation_ = nlohmann::ordered_json::object();
    nlohmann::ordered_json r = ack;
    r["width"] = session_.canvas().width();
    r["height"] = session_.canvas().height();
    return r;
  }
  if (type == "segment") {
    if (!session_.has_canvas()) fail(ErrorCode::state, "open a canvas before segmenting");
    if (req.contains("labels") || req.contains("index")) {
      session_.set_region_map(load_region_map(string_field(req, "labels"), string_field(req, "index"),
                                              session_.params().regions));
      segmentation_ = {{"labels", string_field(req, "labels")}, {"index", string_field(req, "index")}};
    } else {
      nlohmann::json spec = req;
      spec.erase("type");
      spec.erase("id");
      const SegmentationSpec s = parse_segmentation(spec);
      session_.set_region_map(run_segmentation(session_.canvas(), s, session_.params().regions));
      segmentation_ = segmentation_to_json(s);
    }
    nlohmann::ordered_json r = ack;
    r["regions"] = session_.regions().size();
    return r;
  }
  if (type == "set_params") {
    const nlohmann::json& p = req.contains("params") ? req.at("params") : nlohmann::json::object();
    session_.set_params(apply_params(p, session_.params()));
    for (const auto& [k, v] : p.items()) params_json_[k] = v;
    nlohmann::ordered_json r = ack;
    r["params"] = params_to_json(session_.params());
    return r;
  }
  if (type == "begin_stroke") {
    const Tool tool = req.contains("tool") ? parse_tool(string_field(req, "tool")) : session_.params().tool;
    session_.begin_stroke(tool, sample_from(req));
    nlohmann::ordered_json r = selection_payload(session_.targets());
    r["type"] = "selection";
    r["lambda"] = session_.brush().lambda;
    return r;
  }
  if (type == "stroke_sample") {
    const TileDiff diff = session_.advance(sample_from(req));
    nlohmann::ordered_json r = tile_diff_json(diff, session_.targets());
    r["lambda"] = session_.brush().lambda;
    return r;
  }
  if (type == "end_stroke") {
    StrokeRecord record = session_.end_stroke();
    nlohmann::ordered_json r = ack;
    r["record"] = stroke_record_to_json(record);
    strokes_.push_back(std::move(record));
    return r;
  }
  if (type == "undo") {
    std::vector<Tile> tiles;
    const bool restored = session_.undo(&tiles);
    if (restored && !strokes_.empty()) strokes_.pop_back();
    nlohmann::ordered_json r;
    r["type"] = "tile_diff";
    r["tiles"] = nlohmann::ordered_json::array();
    for (const Tile& t : tiles) r["tiles"].push_back(tile_json(t));
    r["restored"] = restored;
    return r;
  }
  if (type == "export") {
    nlohmann::ordered_json r = ack;
    if (req.contains("path")) {
      const std::string path = string_field(req, "path");
      save_png(path, session_.canvas());
      r["path"] = path;
    } else {
      const std::vector<std::uint8_t> bytes = session_.canvas().to_bytes();
      r["width"] = session_.canvas().width();
      r["height"] = session_.canvas().height();
      r["rgba"] = base64_encode(bytes);
    }
    return r;
  }
  if (type == "export_script") {
    nlohmann::ordered_json script;
    script["canvas"] = req.value("canvas", canvas_path_);
    if (!params_json_.empty()) script["params"] = params_json_;
    if (segmentation_.contains("labels")) {
      script["regions"] = segmentation_;
    } else if (!segmentation_.empty()) {
      script["segmentation"] = segmentation_;
    }
    script["strokes"] = nlohmann::ordered_json::array();
    for (const StrokeRecord& s : strokes_) script["strokes"].push_back(stroke_record_to_json(s));
    nlohmann::ordered_json r = ack;
    r["script"] = script;
    return r;
  }
  if (type == "get_overlay") {
    nlohmann::ordered_json r = selection_payload(session_.targets());
    r["type"] = "selection";
    r["ever_selected"] = session_.ever_selected();
    r["stroke_active"] = session_.stroke_active();
    if (req.value("labels", false)) {
      const RegionMap& map = session_.regions();
      std::vector<std::uint8_t> bytes;
      bytes.reserve(map.labels().size() * 4);
      for (std::int32_t l : map.labels()) {
        const auto u = static_cast<std::uint32_t>(l);
        for (int k = 0; k < 4; ++k) bytes.push_back(static_cast<std::uint8_t>(u >> (8 * k)));
      }
      r["width"] = map.width();
      r["height"] = map.height();
      r["labels"] = base64_encode(bytes);
    }
    return r;
  }
  fail(ErrorCode::input, "unknown request type '" + type + "'");
}

void serve(SmudgeSession& session, int in_fd, int out_fd) {
  ProtocolHandler handler(session);
  std::string payload;
  while (!handler.shutdown_requested()) {
    bool got = false;
    try {
      got = read_frame(in_fd, payload);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::io) throw;
      // A bad header cannot be resynchronised; report and stop.
      write_frame(out_fd, error_response(e.code(), e.what()).dump());
      return;
    }
    if (!got) return;
    write_frame(out_fd, handler.handle_text(payload));
  }
}

}  // namespace msm
