#include "msm/msm.h"

#include <new>
#include <string>

#include "msm/bench.hpp"
#include "msm/compare.hpp"
#include "msm/error.hpp"
#include "msm/png_io.hpp"
#include "msm/protocol.hpp"
#include "msm/replay.hpp"
#include "msm/trace.hpp"

struct msm_session {
  explicit msm_session(const msm::SessionParams& params) : session(params) {}
  msm_session(const msm_session&) = delete;
  msm_session& operator=(const msm_session&) = delete;

  msm::SmudgeSession session;
  msm::ProtocolHandler handler{session};
  std::vector<std::uint8_t> canvas_bytes;
};

struct msm_string {
  std::string value;
};

namespace {

thread_local std::string g_last_error;

msm_status to_status(msm::ErrorCode code) {
  switch (code) {
    case msm::ErrorCode::invalid_argument: return MSM_ERR_INVALID_ARGUMENT;
    case msm::ErrorCode::input: return MSM_ERR_INPUT;
    case msm::ErrorCode::io: return MSM_ERR_IO;
    case msm::ErrorCode::state: return MSM_ERR_STATE;
    case msm::ErrorCode::internal: return MSM_ERR_INTERNAL;
  }
  return MSM_ERR_INTERNAL;
}

// Runs f, translating every exception into a status; nothing escapes the C boundary.
template <class F>
msm_status guarded(F&& f) noexcept {
  try {
    g_last_error.clear();
    f();
    return MSM_OK;
  } catch (const msm::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return MSM_ERR_INPUT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MSM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MSM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return MSM_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) msm::fail(msm::ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

nlohmann::json parse_optional(const char* text, const char* what) {
  if (text == nullptr || *text == '\0') return nlohmann::json::object();
  return msm::parse_json_text(text, what);
}

void emit(msm_string** out, std::string value) {
  if (out == nullptr) return;
  *out = new msm_string{std::move(value)};
}

msm::StrokeSample make_sample(double x, double y, double t_ms, double pressure) {
  msm::StrokeSample s;
  s.pos = msm::Point2{x, y};
  s.t_ms = t_ms;
  if (pressure >= 0.0) {
    if (pressure > 1.0) msm::fail(msm::ErrorCode::invalid_argument, "pressure must lie in [0, 1]");
    s.pressure = pressure;
  }
  return s;
}

}  // namespace

extern "C" {

const char* msm_version(void) { return "1.0.0"; }

const char* msm_status_string(msm_status status) {
  switch (status) {
    case MSM_OK: return "ok";
    case MSM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MSM_ERR_INPUT: return "input error";
    case MSM_ERR_IO: return "i/o error";
    case MSM_ERR_STATE: return "invalid state";
    case MSM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* msm_last_error(void) { return g_last_error.c_str(); }

const char* msm_string_data(const msm_string* s) { return s == nullptr ? "" : s->value.c_str(); }
size_t msm_string_size(const msm_string* s) { return s == nullptr ? 0 : s->value.size(); }
void msm_string_free(msm_string* s) { delete s; }

msm_status msm_session_create(const char* params_json, msm_session** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    const msm::SessionParams params = msm::apply_params(parse_optional(params_json, "params"));
    *out = new msm_session(params);
  });
}

void msm_session_destroy(msm_session* session) { delete session; }

msm_status msm_session_open_png(msm_session* session, const char* path) {
  return guarded([&] {
    need(session, "session");
    need(path, "path");
    nlohmann::json req = {{"type", "open_canvas"}, {"path", path}};
    const auto r = session->handler.handle(req);
    if (r.at("type") == "error") msm::fail(msm::ErrorCode::input, r.at("message").get<std::string>());
  });
}

msm_status msm_session_open_rgba(msm_session* session, int width, int height, const uint8_t* rgba) {
  return guarded([&] {
    need(session, "session");
    need(rgba, "rgba");
    msm::require(width >= 1 && height >= 1 && width <= msm::kMaxImageSide && height <= msm::kMaxImageSide,
                 "canvas size out of range");
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 4;
    session->session.open_canvas(msm::RasterImage::from_bytes(width, height, std::span<const uint8_t>(rgba, n)));
  });
}

msm_status msm_session_segment(msm_session* session, const char* options_json, size_t* region_count) {
  return guarded([&] {
    need(session, "session");
    if (!session->session.has_canvas()) msm::fail(msm::ErrorCode::state, "open a canvas before segmenting");
    const msm::SegmentationSpec spec = msm::parse_segmentation(parse_optional(options_json, "segmentation"));
    session->session.set_region_map(
        msm::run_segmentation(session->session.canvas(), spec, session->session.params().regions));
    if (region_count != nullptr) *region_count = session->session.regions().size();
  });
}

msm_status msm_session_save_regions(const msm_session* session, const char* label_png, const char* index_json) {
  return guarded([&] {
    need(session, "session");
    need(label_png, "label_png");
    need(index_json, "index_json");
    msm::save_region_map(session->session.regions(), label_png, index_json);
  });
}

msm_status msm_session_load_regions(msm_session* session, const char* label_png, const char* index_json) {
  return guarded([&] {
    need(session, "session");
    need(label_png, "label_png");
    need(index_json, "index_json");
    session->session.set_region_map(msm::load_region_map(label_png, index_json, session->session.params().regions));
  });
}

msm_status msm_session_set_params(msm_session* session, const char* params_json) {
  return guarded([&] {
    need(session, "session");
    session->session.set_params(msm::apply_params(parse_optional(params_json, "params"), session->session.params()));
  });
}

msm_status msm_session_begin_stroke(msm_session* session, const char* tool, double x, double y, double t_ms,
                                    double pressure) {
  return guarded([&] {
    need(session, "session");
    const msm::Tool t = tool == nullptr ? session->session.params().tool : msm::parse_tool(tool);
    session->session.begin_stroke(t, make_sample(x, y, t_ms, pressure));
  });
}

msm_status msm_session_stroke_sample(msm_session* session, double x, double y, double t_ms, double pressure,
                                     msm_string** diff_json) {
  return guarded([&] {
    need(session, "session");
    const msm::TileDiff diff = session->session.advance(make_sample(x, y, t_ms, pressure));
    if (diff_json != nullptr) emit(diff_json, msm::tile_diff_json(diff, session->session.targets()).dump());
  });
}

msm_status msm_session_end_stroke(msm_session* session, msm_string** record_json) {
  return guarded([&] {
    need(session, "session");
    const msm::StrokeRecord record = session->session.end_stroke();
    emit(record_json, msm::stroke_record_to_json(record).dump());
  });
}

msm_status msm_session_undo(msm_session* session, int* restored) {
  return guarded([&] {
    need(session, "session");
    const bool r = session->session.undo();
    if (restored != nullptr) *restored = r ? 1 : 0;
  });
}

msm_status msm_session_export_png(const msm_session* session, const char* path) {
  return guarded([&] {
    need(session, "session");
    need(path, "path");
    msm::save_png(path, session->session.canvas());
  });
}

msm_status msm_session_canvas(const msm_session* session, int* width, int* height, const uint8_t** rgba) {
  return guarded([&] {
    need(session, "session");
    need(width, "width");
    need(height, "height");
    need(rgba, "rgba");
    const msm::RasterImage& c = session->session.canvas();
    auto& bytes = const_cast<msm_session*>(session)->canvas_bytes;
    bytes = c.to_bytes();
    *width = c.width();
    *height = c.height();
    *rgba = bytes.data();
  });
}

msm_status msm_session_selection_json(const msm_session* session, msm_string** out) {
  return guarded([&] {
    need(session, "session");
    need(out, "out");
    nlohmann::ordered_json j = msm::selection_payload(session->session.targets());
    j["ever_selected"] = session->session.ever_selected();
    emit(out, j.dump());
  });
}

msm_status msm_session_handle_message(msm_session* session, const char* request, size_t length,
                                      msm_string** response) {
  return guarded([&] {
    need(session, "session");
    need(request, "request");
    need(response, "response");
    emit(response, session->handler.handle_text(std::string_view(request, length)));
  });
}

msm_status msm_serve(msm_session* session, int in_fd, int out_fd) {
  return guarded([&] {
    need(session, "session");
    msm::serve(session->session, in_fd, out_fd);
  });
}

msm_status msm_segment_file(const char* image_path, const char* options_json, const char* label_png,
                            const char* index_json, msm_string** summary_json) {
  return guarded([&] {
    need(image_path, "image_path");
    need(label_png, "label_png");
    need(index_json, "index_json");
    nlohmann::json opts = parse_optional(options_json, "options");
    msm::RegionConfig config;
    if (opts.contains("boundary_dilation")) {
      config = msm::apply_params({{"boundary_dilation", opts.at("boundary_dilation")}}).regions;
      opts.erase("boundary_dilation");
    }
    const msm::SegmentationSpec spec = msm::parse_segmentation(opts);
    const msm::RasterImage image = msm::load_png(image_path);
    const msm::RegionMap map = msm::run_segmentation(image, spec, config);
    msm::save_region_map(map, label_png, index_json);
    nlohmann::ordered_json j;
    j["image"] = image_path;
    j["width"] = image.width();
    j["height"] = image.height();
    j["regions"] = map.size();
    j["segmentation"] = msm::segmentation_to_json(spec);
    j["labels"] = label_png;
    j["index"] = index_json;
    emit(summary_json, j.dump(2));
  });
}

msm_status msm_replay(const char* script_path, const char* options_json, msm_string** report_json) {
  return guarded([&] {
    need(script_path, "script_path");
    const nlohmann::json opts = parse_optional(options_json, "options");
    msm::ReplayOptions options;
    for (const auto& [key, value] : opts.items()) {
      if (key == "out") {
        options.out = value.get<std::string>();
      } else if (key == "trace") {
        options.trace = value.get<std::string>();
      } else if (key == "tool") {
        options.tool = msm::parse_tool(value.get<std::string>());
      } else if (key == "params") {
        options.param_overrides = value;
      } else {
        msm::fail(msm::ErrorCode::invalid_argument, "unknown replay option '" + key + "'");
      }
    }
    const msm::Script script = msm::parse_script(script_path);
    const msm::ReplayRun run = msm::run_replay(script, options);
    emit(report_json, msm::replay_report(run, options).dump(2));
  });
}

msm_status msm_bench(int size, int iterations, const char* params_json, msm_string** report_json,
                     msm_string** table_text) {
  return guarded([&] {
    const msm::SessionParams params = msm::apply_params(parse_optional(params_json, "params"));
    const msm::BenchResult r = msm::run_bench(size, iterations, params);
    emit(report_json, msm::bench_report(r).dump(2));
    emit(table_text, msm::bench_table(r));
  });
}

msm_status msm_compare(const char* scenario_dir, const char* out_dir, const char* params_json,
                       msm_string** metrics_json) {
  return guarded([&] {
    need(scenario_dir, "scenario_dir");
    const msm::CompareResult r =
        msm::run_compare(scenario_dir, out_dir == nullptr ? "" : out_dir, parse_optional(params_json, "params"));
    emit(metrics_json, msm::compare_metrics_json(r).dump(2));
  });
}

}  // extern "C"
