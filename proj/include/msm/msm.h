/* msm smudge engine: C interface.
 *
 * All functions return an msm_status. On failure a message is available from
 * msm_last_error() until the next call on the same thread. Strings returned
 * through msm_string** are owned by the caller and released with
 * msm_string_free. A session must only be used from one thread at a time. */
#ifndef MSM_MSM_H
#define MSM_MSM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MSM_BUILDING_LIBRARY)
#    define MSM_API __declspec(dllexport)
#  else
#    define MSM_API __declspec(dllimport)
#  endif
#else
#  define MSM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum msm_status {
  MSM_OK = 0,
  MSM_ERR_INVALID_ARGUMENT = 1,
  MSM_ERR_INPUT = 2,
  MSM_ERR_IO = 3,
  MSM_ERR_STATE = 4,
  MSM_ERR_INTERNAL = 5
} msm_status;

typedef struct msm_session msm_session;
typedef struct msm_string msm_string;

MSM_API const char* msm_version(void);
MSM_API const char* msm_status_string(msm_status status);
MSM_API const char* msm_last_error(void);

MSM_API const char* msm_string_data(const msm_string* s);
MSM_API size_t msm_string_size(const msm_string* s);
MSM_API void msm_string_free(msm_string* s);

/* params_json: flat object of parameter overrides, or NULL for defaults. */
MSM_API msm_status msm_session_create(const char* params_json, msm_session** out);
MSM_API void msm_session_destroy(msm_session* session);

MSM_API msm_status msm_session_open_png(msm_session* session, const char* path);
MSM_API msm_status msm_session_open_rgba(msm_session* session, int width, int height, const uint8_t* rgba);
/* options_json: {"method": "flat" | "meanshift", bandwidths...}, NULL for flat. */
MSM_API msm_status msm_session_segment(msm_session* session, const char* options_json, size_t* region_count);
MSM_API msm_status msm_session_save_regions(const msm_session* session, const char* label_png, const char* index_json);
MSM_API msm_status msm_session_load_regions(msm_session* session, const char* label_png, const char* index_json);
MSM_API msm_status msm_session_set_params(msm_session* session, const char* params_json);

/* tool: "ss", "bs", "ts" or NULL for the configured tool. A negative
 * pressure means the device reported none. */
MSM_API msm_status msm_session_begin_stroke(msm_session* session, const char* tool, double x, double y,
                                            double t_ms, double pressure);
/* diff_json (nullable) receives the protocol tile_diff response. */
MSM_API msm_status msm_session_stroke_sample(msm_session* session, double x, double y, double t_ms,
                                             double pressure, msm_string** diff_json);
/* record_json (nullable) receives {"tool", "samples"}. */
MSM_API msm_status msm_session_end_stroke(msm_session* session, msm_string** record_json);
/* restored (nullable) is set to 1 when a stroke was undone, 0 on an empty stack. */
MSM_API msm_status msm_session_undo(msm_session* session, int* restored);
MSM_API msm_status msm_session_export_png(const msm_session* session, const char* path);
/* The pixel pointer stays valid until the next mutating call. */
MSM_API msm_status msm_session_canvas(const msm_session* session, int* width, int* height, const uint8_t** rgba);
MSM_API msm_status msm_session_selection_json(const msm_session* session, msm_string** out);

/* One protocol request (JSON text) to one response; protocol errors are
 * reported inside the response, so this only fails on bad arguments. */
MSM_API msm_status msm_session_handle_message(msm_session* session, const char* request, size_t length,
                                              msm_string** response);
/* Serves length-prefixed JSON frames until end of input or "shutdown". */
MSM_API msm_status msm_serve(msm_session* session, int in_fd, int out_fd);

/* Batch entry points used by the command-line tool. */
MSM_API msm_status msm_segment_file(const char* image_path, const char* options_json, const char* label_png,
                                    const char* index_json, msm_string** summary_json);
/* options_json: {"out", "trace", "tool", "params": {...}}; NULL for none. */
MSM_API msm_status msm_replay(const char* script_path, const char* options_json, msm_string** report_json);
MSM_API msm_status msm_bench(int size, int iterations, const char* params_json, msm_string** report_json,
                             msm_string** table_text);
MSM_API msm_status msm_compare(const char* scenario_dir, const char* out_dir, const char* params_json,
                               msm_string** metrics_json);

#ifdef __cplusplus
}
#endif

#endif /* MSM_MSM_H */
