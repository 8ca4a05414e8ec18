// Command-line front end over the C interface.
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "msm/msm.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInput = 2;

int exit_code(msm_status s) {
  if (s == MSM_OK) return kExitOk;
  if (s == MSM_ERR_INPUT || s == MSM_ERR_INVALID_ARGUMENT) return kExitInput;
  return kExitRuntime;
}

int report_failure(const char* what, msm_status s) {
  std::cerr << "msm " << what << ": " << msm_status_string(s) << ": " << msm_last_error() << '\n';
  return exit_code(s);
}

// Owns an msm_string.
struct Text {
  msm_string* s = nullptr;
  ~Text() { msm_string_free(s); }
  std::string str() const { return std::string(msm_string_data(s), msm_string_size(s)); }
};

struct ParamFlags {
  std::string params_file;
  std::optional<std::string> tool;
  std::optional<double> alpha, beta, gamma, theta, stroke_width, stroke_length;

  void attach(CLI::App* app, bool with_tool) {
    app->add_option("--params", params_file, "JSON file of parameter overrides")->check(CLI::ExistingFile);
    if (with_tool) app->add_option("--tool", tool, "Force every stroke's tool")->check(CLI::IsMember({"ss", "bs", "ts"}));
    app->add_option("--alpha", alpha, "Region resemblance weight");
    app->add_option("--beta", beta, "Boundary resemblance weight");
    app->add_option("--gamma", gamma, "Candidate acceptance balance weight");
    app->add_option("--theta", theta, "Minimum brush radius in pixels");
    app->add_option("--stroke-width", stroke_width, "Partial stroke width w in pixels");
    app->add_option("--stroke-length", stroke_length, "Partial stroke length l in pixels");
  }

  // File values first, flags win.
  nlohmann::json merged() const {
    nlohmann::json p = nlohmann::json::object();
    if (!params_file.empty()) {
      std::ifstream in(params_file);
      std::stringstream buf;
      buf << in.rdbuf();
      p = nlohmann::json::parse(buf.str(), nullptr, false);
      if (p.is_discarded() || !p.is_object()) throw std::invalid_argument("--params must hold a JSON object");
    }
    const auto put = [&](const char* key, const std::optional<double>& v) {
      if (v) p[key] = *v;
    };
    put("alpha", alpha);
    put("beta", beta);
    put("gamma", gamma);
    put("theta", theta);
    put("stroke_width", stroke_width);
    put("stroke_length", stroke_length);
    return p;
  }
};

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"msm: smudge brush constrained to painted regions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(msm_version()));

  // segment
  std::string seg_image, seg_method = "flat", seg_prefix;
  std::optional<double> seg_hs, seg_hr, seg_dilation;
  std::optional<int> seg_min;
  auto* seg = app.add_subcommand("segment", "Segment a painting into regions and write the sidecar files");
  seg->add_option("image", seg_image, "Input PNG")->required();
  seg->add_option("--method", seg_method, "flat or meanshift")->check(CLI::IsMember({"flat", "meanshift"}));
  seg->add_option("--spatial-bandwidth", seg_hs, "Mean shift spatial bandwidth (pixels)");
  seg->add_option("--color-bandwidth", seg_hr, "Mean shift color bandwidth (channel units)");
  seg->add_option("--min-region", seg_min, "Smallest kept region (pixels)");
  seg->add_option("--boundary-dilation", seg_dilation, "Boundary dilation radius (pixels)");
  seg->add_option("--out", seg_prefix, "Output prefix; writes <prefix>.labels.png and <prefix>.regions.json");

  // replay
  std::string rep_script, rep_out, rep_trace, rep_report;
  ParamFlags rep_flags;
  auto* rep = app.add_subcommand("replay", "Replay a stroke script deterministically");
  rep->add_option("script", rep_script, "Stroke script JSON")->required();
  rep->add_option("--out", rep_out, "Output PNG (default <script>.out.png)");
  rep->add_option("--trace", rep_trace, "Selection trace (JSON lines)");
  rep->add_option("--report", rep_report, "Also write the report JSON here");
  rep_flags.attach(rep, true);

  // bench
  int bench_size = 512, bench_iterations = 200;
  bool bench_json = false;
  ParamFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "Time selection and smudge frames on a synthetic painting");
  bench->add_option("--size", bench_size, "Canvas side (512 or 1024 have reference rows)");
  bench->add_option("--iterations", bench_iterations, "Timed stroke samples");
  bench->add_flag("--json", bench_json, "Print the JSON report instead of the table");
  bench_flags.attach(bench, false);

  // compare
  std::string cmp_dir, cmp_out;
  ParamFlags cmp_flags;
  auto* cmp = app.add_subcommand("compare", "Replay a scenario with the ss, bs and ts tools and score them");
  cmp->add_option("scenario", cmp_dir, "Scenario directory (canvas, script.json, expected.json)")->required();
  cmp->add_option("--out", cmp_out, "Output directory (default <scenario>/out)");
  cmp_flags.attach(cmp, false);

  // serve
  std::string serve_params;
  auto* srv = app.add_subcommand("serve", "Serve the session protocol on stdin/stdout");
  srv->add_option("--params", serve_params, "JSON file of parameter overrides")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*seg) {
      nlohmann::json opts = {{"method", seg_method}};
      if (seg_hs) opts["spatial_bandwidth"] = *seg_hs;
      if (seg_hr) opts["color_bandwidth"] = *seg_hr;
      if (seg_min) opts["min_region"] = *seg_min;
      if (seg_dilation) opts["boundary_dilation"] = *seg_dilation;
      std::filesystem::path prefix = seg_prefix;
      if (prefix.empty()) prefix = std::filesystem::path(seg_image).replace_extension();
      const std::string labels = prefix.string() + ".labels.png";
      const std::string index = prefix.string() + ".regions.json";
      Text summary;
      const msm_status s = msm_segment_file(seg_image.c_str(), opts.dump().c_str(), labels.c_str(), index.c_str(), &summary.s);
      if (s != MSM_OK) return report_failure("segment", s);
      std::cout << summary.str() << '\n';
      return kExitOk;
    }
    if (*rep) {
      nlohmann::json opts;
      std::filesystem::path out = rep_out;
      if (out.empty()) {
        out = std::filesystem::path(rep_script);
        out.replace_extension(".out.png");
      }
      opts["out"] = out.string();
      if (!rep_trace.empty()) opts["trace"] = rep_trace;
      if (rep_flags.tool) opts["tool"] = *rep_flags.tool;
      opts["params"] = rep_flags.merged();
      Text report;
      const msm_status s = msm_replay(rep_script.c_str(), opts.dump().c_str(), &report.s);
      if (s != MSM_OK) return report_failure("replay", s);
      if (!rep_report.empty() && !write_text(rep_report, report.str() + "\n")) {
        std::cerr << "msm replay: cannot write " << rep_report << '\n';
        return kExitRuntime;
      }
      std::cout << report.str() << '\n';
      return kExitOk;
    }
    if (*bench) {
      Text report, table;
      const std::string params = bench_flags.merged().dump();
      const msm_status s = msm_bench(bench_size, bench_iterations, params.c_str(), &report.s, &table.s);
      if (s != MSM_OK) return report_failure("bench", s);
      std::cout << (bench_json ? report.str() + "\n" : table.str());
      return kExitOk;
    }
    if (*cmp) {
      std::filesystem::path out = cmp_out.empty() ? std::filesystem::path(cmp_dir) / "out" : std::filesystem::path(cmp_out);
      Text metrics;
      const std::string params = cmp_flags.merged().dump();
      const msm_status s = msm_compare(cmp_dir.c_str(), out.string().c_str(), params.c_str(), &metrics.s);
      if (s != MSM_OK) return report_failure("compare", s);
      std::cout << metrics.str() << '\n';
      return kExitOk;
    }
    if (*srv) {
      std::string params;
      if (!serve_params.empty()) {
        std::ifstream in(serve_params);
        std::stringstream buf;
        buf << in.rdbuf();
        params = buf.str();
      }
      msm_session* session = nullptr;
      msm_status s = msm_session_create(params.empty() ? nullptr : params.c_str(), &session);
      if (s != MSM_OK) return report_failure("serve", s);
      s = msm_serve(session, STDIN_FILENO, STDOUT_FILENO);
      msm_session_destroy(session);
      if (s != MSM_OK) return report_failure("serve", s);
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "msm: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "msm: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
