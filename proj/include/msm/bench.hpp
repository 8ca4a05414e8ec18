#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "msm/replay.hpp"

namespace msm {

/// Reference CPU timings per frame, milliseconds.
struct PublishedReference {
  double selection_ms;
  double smudge_ms;
  int selection_fps;
  int smudge_fps;
};

std::optional<PublishedReference> published_reference(int size);

/// Deterministic flat-filled test painting: 64 px colored cells on a shared
/// background, with a disk in every other cell.
RasterImage synthetic_painting(int size);

struct BenchResult {
  int size = 0;
  int iterations = 0;
  std::size_t regions = 0;
  TimingStats selection_ms;
  TimingStats advance_ms;
  std::size_t stamps = 0;
};

/// Times `iterations` SS advances along a looping stroke.
BenchResult run_bench(int size, int iterations, const SessionParams& params = {});

nlohmann::ordered_json bench_report(const BenchResult& result);
std::string bench_table(const BenchResult& result);

}  // namespace msm
