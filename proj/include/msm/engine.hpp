#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "msm/distance.hpp"
#include "msm/regions.hpp"
#include "msm/selection.hpp"
#include "msm/stroke.hpp"

namespace msm {

inline constexpr int kTileSize = 64;

struct BrushParams {
  double theta = 10.0;       ///< floor of the dynamic radius, pixels
  double brush_min = 0.0;
  double brush_max = 200.0;
  double strength = 0.7;     ///< canvas -> pickup blend per stamp
  double pickup_rate = 0.5;  ///< pickup -> canvas refresh per stamp
  double stamp_spacing = 0.25;  ///< stamp interval as a fraction of the radius
  double fixed_radius = 20.0;   ///< BS brush radius (the baseline has no dynamic size)

  void validate() const;
};

struct SessionParams {
  ResemblanceParams resemblance;
  StrokeParams stroke;
  BrushParams brush;
  RegionConfig regions;
  Tool tool = Tool::ss;
  std::size_t undo_depth = 64;

  void validate() const;
};

/// Distance from the nearest pixel center of `pos` to the boundary pixels of
/// the union of the target areas. Throws "no smudge target" on empty targets.
double target_boundary_distance(Point2 pos, const RegionSet& targets, const RegionMap& map);

/// min(max(theta, sigma), brush_max) with sigma = target_boundary_distance.
double dynamic_brush_radius(Point2 pos, const RegionSet& targets, const RegionMap& map, double theta,
                            double brush_max = 200.0);

/// Disk of colors carried by the brush, addressed by integer offset from the
/// stamp center. Cells start invalid and become valid once they pick up a
/// masked canvas pixel.
class PickupBuffer {
 public:
  PickupBuffer() = default;
  explicit PickupBuffer(double radius);

  /// Cells over `mask` pixels of the disk around `center` take the canvas color.
  static PickupBuffer seeded(const RasterImage& canvas, PixelPos center, double radius,
                             const PointSet& mask);

  double radius() const { return radius_; }
  int extent() const { return extent_; }
  bool in_disk(int dx, int dy) const {
    return static_cast<double>(dx) * dx + static_cast<double>(dy) * dy <= radius_ * radius_;
  }
  bool valid(int dx, int dy) const { return valid_[index(dx, dy)] != 0; }
  Rgba at(int dx, int dy) const { return cells_[index(dx, dy)]; }
  void set(int dx, int dy, Rgba c) {
    cells_[index(dx, dy)] = c;
    valid_[index(dx, dy)] = 1;
  }
  std::size_t valid_count() const;

  /// Bilinear resample of the valid cells onto a disk of `new_radius`.
  void resize(double new_radius);

 private:
  std::size_t index(int dx, int dy) const {
    const int side = 2 * extent_ + 1;
    return static_cast<std::size_t>(dy + extent_) * static_cast<std::size_t>(side) +
           static_cast<std::size_t>(dx + extent_);
  }

  double radius_ = 0.0;
  int extent_ = 0;
  std::vector<Rgba> cells_;
  std::vector<std::uint8_t> valid_;
};

struct StampResult {
  std::size_t pixels_changed = 0;
  Rect changed;  ///< bounds of changed pixels
};

/// One smudge dab: for every pixel of disk(nearest_pixel(pos), lambda) inside
/// `mask`, blend the canvas toward its pickup cell by `strength`, then refresh
/// the cell toward the new canvas value by `pickup_rate`. Invalid cells only
/// pick up. Pixels outside the mask or disk are never touched.
StampResult smudge_stamp(RasterImage& canvas, Point2 pos, double lambda, double strength,
                         double pickup_rate, PickupBuffer& pickup, const PointSet& mask);

struct Tile {
  Rect rect;
  std::vector<Rgba> pixels;  ///< row-major, rect.width() * rect.height()
};

struct TileDiff {
  std::vector<Tile> tiles;
  bool clamped = false;  ///< the input sample was outside the canvas
  std::size_t stamps = 0;
};

struct BrushState {
  double theta = 10.0;
  double lambda = 0.0;
  double sigma = 0.0;
  double strength = 0.7;
  double stamp_spacing = 0.25;
  PickupBuffer pickup;
};

struct StrokeRecord {
  Tool tool = Tool::ss;
  std::vector<StrokeSample> samples;  ///< raw samples as submitted
};

struct AdvanceTiming {
  double selection_ms = 0.0;
  double smudge_ms = 0.0;  ///< the whole advance, selection included
  std::size_t stamps = 0;
};

/// Stateful engine behind the CLI, the C API and the message protocol.
/// One writer; every mutating call must come from the same thread.
class SmudgeSession {
 public:
  explicit SmudgeSession(SessionParams params = {});

  void open_canvas(RasterImage canvas);
  void set_region_map(RegionMap map);
  void segment_flat();
  void segment_meanshift(const MeanShiftParams& params);

  /// Rejected while a stroke is active so recorded strokes stay replayable.
  void set_params(const SessionParams& params);
  const SessionParams& params() const { return params_; }

  bool has_canvas() const { return has_canvas_; }
  bool has_regions() const { return has_regions_; }
  bool stroke_active() const { return active_; }

  const RasterImage& canvas() const;
  const RegionMap& regions() const;

  void begin_stroke(Tool tool, const StrokeSample& first);
  void begin_stroke(const StrokeSample& first) { begin_stroke(params_.tool, first); }
  TileDiff advance(const StrokeSample& sample);
  StrokeRecord end_stroke();
  /// Restores the canvas from before the most recent stroke. False when empty.
  /// `restored`, when given, receives the rewritten tiles.
  bool undo(std::vector<Tile>* restored = nullptr);
  std::size_t undo_depth() const { return undo_.size(); }

  Tool active_tool() const { return tool_; }
  const TargetSet& targets() const { return targets_; }
  const BrushState& brush() const { return brush_; }
  const PartialStroke& partial() const { return partial_; }
  const PointSet& mask() const { return mask_; }
  Point2 last_stamp_pos() const { return last_stamp_pos_; }

  /// Per-timestamp selection states of the current (or last) stroke.
  const std::vector<TargetSet>& trace() const { return trace_; }
  /// Regions that were targets at any timestamp of the current (or last) stroke.
  const RegionSet& ever_selected() const { return ever_selected_; }
  const std::vector<AdvanceTiming>& timings() const { return timings_; }

 private:
  struct UndoRecord {
    std::map<int, std::vector<Rgba>> tiles;  // tile index -> pre-stroke pixels
  };

  void require_ready(const char* what) const;
  void update_selection();
  void refresh_mask();
  double radius_at(Point2 pos);
  void snapshot_tiles(const Rect& r);
  void mark_changed(const Rect& r, std::map<int, bool>& touched) const;
  Rect tile_rect(int index) const;
  int tiles_x() const { return (canvas_.width() + kTileSize - 1) / kTileSize; }

  SessionParams params_;
  RasterImage canvas_;
  RegionMap map_;
  bool has_canvas_ = false;
  bool has_regions_ = false;

  bool active_ = false;
  Tool tool_ = Tool::ss;
  StrokeBuilder builder_{2.0};
  std::vector<StrokeSample> raw_;
  std::vector<StrokeSample> resampled_;
  PartialStroke partial_;
  TargetSet targets_;
  std::vector<TargetSet> trace_;
  RegionSet ever_selected_;
  PointSet mask_;
  RegionSet mask_regions_;
  std::optional<DistanceField> sigma_field_;
  BrushState brush_;
  Point2 last_stamp_pos_;
  UndoRecord pending_;
  std::vector<UndoRecord> undo_;
  std::vector<AdvanceTiming> timings_;
};

}  // namespace msm
