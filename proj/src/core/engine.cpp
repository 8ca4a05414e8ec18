#include "msm/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "msm/error.hpp"

namespace msm {

namespace {

constexpr double kMinStampStep = 0.5;

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

Point2 clamp_to_canvas(Point2 p, const RasterImage& canvas, bool& clamped) {
  const Point2 c{std::clamp(p.x, 0.0, static_cast<double>(canvas.width() - 1)),
                 std::clamp(p.y, 0.0, static_cast<double>(canvas.height() - 1))};
  clamped = clamped || !(c == p);
  return c;
}

Rect disk_bounds(PixelPos c, double radius) {
  const int e = static_cast<int>(std::floor(radius));
  return Rect{c.x - e, c.y - e, c.x + e + 1, c.y + e + 1};
}

std::uint8_t round_channel(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

}  // namespace

void BrushParams::validate() const {
  require(theta >= 0.0, "theta must be non-negative");
  require(brush_min >= 0.0 && brush_min <= brush_max, "brush range must satisfy 0 <= min <= max");
  require(brush_max <= 200.0, "brush_max must not exceed 200");
  require(strength >= 0.0 && strength <= 1.0, "strength must lie in [0, 1]");
  require(pickup_rate >= 0.0 && pickup_rate <= 1.0, "pickup_rate must lie in [0, 1]");
  require(stamp_spacing > 0.0, "stamp_spacing must be positive");
  require(fixed_radius > 0.0, "fixed_radius must be positive");
}

void SessionParams::validate() const {
  resemblance.validate();
  brush.validate();
  require(stroke.length > 0.0, "stroke_length must be positive");
  require(stroke.width > 0.0, "stroke_width must be positive");
  require(stroke.resample_spacing > 0.0, "resample_spacing must be positive");
  require(stroke.bone_radius >= 0.0, "bone_radius must be non-negative");
  require(regions.boundary_dilation >= 0.0, "boundary_dilation must be non-negative");
  require(undo_depth >= 1, "undo_depth must be at least 1");
}

double target_boundary_distance(Point2 pos, const RegionSet& targets, const RegionMap& map) {
  if (targets.empty()) fail(ErrorCode::invalid_argument, "no smudge target");
  const PointSet boundary = area_boundary(union_area(targets, map));
  const DistanceField field = distance_transform(boundary);
  const PixelPos p = nearest_pixel(pos);
  require(p.x >= 0 && p.y >= 0 && p.x < map.width() && p.y < map.height(),
          "position lies outside the canvas");
  return field.at(p.x, p.y);
}

double dynamic_brush_radius(Point2 pos, const RegionSet& targets, const RegionMap& map, double theta,
                            double brush_max) {
  const double sigma = target_boundary_distance(pos, targets, map);
  return std::min(std::max(theta, sigma), brush_max);
}

PickupBuffer::PickupBuffer(double radius) : radius_(radius) {
  require(radius >= 0.0, "pickup radius must be non-negative");
  extent_ = static_cast<int>(std::floor(radius));
  const auto side = static_cast<std::size_t>(2 * extent_ + 1);
  cells_.assign(side * side, Rgba{});
  valid_.assign(side * side, 0);
}

PickupBuffer PickupBuffer::seeded(const RasterImage& canvas, PixelPos center, double radius,
                                  const PointSet& mask) {
  PickupBuffer buf(radius);
  for (int dy = -buf.extent_; dy <= buf.extent_; ++dy) {
    for (int dx = -buf.extent_; dx <= buf.extent_; ++dx) {
      if (!buf.in_disk(dx, dy)) continue;
      const int x = center.x + dx;
      const int y = center.y + dy;
      if (canvas.contains(x, y) && mask.contains(x, y)) buf.set(dx, dy, canvas.at(x, y));
    }
  }
  return buf;
}

std::size_t PickupBuffer::valid_count() const {
  return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), std::uint8_t{1}));
}

void PickupBuffer::resize(double new_radius) {
  if (new_radius == radius_) return;
  PickupBuffer next(new_radius);
  if (radius_ > 0.0 && new_radius > 0.0) {
    const double scale = radius_ / new_radius;
    for (int dy = -next.extent_; dy <= next.extent_; ++dy) {
      for (int dx = -next.extent_; dx <= next.extent_; ++dx) {
        if (!next.in_disk(dx, dy)) continue;
        const double sx = dx * scale;
        const double sy = dy * scale;
        const int x0 = static_cast<int>(std::floor(sx));
        const int y0 = static_cast<int>(std::floor(sy));
        const double fx = sx - x0;
        const double fy = sy - y0;
        double acc[4] = {0, 0, 0, 0};
        double total = 0.0;
        const auto take = [&](int cx, int cy, double w) {
          if (w <= 0.0 || std::abs(cx) > extent_ || std::abs(cy) > extent_) return;
          if (!in_disk(cx, cy) || !valid(cx, cy)) return;
          const Rgba c = at(cx, cy);
          for (int ch = 0; ch < 4; ++ch) acc[ch] += w * c[ch];
          total += w;
        };
        take(x0, y0, (1 - fx) * (1 - fy));
        take(x0 + 1, y0, fx * (1 - fy));
        take(x0, y0 + 1, (1 - fx) * fy);
        take(x0 + 1, y0 + 1, fx * fy);
        if (total <= 0.0) continue;
        next.set(dx, dy, Rgba{round_channel(acc[0] / total), round_channel(acc[1] / total),
                              round_channel(acc[2] / total), round_channel(acc[3] / total)});
      }
    }
  }
  *this = std::move(next);
}

StampResult smudge_stamp(RasterImage& canvas, Point2 pos, double lambda, double strength,
                         double pickup_rate, PickupBuffer& pickup, const PointSet& mask) {
  require(lambda > 0.0, "stamp radius must be positive");
  require(strength >= 0.0 && strength <= 1.0, "strength must lie in [0, 1]");
  require(pickup_rate >= 0.0 && pickup_rate <= 1.0, "pickup_rate must lie in [0, 1]");
  pickup.resize(lambda);
  StampResult result;
  const PixelPos c = nearest_pixel(pos);
  const int e = pickup.extent();
  for (int dy = -e; dy <= e; ++dy) {
    const int y = c.y + dy;
    if (y < 0 || y >= canvas.height()) continue;
    for (int dx = -e; dx <= e; ++dx) {
      const int x = c.x + dx;
      if (x < 0 || x >= canvas.width() || !pickup.in_disk(dx, dy) || !mask.contains(x, y)) continue;
      Rgba& px = canvas.at(x, y);
      if (!pickup.valid(dx, dy)) {
        pickup.set(dx, dy, px);
        continue;
      }
      const Rgba before = px;
      px = lerp_color(px, pickup.at(dx, dy), strength);
      pickup.set(dx, dy, lerp_color(pickup.at(dx, dy), px, pickup_rate));
      if (!(px == before)) {
        ++result.pixels_changed;
        result.changed = bounding_union(result.changed, Rect{x, y, x + 1, y + 1});
      }
    }
  }
  return result;
}

SmudgeSession::SmudgeSession(SessionParams params) : params_(std::move(params)) {
  params_.validate();
}

void SmudgeSession::open_canvas(RasterImage canvas) {
  if (active_) fail(ErrorCode::state, "cannot open a canvas while a stroke is active");
  canvas_ = std::move(canvas);
  has_canvas_ = true;
  has_regions_ = false;
  map_ = RegionMap{};
  undo_.clear();
  trace_.clear();
  ever_selected_.clear();
  timings_.clear();
}

void SmudgeSession::set_region_map(RegionMap map) {
  if (active_) fail(ErrorCode::state, "cannot replace the region map while a stroke is active");
  if (!has_canvas_) fail(ErrorCode::state, "open a canvas before setting a region map");
  require(map.width() == canvas_.width() && map.height() == canvas_.height(),
          "region map size does not match the canvas");
  map_ = std::move(map);
  has_regions_ = true;
}

void SmudgeSession::segment_flat() {
  if (!has_canvas_) fail(ErrorCode::state, "open a canvas before segmenting");
  set_region_map(flat_fill_regions(canvas_, params_.regions));
}

void SmudgeSession::segment_meanshift(const MeanShiftParams& params) {
  if (!has_canvas_) fail(ErrorCode::state, "open a canvas before segmenting");
  set_region_map(meanshift_regions(canvas_, params, params_.regions));
}

void SmudgeSession::set_params(const SessionParams& params) {
  if (active_) fail(ErrorCode::state, "parameters cannot change during a stroke");
  params.validate();
  const bool dilation_changed = params.regions.boundary_dilation != params_.regions.boundary_dilation;
  params_ = params;
  if (dilation_changed && has_regions_) {
    // Dilated boundaries depend on the configured radius.
    std::vector<std::int32_t> labels(map_.labels().begin(), map_.labels().end());
    std::vector<Rgba> colors;
    for (const Region& r : map_.regions()) colors.push_back(r.color);
    map_ = RegionMap::from_labels(map_.width(), map_.height(), labels, std::span<const Rgba>(colors),
                                  nullptr, params_.regions);
  }
}

const RasterImage& SmudgeSession::canvas() const {
  if (!has_canvas_) fail(ErrorCode::state, "no canvas is open");
  return canvas_;
}

const RegionMap& SmudgeSession::regions() const {
  if (!has_regions_) fail(ErrorCode::state, "the canvas has not been segmented");
  return map_;
}

void SmudgeSession::require_ready(const char* what) const {
  if (!has_canvas_) fail(ErrorCode::state, std::string(what) + ": no canvas is open");
  if (!has_regions_) fail(ErrorCode::state, std::string(what) + ": the canvas has not been segmented");
}

void SmudgeSession::update_selection() {
  switch (tool_) {
    case Tool::ss:
      targets_ = update_target_set(targets_, partial_, map_, params_.resemblance);
      break;
    case Tool::ts: {
      TargetSet next;
      next.t = targets_.t + 1;
      next.covered = covered_regions(partial_.footprint, map_);
      next.selected = ts_select(partial_, next.covered, map_, params_.resemblance, &next.candidates);
      targets_ = std::move(next);
      break;
    }
    case Tool::bs: {
      TargetSet next;
      next.t = targets_.t + 1;
      next.covered = covered_regions(partial_.footprint, map_);
      targets_ = std::move(next);
      break;
    }
  }
  trace_.push_back(targets_);
  ever_selected_ = set_union(ever_selected_, targets_.selected);
}

void SmudgeSession::refresh_mask() {
  if (tool_ == Tool::bs) {
    mask_ = bs_select(partial_.footprint);
    return;
  }
  if (targets_.selected == mask_regions_ && mask_.width() == canvas_.width()) return;
  mask_regions_ = targets_.selected;
  mask_ = union_area(mask_regions_, map_);
  sigma_field_.reset();
}

double SmudgeSession::radius_at(Point2 pos) {
  const BrushParams& b = params_.brush;
  if (tool_ == Tool::bs) return std::clamp(b.fixed_radius, b.brush_min, b.brush_max);
  if (mask_.empty()) return 0.0;
  if (!sigma_field_.has_value()) sigma_field_ = distance_transform(area_boundary(mask_));
  const PixelPos p = nearest_pixel(pos);
  brush_.sigma = sigma_field_->at(p.x, p.y);
  return std::clamp(std::max(b.theta, brush_.sigma), b.brush_min, b.brush_max);
}

Rect SmudgeSession::tile_rect(int index) const {
  const int tx = index % tiles_x();
  const int ty = index / tiles_x();
  return intersect(Rect{tx * kTileSize, ty * kTileSize, (tx + 1) * kTileSize, (ty + 1) * kTileSize},
                   canvas_.bounds());
}

void SmudgeSession::snapshot_tiles(const Rect& r) {
  const Rect clip = intersect(r, canvas_.bounds());
  if (clip.empty()) return;
  for (int ty = clip.y0 / kTileSize; ty <= (clip.y1 - 1) / kTileSize; ++ty) {
    for (int tx = clip.x0 / kTileSize; tx <= (clip.x1 - 1) / kTileSize; ++tx) {
      const int index = ty * tiles_x() + tx;
      if (pending_.tiles.count(index) != 0) continue;
      const Rect t = tile_rect(index);
      std::vector<Rgba> pixels;
      pixels.reserve(static_cast<std::size_t>(t.width()) * t.height());
      for (int y = t.y0; y < t.y1; ++y) {
        for (int x = t.x0; x < t.x1; ++x) pixels.push_back(canvas_.at(x, y));
      }
      pending_.tiles.emplace(index, std::move(pixels));
    }
  }
}

void SmudgeSession::mark_changed(const Rect& r, std::map<int, bool>& touched) const {
  if (r.empty()) return;
  for (int ty = r.y0 / kTileSize; ty <= (r.y1 - 1) / kTileSize; ++ty) {
    for (int tx = r.x0 / kTileSize; tx <= (r.x1 - 1) / kTileSize; ++tx) touched[ty * tiles_x() + tx] = true;
  }
}

void SmudgeSession::begin_stroke(Tool tool, const StrokeSample& first) {
  require_ready("begin_stroke");
  if (active_) fail(ErrorCode::state, "a stroke is already active");
  tool_ = tool;
  active_ = true;
  builder_ = StrokeBuilder(params_.stroke.resample_spacing);
  raw_.assign(1, first);
  bool clamped = false;
  StrokeSample s = first;
  s.pos = clamp_to_canvas(first.pos, canvas_, clamped);
  builder_.add(s);
  builder_.resampled(resampled_);
  partial_ = make_partial_stroke(resampled_, params_.stroke, canvas_.width(), canvas_.height());
  targets_ = TargetSet{};
  trace_.clear();
  ever_selected_.clear();
  timings_.clear();
  mask_regions_.clear();
  mask_ = PointSet{};
  sigma_field_.reset();
  pending_ = UndoRecord{};
  update_selection();
  refresh_mask();

  brush_ = BrushState{};
  brush_.theta = params_.brush.theta;
  brush_.strength = params_.brush.strength;
  brush_.stamp_spacing = params_.brush.stamp_spacing;
  brush_.lambda = radius_at(s.pos);
  if (brush_.lambda > 0.0) {
    brush_.pickup = PickupBuffer::seeded(canvas_, nearest_pixel(s.pos), brush_.lambda, mask_);
  }
  last_stamp_pos_ = s.pos;
}

TileDiff SmudgeSession::advance(const StrokeSample& sample) {
  if (!active_) fail(ErrorCode::state, "advance: no active stroke");
  const auto start = std::chrono::steady_clock::now();
  TileDiff diff;
  StrokeSample s = sample;
  s.pos = clamp_to_canvas(sample.pos, canvas_, diff.clamped);
  raw_.push_back(sample);
  builder_.add(s);
  builder_.resampled(resampled_);
  partial_ = make_partial_stroke(resampled_, params_.stroke, canvas_.width(), canvas_.height());
  update_selection();
  refresh_mask();
  AdvanceTiming timing;
  timing.selection_ms = elapsed_ms(start);

  double strength = params_.brush.strength;
  if (s.pressure.has_value()) strength *= std::clamp(*s.pressure, 0.0, 1.0);
  brush_.strength = strength;

  std::map<int, bool> touched;
  const Point2 from = last_stamp_pos_;
  const Point2 to = s.pos;
  const double d = distance(from, to);
  if (d > 0.0 && !mask_.empty()) {
    const double ux = (to.x - from.x) / d;
    const double uy = (to.y - from.y) / d;
    double travelled = 0.0;
    Point2 cur = from;
    while (true) {
      const double step = std::max(params_.brush.stamp_spacing * radius_at(cur), kMinStampStep);
      if (travelled + step > d + 1e-9) break;
      travelled += step;
      cur = travelled >= d - 1e-9 ? to : Point2{from.x + ux * travelled, from.y + uy * travelled};
      const double lambda = radius_at(cur);
      brush_.lambda = lambda;
      if (lambda > 0.0) {
        snapshot_tiles(disk_bounds(nearest_pixel(cur), lambda));
        const StampResult r = smudge_stamp(canvas_, cur, lambda, strength, params_.brush.pickup_rate,
                                           brush_.pickup, mask_);
        mark_changed(r.changed, touched);
      }
      last_stamp_pos_ = cur;
      ++diff.stamps;
    }
  }
  for (const auto& [index, unused] : touched) {
    Tile tile;
    tile.rect = tile_rect(index);
    tile.pixels.reserve(static_cast<std::size_t>(tile.rect.width()) * tile.rect.height());
    for (int y = tile.rect.y0; y < tile.rect.y1; ++y) {
      for (int x = tile.rect.x0; x < tile.rect.x1; ++x) tile.pixels.push_back(canvas_.at(x, y));
    }
    diff.tiles.push_back(std::move(tile));
  }
  timing.smudge_ms = elapsed_ms(start);
  timing.stamps = diff.stamps;
  timings_.push_back(timing);
  return diff;
}

StrokeRecord SmudgeSession::end_stroke() {
  if (!active_) fail(ErrorCode::state, "end_stroke: no active stroke");
  active_ = false;
  undo_.push_back(std::move(pending_));
  pending_ = UndoRecord{};
  if (undo_.size() > params_.undo_depth) undo_.erase(undo_.begin());
  return StrokeRecord{tool_, raw_};
}

bool SmudgeSession::undo(std::vector<Tile>* restored) {
  if (active_) fail(ErrorCode::state, "cannot undo during a stroke");
  if (undo_.empty()) return false;
  const UndoRecord record = std::move(undo_.back());
  undo_.pop_back();
  for (const auto& [index, pixels] : record.tiles) {
    const Rect t = tile_rect(index);
    std::size_t i = 0;
    for (int y = t.y0; y < t.y1; ++y) {
      for (int x = t.x0; x < t.x1; ++x) canvas_.at(x, y) = pixels[i++];
    }
    if (restored != nullptr) restored->push_back(Tile{t, pixels});
  }
  return true;
}

}  // namespace msm
