#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "msm/raster.hpp"

namespace msm {

/// Set of pixels on a fixed width x height grid.
///
/// Storage is a bitmap restricted to a window of rows and 64-pixel column words
/// that grows on demand, so a small set on a large canvas stays small. Two sets
/// on the same grid share word alignment, which keeps intersection counts and
/// unions to plain word operations. Inserts outside the grid are ignored.
class PointSet {
 public:
  PointSet() = default;
  PointSet(int width, int height);

  static PointSet full(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(int x, int y) const;
  bool contains(PixelPos p) const { return contains(p.x, p.y); }

  void insert(int x, int y);
  void insert(PixelPos p) { insert(p.x, p.y); }
  /// Inserts pixels [x0, x1) of row y, clipped to the grid.
  void insert_span(int y, int x0, int x1);
  void erase(int x, int y);

  /// Grows the storage window to cover r in one step; purely a performance hint.
  void reserve(const Rect& r);

  /// Tight bounding rectangle of the members; empty Rect for an empty set.
  Rect bounds() const;

  template <class F>
  void for_each(F&& f) const {
    for (int r = 0; r < rows_; ++r) {
      const std::uint64_t* row = &bits_[static_cast<std::size_t>(r) * words_];
      for (int w = 0; w < words_; ++w) {
        std::uint64_t word = row[w];
        while (word != 0) {
          const int bit = std::countr_zero(word);
          f((word0_ + w) * 64 + bit, row0_ + r);
          word &= word - 1;
        }
      }
    }
  }

  std::vector<PixelPos> points() const;

  friend bool operator==(const PointSet& a, const PointSet& b);

  friend std::size_t intersection_count(const PointSet& a, const PointSet& b);
  friend PointSet set_union(const PointSet& a, const PointSet& b);
  friend PointSet set_intersection(const PointSet& a, const PointSet& b);
  friend PointSet set_difference(const PointSet& a, const PointSet& b);
  friend bool is_subset(const PointSet& a, const PointSet& b);

  /// In-place union; cheaper than set_union when a is reused as an accumulator.
  PointSet& operator|=(const PointSet& other);

 private:
  std::uint64_t* word_ptr(int row, int word) {
    return &bits_[static_cast<std::size_t>(row - row0_) * words_ + (word - word0_)];
  }
  const std::uint64_t* word_ptr(int row, int word) const {
    return &bits_[static_cast<std::size_t>(row - row0_) * words_ + (word - word0_)];
  }
  bool window_covers(int row, int word) const {
    return row >= row0_ && row < row0_ + rows_ && word >= word0_ && word < word0_ + words_;
  }
  void grow_window(int row_begin, int row_end, int word_begin, int word_end);
  static void check_same_grid(const PointSet& a, const PointSet& b);

  int width_ = 0;
  int height_ = 0;
  int row0_ = 0;
  int rows_ = 0;
  int word0_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> bits_;
  std::size_t count_ = 0;
};

}  // namespace msm
