#include "msm/point_set.hpp"

#include <algorithm>

#include "msm/error.hpp"

namespace msm {

namespace {

int word_of(int x) { return x >> 6; }

std::uint64_t bit_of(int x) { return std::uint64_t{1} << (x & 63); }

// Bits [lo, hi) within a single word, 0 <= lo < hi <= 64.
std::uint64_t bit_range(int lo, int hi) {
  const std::uint64_t upper = hi >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << hi) - 1;
  const std::uint64_t lower = (std::uint64_t{1} << lo) - 1;
  return upper & ~lower;
}

}  // namespace

PointSet::PointSet(int width, int height) : width_(width), height_(height) {
  require(width >= 0 && height >= 0, "point set dimensions must be non-negative");
}

PointSet PointSet::full(int width, int height) {
  PointSet s(width, height);
  s.reserve(Rect{0, 0, width, height});
  for (int y = 0; y < height; ++y) s.insert_span(y, 0, width);
  return s;
}

bool PointSet::contains(int x, int y) const {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return false;
  const int w = word_of(x);
  if (!window_covers(y, w)) return false;
  return (*word_ptr(y, w) & bit_of(x)) != 0;
}

void PointSet::grow_window(int row_begin, int row_end, int word_begin, int word_end) {
  if (rows_ > 0 && words_ > 0) {
    row_begin = std::min(row_begin, row0_);
    row_end = std::max(row_end, row0_ + rows_);
    word_begin = std::min(word_begin, word0_);
    word_end = std::max(word_end, word0_ + words_);
  }
  if (rows_ > 0 && words_ > 0 && row_begin == row0_ && row_end == row0_ + rows_ &&
      word_begin == word0_ && word_end == word0_ + words_) {
    return;
  }
  const int new_rows = row_end - row_begin;
  const int new_words = word_end - word_begin;
  std::vector<std::uint64_t> next(static_cast<std::size_t>(new_rows) * new_words, 0);
  for (int r = 0; r < rows_; ++r) {
    const int dst_row = row0_ + r - row_begin;
    std::copy_n(&bits_[static_cast<std::size_t>(r) * words_], words_,
                &next[static_cast<std::size_t>(dst_row) * new_words + (word0_ - word_begin)]);
  }
  bits_ = std::move(next);
  row0_ = row_begin;
  rows_ = new_rows;
  word0_ = word_begin;
  words_ = new_words;
}

void PointSet::reserve(const Rect& r) {
  const Rect clip = intersect(r, Rect{0, 0, width_, height_});
  if (clip.empty()) return;
  grow_window(clip.y0, clip.y1, word_of(clip.x0), word_of(clip.x1 - 1) + 1);
}

void PointSet::insert(int x, int y) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
  const int w = word_of(x);
  if (!window_covers(y, w)) grow_window(y, y + 1, w, w + 1);
  std::uint64_t& word = *word_ptr(y, w);
  const std::uint64_t b = bit_of(x);
  if ((word & b) == 0) {
    word |= b;
    ++count_;
  }
}

void PointSet::insert_span(int y, int x0, int x1) {
  if (y < 0 || y >= height_) return;
  x0 = std::max(x0, 0);
  x1 = std::min(x1, width_);
  if (x1 <= x0) return;
  const int w_begin = word_of(x0);
  const int w_end = word_of(x1 - 1) + 1;
  if (!window_covers(y, w_begin) || !window_covers(y, w_end - 1)) {
    grow_window(y, y + 1, w_begin, w_end);
  }
  for (int w = w_begin; w < w_end; ++w) {
    const int lo = (w == w_begin) ? (x0 & 63) : 0;
    const int hi = (w == w_end - 1) ? ((x1 - 1) & 63) + 1 : 64;
    const std::uint64_t mask = bit_range(lo, hi);
    std::uint64_t& word = *word_ptr(y, w);
    count_ += static_cast<std::size_t>(std::popcount(mask & ~word));
    word |= mask;
  }
}

void PointSet::erase(int x, int y) {
  if (!contains(x, y)) return;
  *word_ptr(y, word_of(x)) &= ~bit_of(x);
  --count_;
}

Rect PointSet::bounds() const {
  if (count_ == 0) return Rect{};
  int y0 = height_, y1 = -1, x0 = width_, x1 = -1;
  for (int r = 0; r < rows_; ++r) {
    const std::uint64_t* row = &bits_[static_cast<std::size_t>(r) * words_];
    for (int w = 0; w < words_; ++w) {
      if (row[w] == 0) continue;
      const int y = row0_ + r;
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
      x0 = std::min(x0, (word0_ + w) * 64 + std::countr_zero(row[w]));
      x1 = std::max(x1, (word0_ + w) * 64 + 63 - std::countl_zero(row[w]));
    }
  }
  return Rect{x0, y0, x1 + 1, y1 + 1};
}

std::vector<PixelPos> PointSet::points() const {
  std::vector<PixelPos> out;
  out.reserve(count_);
  for_each([&](int x, int y) { out.push_back(PixelPos{x, y}); });
  return out;
}

void PointSet::check_same_grid(const PointSet& a, const PointSet& b) {
  require(a.width_ == b.width_ && a.height_ == b.height_,
          "point sets belong to different pixel grids");
}

bool operator==(const PointSet& a, const PointSet& b) {
  if (a.width_ != b.width_ || a.height_ != b.height_ || a.count_ != b.count_) return false;
  return intersection_count(a, b) == a.count_;
}

std::size_t intersection_count(const PointSet& a, const PointSet& b) {
  PointSet::check_same_grid(a, b);
  if (a.count_ == 0 || b.count_ == 0) return 0;
  const int r_begin = std::max(a.row0_, b.row0_);
  const int r_end = std::min(a.row0_ + a.rows_, b.row0_ + b.rows_);
  const int w_begin = std::max(a.word0_, b.word0_);
  const int w_end = std::min(a.word0_ + a.words_, b.word0_ + b.words_);
  if (r_end <= r_begin || w_end <= w_begin) return 0;
  std::size_t n = 0;
  for (int y = r_begin; y < r_end; ++y) {
    const std::uint64_t* pa = a.word_ptr(y, w_begin);
    const std::uint64_t* pb = b.word_ptr(y, w_begin);
    for (int w = 0; w < w_end - w_begin; ++w) {
      n += static_cast<std::size_t>(std::popcount(pa[w] & pb[w]));
    }
  }
  return n;
}

PointSet& PointSet::operator|=(const PointSet& other) {
  check_same_grid(*this, other);
  if (other.count_ == 0) return *this;
  grow_window(other.row0_, other.row0_ + other.rows_, other.word0_, other.word0_ + other.words_);
  std::size_t n = 0;
  for (int r = 0; r < rows_; ++r) {
    std::uint64_t* row = &bits_[static_cast<std::size_t>(r) * words_];
    const int y = row0_ + r;
    if (other.window_covers(y, other.word0_)) {
      const std::uint64_t* src = other.word_ptr(y, other.word0_);
      std::uint64_t* dst = row + (other.word0_ - word0_);
      for (int w = 0; w < other.words_; ++w) dst[w] |= src[w];
    }
    for (int w = 0; w < words_; ++w) n += static_cast<std::size_t>(std::popcount(row[w]));
  }
  count_ = n;
  return *this;
}

PointSet set_union(const PointSet& a, const PointSet& b) {
  PointSet out = a;
  out |= b;
  return out;
}

PointSet set_intersection(const PointSet& a, const PointSet& b) {
  PointSet::check_same_grid(a, b);
  PointSet out(a.width_, a.height_);
  if (a.count_ == 0 || b.count_ == 0) return out;
  const int r_begin = std::max(a.row0_, b.row0_);
  const int r_end = std::min(a.row0_ + a.rows_, b.row0_ + b.rows_);
  const int w_begin = std::max(a.word0_, b.word0_);
  const int w_end = std::min(a.word0_ + a.words_, b.word0_ + b.words_);
  if (r_end <= r_begin || w_end <= w_begin) return out;
  out.grow_window(r_begin, r_end, w_begin, w_end);
  std::size_t n = 0;
  for (int y = r_begin; y < r_end; ++y) {
    const std::uint64_t* pa = a.word_ptr(y, w_begin);
    const std::uint64_t* pb = b.word_ptr(y, w_begin);
    std::uint64_t* po = out.word_ptr(y, w_begin);
    for (int w = 0; w < w_end - w_begin; ++w) {
      po[w] = pa[w] & pb[w];
      n += static_cast<std::size_t>(std::popcount(po[w]));
    }
  }
  out.count_ = n;
  return out;
}

PointSet set_difference(const PointSet& a, const PointSet& b) {
  PointSet::check_same_grid(a, b);
  PointSet out = a;
  if (a.count_ == 0 || b.count_ == 0) return out;
  std::size_t removed = 0;
  for (int r = 0; r < out.rows_; ++r) {
    const int y = out.row0_ + r;
    for (int w = 0; w < out.words_; ++w) {
      const int word = out.word0_ + w;
      if (!b.window_covers(y, word)) continue;
      std::uint64_t& dst = *out.word_ptr(y, word);
      const std::uint64_t cut = dst & *b.word_ptr(y, word);
      removed += static_cast<std::size_t>(std::popcount(cut));
      dst &= ~cut;
    }
  }
  out.count_ -= removed;
  return out;
}

bool is_subset(const PointSet& a, const PointSet& b) {
  return intersection_count(a, b) == a.count_;
}

}  // namespace msm
