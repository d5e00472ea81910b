#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gridweld/design.hpp"

namespace gridweld {

/// The m x n matrix of potential via sites. Immutable after construction;
/// safe to share across concurrent workers.
class candidate_grid {
 public:
  candidate_grid(int rows, int cols, conflict_mode mode,
                 std::vector<std::uint8_t> available)
      : rows_(rows), cols_(cols), mode_(mode), available_(std::move(available)) {
    if (rows_ < 1 || cols_ < 1)
      throw std::invalid_argument("candidate grid must be at least 1x1");
    if (available_.size() != static_cast<std::size_t>(rows_) * cols_)
      throw std::invalid_argument("availability mask size mismatch");
  }

  static candidate_grid all_available(int rows, int cols, conflict_mode mode) {
    return candidate_grid(rows, cols, mode,
                          std::vector<std::uint8_t>(
                              static_cast<std::size_t>(rows) * cols, 1));
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const conflict_mode& mode() const { return mode_; }

  bool in_range(site s) const {
    return s.row >= 1 && s.row <= rows_ && s.col >= 1 && s.col <= cols_;
  }

  bool available(site s) const { return available_[cell_index(s)] != 0; }
  bool available(int row, int col) const { return available({row, col}); }

  int available_count() const {
    int n = 0;
    for (std::uint8_t b : available_) n += b != 0;
    return n;
  }

  /// Row-major mask, index (row-1)*cols + (col-1).
  const std::vector<std::uint8_t>& available_mask() const { return available_; }

  /// Copy of this grid with one more site made unavailable.
  candidate_grid without(site s) const {
    candidate_grid g = *this;
    g.available_[cell_index(s)] = 0;
    return g;
  }

  std::size_t cell_index(site s) const {
    if (!in_range(s))
      throw std::out_of_range("site " + to_string(s) + " outside " +
                              std::to_string(rows_) + "x" +
                              std::to_string(cols_) + " grid");
    return static_cast<std::size_t>(s.row - 1) * cols_ + (s.col - 1);
  }

 private:
  int rows_;
  int cols_;
  conflict_mode mode_;
  std::vector<std::uint8_t> available_;
};

/// Extracts the via-candidate matrix from open space. A site is available
/// iff it is not blocked, not an existing via, and no existing via lies
/// within its conflict neighborhood (existing vias consume spacing too).
/// Throws std::out_of_range on malformed (out-of-range) input indices.
inline candidate_grid build_candidate_grid(const design_description& d) {
  if (d.rows < 1 || d.cols < 1)
    throw std::out_of_range("design dimensions must be >= 1x1");
  const int m = d.rows, n = d.cols;
  auto require_in_range = [&](site s, const char* what) {
    if (s.row < 1 || s.row > m || s.col < 1 || s.col > n)
      throw std::out_of_range(std::string(what) + " at " + to_string(s) +
                              " outside " + std::to_string(m) + "x" +
                              std::to_string(n) + " grid");
  };

  std::vector<std::uint8_t> mask(static_cast<std::size_t>(m) * n, 1);
  auto at = [&](int r, int c) -> std::uint8_t& {
    return mask[static_cast<std::size_t>(r - 1) * n + (c - 1)];
  };

  for (site s : d.blocked) {
    require_in_range(s, "blocked site");
    at(s.row, s.col) = 0;
  }
  const int reach = d.mode.reach();
  for (site v : d.existing_vias) {
    require_in_range(v, "existing via");
    at(v.row, v.col) = 0;
    for (int dr = -reach; dr <= reach; ++dr)
      for (int dc = -reach; dc <= reach; ++dc) {
        const site s{v.row + dr, v.col + dc};
        if (s.row >= 1 && s.row <= m && s.col >= 1 && s.col <= n &&
            d.mode.conflicts(s, v))
          at(s.row, s.col) = 0;
      }
  }
  return candidate_grid(m, n, d.mode, std::move(mask));
}

/// All in-range available sites conflicting with `s` under the grid's mode,
/// in row-major order; `s` itself is excluded. Throws std::out_of_range if
/// `s` is outside the grid.
inline std::vector<site> conflicts_of(const candidate_grid& grid, site s) {
  if (!grid.in_range(s))
    throw std::out_of_range("site " + to_string(s) + " outside grid");
  std::vector<site> out;
  const int reach = grid.mode().reach();
  for (int dr = -reach; dr <= reach; ++dr)
    for (int dc = -reach; dc <= reach; ++dc) {
      const site t{s.row + dr, s.col + dc};
      if (grid.in_range(t) && grid.available(t) && grid.mode().conflicts(s, t))
        out.push_back(t);
    }
  return out;
}

}  // namespace gridweld
