#pragma once

#include <bit>
#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gridweld/grid.hpp"
#include "gridweld/selection.hpp"

namespace gridweld {

/// Limits for one exact solve. A limit that is hit does not abort the solve:
/// the best feasible selection found so far is returned with
/// proven_optimal = false.
struct solve_budget {
  std::optional<long long> max_nodes;  // branch-and-bound decision count
  std::optional<double> time_limit_s;
};

class grid_too_large : public std::runtime_error {
 public:
  explicit grid_too_large(const std::string& msg) : std::runtime_error(msg) {}
};

struct column_solution {
  int count = 0;
  std::vector<int> rows;  // 1-based, ascending
};

/// Maximum independent set on the path graph induced by the available rows
/// of one column: no two chosen rows may be vertically adjacent. O(m) time.
/// Ties are broken take-first (the smaller row index is preferred), so an
/// all-available column of length m yields rows 1, 3, 5, ...
inline column_solution solve_column_dp(const std::vector<std::uint8_t>& available) {
  const int m = static_cast<int>(available.size());
  // best[i] = maximum count achievable using rows i..m (1-based).
  std::vector<int> best(m + 3, 0);
  for (int i = m; i >= 1; --i) {
    const int skip = best[i + 1];
    const int take = available[i - 1] ? 1 + best[i + 2] : -1;
    best[i] = take > skip ? take : skip;
  }
  column_solution out;
  for (int i = 1; i <= m;) {
    if (available[i - 1] && 1 + best[i + 2] >= best[i + 1]) {
      out.rows.push_back(i);
      i += 2;
    } else {
      ++i;
    }
  }
  out.count = static_cast<int>(out.rows.size());
  return out;
}

/// True iff every chosen site is available and no chosen pair conflicts.
inline bool verify_feasible(const candidate_grid& grid, const selection& sel) {
  const int m = grid.rows(), n = grid.cols();
  std::vector<std::uint8_t> chosen(static_cast<std::size_t>(m) * n, 0);
  for (site s : sel.chosen) {
    if (!grid.in_range(s) || !grid.available(s)) return false;
    chosen[grid.cell_index(s)] = 1;
  }
  const int reach = grid.mode().reach();
  for (site s : sel.chosen)
    for (int dr = -reach; dr <= reach; ++dr)
      for (int dc = -reach; dc <= reach; ++dc) {
        const site t{s.row + dr, s.col + dc};
        if (t != s && grid.in_range(t) && chosen[grid.cell_index(t)] &&
            grid.mode().conflicts(s, t))
          return false;
      }
  return true;
}

namespace detail {

/// Flat bitset sized once; the solver keeps all candidate sets in these.
class bitset {
 public:
  bitset() = default;
  explicit bitset(int bits) : words_((bits + 63) / 64, 0) {}

  void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(int i) const {
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  bool empty() const {
    for (std::uint64_t w : words_)
      if (w) return false;
    return true;
  }

  int first_set() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i]) return static_cast<int>(i * 64 + std::countr_zero(words_[i]));
    return -1;
  }

  void subtract(const bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  }

  void intersect(const bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  }

  void assign_and(const bitset& x, const bitset& y) {
    for (std::size_t i = 0; i < words_.size(); ++i)
      words_[i] = x.words_[i] & y.words_[i];
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct conflict_graph {
  // Available sites in column-major order. The solver branches in index
  // order, and a column sweep keeps the undecided frontier one column band
  // tall; sweeping by rows instead would drag a frontier as wide as the
  // whole grid and the bound could no longer prune wide instances.
  std::vector<site> sites;
  std::vector<bitset> adjacent;  // over site indices
  // Sites sharing an (r+1)x(r+1)-aligned tile are pairwise in conflict, so
  // each tile is a clique; clique covers seeded from tiles stay near-optimal
  // on regular regions of the grid.
  std::vector<int> tile_of;
  std::vector<bitset> tile_members;
};

inline conflict_graph build_conflict_graph(const candidate_grid& grid) {
  const int m = grid.rows(), n = grid.cols();
  conflict_graph g;
  std::vector<int> index(static_cast<std::size_t>(m) * n, -1);
  for (int c = 1; c <= n; ++c)
    for (int r = 1; r <= m; ++r)
      if (grid.available(r, c)) {
        index[static_cast<std::size_t>(r - 1) * n + (c - 1)] =
            static_cast<int>(g.sites.size());
        g.sites.push_back({r, c});
      }
  const int k = static_cast<int>(g.sites.size());
  g.adjacent.assign(k, bitset(k));
  const int reach = grid.mode().reach();
  for (int i = 0; i < k; ++i) {
    const site s = g.sites[i];
    for (int dr = -reach; dr <= reach; ++dr)
      for (int dc = -reach; dc <= reach; ++dc) {
        const site t{s.row + dr, s.col + dc};
        if (!grid.in_range(t)) continue;
        const int j = index[static_cast<std::size_t>(t.row - 1) * n + (t.col - 1)];
        if (j >= 0 && j != i && grid.mode().conflicts(s, t))
          g.adjacent[i].set(j);
      }
  }

  const int side = reach + 1;
  const int tiles_per_row = (n + side - 1) / side;
  const int tile_count = ((m + side - 1) / side) * tiles_per_row;
  g.tile_of.resize(k);
  g.tile_members.assign(tile_count, bitset(k));
  for (int i = 0; i < k; ++i) {
    const int tile =
        (g.sites[i].row - 1) / side * tiles_per_row + (g.sites[i].col - 1) / side;
    g.tile_of[i] = tile;
    g.tile_members[tile].set(i);
  }
  return g;
}

/// Exact maximum independent set by depth-first branch and bound.
///
/// Branching is row-major with the include branch explored first, which both
/// fixes the result deterministically and lands on a strong greedy incumbent
/// immediately. Pruning uses a greedy clique cover of the remaining
/// candidates (the dual of coloring): an independent set can take at most
/// one vertex per clique, so the cover size is an admissible upper bound.
/// Cover construction aborts early once it can no longer prune.
class max_independent_set_solver {
 public:
  max_independent_set_solver(const conflict_graph& g, const solve_budget& budget)
      : graph_(g),
        budget_(budget),
        cover_left_(static_cast<int>(g.sites.size())),
        cover_q_(static_cast<int>(g.sites.size())) {}

  /// Returns chosen site indices (ascending) and whether optimality was
  /// proven (false iff a budget limit stopped the search).
  std::pair<std::vector<int>, bool> solve() {
    const int k = static_cast<int>(graph_.sites.size());
    bitset all(k);
    for (int i = 0; i < k; ++i) all.set(i);
    if (budget_.time_limit_s)
      deadline_ = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(*budget_.time_limit_s));
    expand(std::move(all));
    return {best_, !stopped_};
  }

 private:
  void expand(bitset p) {
    if (include_.size() > best_.size()) best_ = include_;
    while (!p.empty()) {
      if (stopped_) return;
      ++nodes_;
      if (budget_.max_nodes && nodes_ > *budget_.max_nodes) {
        stopped_ = true;
        return;
      }
      if (deadline_ && (nodes_ & 1023) == 0 &&
          std::chrono::steady_clock::now() >= *deadline_) {
        stopped_ = true;
        return;
      }
      const int allowance =
          static_cast<int>(best_.size()) - static_cast<int>(include_.size());
      if (allowance >= 0 && cover_bound(p, allowance + 1) <= allowance)
        return;  // cannot beat the incumbent from here
      const int v = p.first_set();
      bitset q = p;
      q.subtract(graph_.adjacent[v]);
      q.reset(v);
      include_.push_back(v);
      expand(std::move(q));
      include_.pop_back();
      if (stopped_) return;
      p.reset(v);
    }
  }

  // Greedy clique cover of p, capped at `cap` cliques. Each clique starts
  // with every remaining member of the first uncovered site's tile (pairwise
  // in conflict by construction), then extends with common neighbors.
  int cover_bound(const bitset& p, int cap) {
    cover_left_ = p;
    int cliques = 0;
    while (!cover_left_.empty()) {
      ++cliques;
      if (cliques >= cap) return cliques;
      const int v = cover_left_.first_set();
      cover_q_.assign_and(cover_left_, graph_.tile_members[graph_.tile_of[v]]);
      cover_ext_ = graph_.adjacent[v];
      for (int u = cover_q_.first_set(); u >= 0; u = cover_q_.first_set()) {
        cover_q_.reset(u);
        cover_left_.reset(u);
        if (u != v) cover_ext_.intersect(graph_.adjacent[u]);
      }
      cover_ext_.intersect(cover_left_);
      while (!cover_ext_.empty()) {
        const int u = cover_ext_.first_set();
        cover_left_.reset(u);
        cover_ext_.reset(u);
        cover_ext_.intersect(graph_.adjacent[u]);
      }
    }
    return cliques;
  }

  const conflict_graph& graph_;
  solve_budget budget_;
  bitset cover_left_;
  bitset cover_q_;
  bitset cover_ext_;
  std::vector<int> include_;
  std::vector<int> best_;
  long long nodes_ = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  bool stopped_ = false;
};

}  // namespace detail

/// Maximizes the number of added vias subject to the grid's conflict rule.
///
/// In vertical_only mode the constraints never couple columns, so the solve
/// dispatches to solve_column_dp per column and concatenates; the budget is
/// never exhausted on that path. In radius mode an exact branch and bound on
/// the conflict graph is used (row-major branching, include branch first).
/// Deterministic: identical inputs produce identical chosen sets.
inline selection solve_exact(const candidate_grid& grid,
                             const solve_budget& budget = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<site> chosen;
  bool proven = true;

  if (grid.mode().is_vertical_only()) {
    const int m = grid.rows();
    std::vector<std::uint8_t> column(m);
    for (int c = 1; c <= grid.cols(); ++c) {
      for (int r = 1; r <= m; ++r) column[r - 1] = grid.available(r, c);
      for (int r : solve_column_dp(column).rows) chosen.push_back({r, c});
    }
  } else {
    const detail::conflict_graph g = detail::build_conflict_graph(grid);
    detail::max_independent_set_solver solver(g, budget);
    auto [indices, was_proven] = solver.solve();
    proven = was_proven;
    for (int i : indices) chosen.push_back(g.sites[i]);
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return make_selection(std::move(chosen), elapsed, proven);
}

/// Exhaustive oracle: enumerates every subset of available sites and returns
/// a maximum feasible one. Ties are broken toward the lexicographically
/// smallest chosen set in row-major order. Guarded to m*n <= 24.
inline selection brute_force(const candidate_grid& grid) {
  const auto t0 = std::chrono::steady_clock::now();
  const long long cells = static_cast<long long>(grid.rows()) * grid.cols();
  if (cells > 24)
    throw grid_too_large("brute_force limited to m*n <= 24 sites, got " +
                         std::to_string(cells));

  std::vector<site> sites;
  for (int r = 1; r <= grid.rows(); ++r)
    for (int c = 1; c <= grid.cols(); ++c)
      if (grid.available(r, c)) sites.push_back({r, c});
  const int k = static_cast<int>(sites.size());

  std::vector<std::uint32_t> adjacent(k, 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (j != i && grid.mode().conflicts(sites[i], sites[j]))
        adjacent[i] |= std::uint32_t{1} << j;

  // With bit b <-> sites[b] (row-major), the lexicographically smaller of two
  // equal-size sets is the one containing the lowest differing bit.
  auto lex_smaller = [](std::uint32_t a, std::uint32_t b) {
    const std::uint32_t d = a ^ b;
    if (d == 0) return false;
    return ((a >> std::countr_zero(d)) & 1u) != 0;
  };

  std::uint32_t best_mask = 0;
  int best_count = 0;
  const std::uint64_t limit = std::uint64_t{1} << k;
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    const std::uint32_t m32 = static_cast<std::uint32_t>(mask);
    const int count = std::popcount(m32);
    if (count < best_count) continue;
    bool feasible = true;
    for (std::uint32_t x = m32; x; x &= x - 1) {
      if (adjacent[std::countr_zero(x)] & m32) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    if (count > best_count ||
        (count == best_count && lex_smaller(m32, best_mask))) {
      best_count = count;
      best_mask = m32;
    }
  }

  std::vector<site> chosen;
  for (std::uint32_t x = best_mask; x; x &= x - 1)
    chosen.push_back(sites[std::countr_zero(x)]);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return make_selection(std::move(chosen), elapsed, true);
}

}  // namespace gridweld
