#pragma once

#include <algorithm>
#include <chrono>
#include <future>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gridweld/solver.hpp"

namespace gridweld {

/// Ordered break columns. Deactivating each break strip splits the grid into
/// k+1 independent column ranges.
struct partition_plan {
  std::vector<int> break_cols;  // strictly increasing, 1-based

  int k() const { return static_cast<int>(break_cols.size()); }
};

/// Evenly spaced break columns at floor(t*n/(k+1)), t = 1..k. A collision
/// with an already-placed column shifts right to the next free one.
/// Throws std::invalid_argument when k < 0 or k >= n.
inline partition_plan make_breaks(const candidate_grid& grid, int k) {
  const int n = grid.cols();
  if (k < 0) throw std::invalid_argument("break count must be >= 0");
  if (k >= n)
    throw std::invalid_argument(
        "cannot place " + std::to_string(k) + " break columns in " +
        std::to_string(n) + " columns");
  partition_plan plan;
  int last = 0;
  for (int t = 1; t <= k; ++t) {
    int c = static_cast<int>(static_cast<long long>(t) * n / (k + 1));
    if (c <= last) c = last + 1;
    plan.break_cols.push_back(c);
    last = c;
  }
  return plan;
}

/// Eq-style suboptimality guarantee of break-line partitioning: the merged
/// objective can lose at most k*m against the unpartitioned optimum.
inline bool check_bound(long long y_prime, long long y_star, long long k,
                        long long m) {
  return y_prime >= y_star - k * m;
}

struct column_range {
  int first = 1;
  int last = 0;  // inclusive; empty when first > last

  bool empty() const { return first > last; }
  friend bool operator==(const column_range&, const column_range&) = default;
};

struct partitioned_result {
  selection merged;
  std::vector<std::pair<column_range, selection>> per_partition;
  partition_plan plan;
  /// y' - (y* - k*m), set once the true optimum is known.
  std::optional<long long> bound_slack;
};

namespace detail {

inline void validate_plan(const candidate_grid& grid, const partition_plan& plan) {
  int last = 0;
  for (int c : plan.break_cols) {
    if (c < 1 || c > grid.cols())
      throw std::invalid_argument("break column " + std::to_string(c) +
                                  " outside 1.." + std::to_string(grid.cols()));
    if (c <= last)
      throw std::invalid_argument("break columns must be strictly increasing");
    last = c;
  }
}

}  // namespace detail

/// Deactivates every candidate on the break strips and solves each remaining
/// column range exactly. In radius(r) mode a strip is r columns wide so that
/// no conflict can cross it; the merged selection is therefore feasible on
/// the original, unpartitioned grid. Sub-problems run concurrently; the
/// merge is a deterministic fold in partition order, so the result is
/// bit-identical to a sequential solve.
inline partitioned_result solve_partitioned(const candidate_grid& grid,
                                            const partition_plan& plan,
                                            const solve_budget& budget = {}) {
  detail::validate_plan(grid, plan);
  const auto t0 = std::chrono::steady_clock::now();
  const int m = grid.rows(), n = grid.cols();
  const int width = grid.mode().strip_width();
  const int k = plan.k();

  // k+1 column ranges between consecutive break strips (possibly empty).
  std::vector<column_range> ranges;
  int prev_strip_end = 0;
  for (int t = 0; t <= k; ++t) {
    column_range r;
    r.first = prev_strip_end + 1;
    r.last = t < k ? plan.break_cols[t] - 1 : n;
    ranges.push_back(r);
    if (t < k)
      prev_strip_end =
          std::max(prev_strip_end, std::min(n, plan.break_cols[t] + width - 1));
  }

  auto solve_range = [&](column_range r) -> selection {
    if (r.empty()) return make_selection({});
    const int sub_cols = r.last - r.first + 1;
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(m) * sub_cols);
    for (int row = 1; row <= m; ++row)
      for (int c = 0; c < sub_cols; ++c)
        mask[static_cast<std::size_t>(row - 1) * sub_cols + c] =
            grid.available(row, r.first + c);
    const candidate_grid sub(m, sub_cols, grid.mode(), std::move(mask));
    selection local = solve_exact(sub, budget);
    std::vector<site> global;
    global.reserve(local.chosen.size());
    for (site s : local.chosen) global.push_back({s.row, s.col + r.first - 1});
    return make_selection(std::move(global), local.wall_time_s,
                          local.proven_optimal);
  };

  std::vector<std::future<selection>> futures;
  futures.reserve(ranges.size());
  for (column_range r : ranges)
    futures.push_back(std::async(std::launch::async, solve_range, r));

  partitioned_result out;
  out.plan = plan;
  std::vector<site> merged;
  bool proven = true;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    selection part = futures[i].get();
    proven = proven && part.proven_optimal;
    merged.insert(merged.end(), part.chosen.begin(), part.chosen.end());
    out.per_partition.emplace_back(ranges[i], std::move(part));
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  out.merged = make_selection(std::move(merged), elapsed, proven);
  return out;
}

/// Records the bound slack y' - (y* - k*m) once the true optimum y* is
/// known. The bound is a theorem for this partitioning scheme, so a negative
/// slack can only mean a solver defect.
inline partitioned_result& attach_optimal_objective(partitioned_result& result,
                                                    long long y_star, int rows) {
  const long long k = result.plan.k();
  if (!check_bound(result.merged.objective, y_star, k, rows))
    throw std::logic_error(
        "partition bound violated: y'=" + std::to_string(result.merged.objective) +
        " y*=" + std::to_string(y_star) + " k=" + std::to_string(k) +
        " m=" + std::to_string(rows));
  result.bound_slack = result.merged.objective - (y_star - k * rows);
  return result;
}

}  // namespace gridweld
