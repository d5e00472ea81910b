#include <gtest/gtest.h>

#include <algorithm>

#include "gridweld/partition.hpp"
#include "gridweld/prng.hpp"

namespace gw = gridweld;

namespace {

gw::candidate_grid random_grid(gw::split_mix64& rng, gw::conflict_mode mode,
                               int min_cols) {
  const int m = 1 + static_cast<int>(rng.next_below(3));
  const int max_n = std::max(min_cols, 16 / m);
  const int n = min_cols + static_cast<int>(rng.next_below(max_n - min_cols + 1));
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(m) * n);
  for (auto& b : mask) b = rng.next_below(4) != 0;
  return gw::candidate_grid(m, n, mode, std::move(mask));
}

}  // namespace

TEST(MakeBreaks, EvenSplitExamples) {
  const auto g10 =
      gw::candidate_grid::all_available(2, 10, gw::conflict_mode::vertical_only());
  EXPECT_EQ(gw::make_breaks(g10, 1).break_cols, (std::vector<int>{5}));
  const auto g9 =
      gw::candidate_grid::all_available(2, 9, gw::conflict_mode::vertical_only());
  EXPECT_EQ(gw::make_breaks(g9, 2).break_cols, (std::vector<int>{3, 6}));
  EXPECT_TRUE(gw::make_breaks(g9, 0).break_cols.empty());
}

TEST(MakeBreaks, RejectsTooManyBreaks) {
  const auto grid =
      gw::candidate_grid::all_available(2, 4, gw::conflict_mode::vertical_only());
  EXPECT_THROW(gw::make_breaks(grid, 4), std::invalid_argument);
  EXPECT_THROW(gw::make_breaks(grid, -1), std::invalid_argument);
  EXPECT_NO_THROW(gw::make_breaks(grid, 3));
}

TEST(MakeBreaks, AlwaysDistinctInRange) {
  gw::split_mix64 rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(40));
    const int k = static_cast<int>(rng.next_below(n));
    const auto grid =
        gw::candidate_grid::all_available(2, n, gw::conflict_mode::vertical_only());
    const auto plan = gw::make_breaks(grid, k);
    ASSERT_EQ(plan.k(), k);
    int last = 0;
    for (int c : plan.break_cols) {
      EXPECT_GT(c, last);
      EXPECT_GE(c, 1);
      EXPECT_LE(c, n);
      last = c;
    }
  }
}

TEST(CheckBound, Arithmetic) {
  EXPECT_TRUE(gw::check_bound(10, 12, 1, 4));
  EXPECT_TRUE(gw::check_bound(0, 0, 0, 5));
  EXPECT_FALSE(gw::check_bound(3, 10, 1, 4));
}

TEST(SolvePartitioned, FourBySixWorkedExample) {
  // 4x6 all-available vertical-only, one break at the midpoint column 3:
  // five usable columns remain, each contributing ceil(4/2) = 2 vias.
  const auto grid =
      gw::candidate_grid::all_available(4, 6, gw::conflict_mode::vertical_only());
  const auto plan = gw::make_breaks(grid, 1);
  ASSERT_EQ(plan.break_cols, (std::vector<int>{3}));
  const auto result = gw::solve_partitioned(grid, plan);
  EXPECT_EQ(result.merged.objective, 10);

  const auto optimal = gw::solve_exact(grid);
  EXPECT_EQ(optimal.objective, 12);
  EXPECT_EQ(gw::brute_force(grid).objective, 12);  // 24 sites: oracle confirms
  EXPECT_TRUE(gw::check_bound(result.merged.objective, optimal.objective, 1, 4));

  ASSERT_EQ(result.per_partition.size(), 2u);
  EXPECT_EQ(result.per_partition[0].first, (gw::column_range{1, 2}));
  EXPECT_EQ(result.per_partition[1].first, (gw::column_range{4, 6}));
  EXPECT_EQ(result.per_partition[0].second.objective, 4);
  EXPECT_EQ(result.per_partition[1].second.objective, 6);

  auto attached = result;
  gw::attach_optimal_objective(attached, optimal.objective, grid.rows());
  EXPECT_EQ(attached.bound_slack, 10 - (12 - 1 * 4));
}

TEST(SolvePartitioned, ZeroBreaksEqualsExactSolve) {
  gw::split_mix64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto mode = trial % 2 ? gw::conflict_mode::radius(1)
                                : gw::conflict_mode::vertical_only();
    const auto grid = random_grid(rng, mode, 1);
    const auto direct = gw::solve_exact(grid);
    const auto split = gw::solve_partitioned(grid, gw::partition_plan{});
    EXPECT_EQ(split.merged.objective, direct.objective);
    EXPECT_EQ(split.merged.chosen, direct.chosen);
  }
}

TEST(SolvePartitioned, EverythingOnBreakColumnsYieldsEmptyMerge) {
  // Only column 1 has candidates; an explicit break there deactivates all.
  std::vector<std::uint8_t> mask = {1, 0, 1, 0};
  const gw::candidate_grid grid(2, 2, gw::conflict_mode::vertical_only(), mask);
  gw::partition_plan plan;
  plan.break_cols = {1};
  const auto result = gw::solve_partitioned(grid, plan);
  EXPECT_EQ(result.merged.objective, 0);
  EXPECT_TRUE(result.merged.chosen.empty());
  EXPECT_TRUE(gw::verify_feasible(grid, result.merged));
}

TEST(SolvePartitioned, NoChosenSiteOnBreakStrips) {
  gw::split_mix64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const auto mode =
        trial % 2 ? gw::conflict_mode::radius(2) : gw::conflict_mode::radius(1);
    const auto grid = random_grid(rng, mode, 4);
    const int k = 1 + static_cast<int>(rng.next_below(3));
    if (k >= grid.cols()) continue;
    const auto plan = gw::make_breaks(grid, k);
    const auto result = gw::solve_partitioned(grid, plan);
    const int width = grid.mode().strip_width();
    for (gw::site s : result.merged.chosen)
      for (int c : plan.break_cols)
        EXPECT_FALSE(s.col >= c && s.col < c + width)
            << "chosen site on break strip";
  }
}

TEST(SolvePartitioned, BoundHoldsOnRandomGridsBothModes) {
  const gw::conflict_mode modes[] = {gw::conflict_mode::vertical_only(),
                                     gw::conflict_mode::radius(1),
                                     gw::conflict_mode::radius(2)};
  for (const auto mode : modes) {
    gw::split_mix64 rng(mode.is_vertical_only() ? 3 : 300 + mode.radius());
    for (int trial = 0; trial < 100; ++trial) {
      const auto grid = random_grid(rng, mode, 4);
      const long long y_star = gw::brute_force(grid).objective;
      for (int k = 0; k <= 3 && k < grid.cols(); ++k) {
        const auto plan = gw::make_breaks(grid, k);
        const auto result = gw::solve_partitioned(grid, plan);
        const long long y_prime = result.merged.objective;
        EXPECT_TRUE(gw::check_bound(y_prime, y_star, k, grid.rows()))
            << "y'=" << y_prime << " y*=" << y_star << " k=" << k
            << " m=" << grid.rows();
        EXPECT_LE(y_prime, y_star);
        EXPECT_TRUE(gw::verify_feasible(grid, result.merged));
        if (k == 0) EXPECT_EQ(y_prime, y_star);
      }
    }
  }
}

TEST(SolvePartitioned, MergeMatchesSequentialComposition) {
  // The concurrent solve must be bit-identical to solving each range
  // sequentially and concatenating in order.
  gw::split_mix64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto grid = random_grid(rng, gw::conflict_mode::radius(1), 5);
    const auto plan = gw::make_breaks(grid, 2);
    const auto result = gw::solve_partitioned(grid, plan);

    std::vector<gw::site> sequential;
    for (const auto& [range, sel] : result.per_partition) {
      if (range.empty()) {
        EXPECT_TRUE(sel.chosen.empty());
        continue;
      }
      std::vector<std::uint8_t> mask;
      for (int r = 1; r <= grid.rows(); ++r)
        for (int c = range.first; c <= range.last; ++c)
          mask.push_back(grid.available(r, c));
      const gw::candidate_grid sub(grid.rows(), range.last - range.first + 1,
                                   grid.mode(), mask);
      for (gw::site s : gw::solve_exact(sub).chosen)
        sequential.push_back({s.row, s.col + range.first - 1});
    }
    std::sort(sequential.begin(), sequential.end());
    EXPECT_EQ(result.merged.chosen, sequential);

    const auto again = gw::solve_partitioned(grid, plan);
    EXPECT_EQ(again.merged.chosen, result.merged.chosen);
  }
}

TEST(SolvePartitioned, RejectsBadPlans) {
  const auto grid =
      gw::candidate_grid::all_available(2, 6, gw::conflict_mode::vertical_only());
  gw::partition_plan bad;
  bad.break_cols = {3, 3};
  EXPECT_THROW(gw::solve_partitioned(grid, bad), std::invalid_argument);
  bad.break_cols = {0};
  EXPECT_THROW(gw::solve_partitioned(grid, bad), std::invalid_argument);
  bad.break_cols = {7};
  EXPECT_THROW(gw::solve_partitioned(grid, bad), std::invalid_argument);
}

TEST(AttachOptimalObjective, SlackComputed) {
  const auto grid =
      gw::candidate_grid::all_available(2, 8, gw::conflict_mode::vertical_only());
  auto result = gw::solve_partitioned(grid, gw::make_breaks(grid, 1));
  const auto optimal = gw::solve_exact(grid);
  gw::attach_optimal_objective(result, optimal.objective, grid.rows());
  ASSERT_TRUE(result.bound_slack.has_value());
  EXPECT_GE(*result.bound_slack, 0);
}
