#include <gtest/gtest.h>

#include <set>

#include "gridweld/design.hpp"
#include "gridweld/grid.hpp"
#include "gridweld/prng.hpp"

namespace gw = gridweld;

namespace {

// Minimal well-formed design: one layer-A pad at (1,1) keeps every sink row
// reachable once the sink shares that row; callers adjust from there.
gw::design_description base_design(int rows, int cols) {
  gw::design_description d;
  d.rows = rows;
  d.cols = cols;
  d.pads.push_back({gw::layer_id::a, 1, 1, 1000.0});
  return d;
}

}  // namespace

TEST(ConflictMode, VerticalOnlyMatchesRadiusRestriction) {
  const auto vertical = gw::conflict_mode::vertical_only();
  const auto r1 = gw::conflict_mode::radius(1);
  for (int dr = -2; dr <= 2; ++dr)
    for (int dc = -2; dc <= 2; ++dc) {
      const gw::site a{5, 5}, b{5 + dr, 5 + dc};
      const bool expect = dc == 0 && (dr == 1 || dr == -1);
      EXPECT_EQ(vertical.conflicts(a, b), expect);
      if (vertical.conflicts(a, b)) EXPECT_TRUE(r1.conflicts(a, b));
    }
}

TEST(ConflictMode, RadiusRejectsZero) {
  EXPECT_THROW(gw::conflict_mode::radius(0), std::invalid_argument);
}

TEST(BuildCandidateGrid, EmptyExclusionSetsKeepEverything) {
  const auto grid = gw::build_candidate_grid(base_design(2, 2));
  EXPECT_EQ(grid.available_count(), 4);
}

TEST(BuildCandidateGrid, ExistingViaConsumesVerticalNeighborhood) {
  auto d = base_design(3, 1);
  d.existing_vias.insert({2, 1});
  const auto grid = gw::build_candidate_grid(d);
  EXPECT_FALSE(grid.available(1, 1));
  EXPECT_FALSE(grid.available(2, 1));
  EXPECT_FALSE(grid.available(3, 1));
  EXPECT_EQ(grid.available_count(), 0);
}

TEST(BuildCandidateGrid, BlockedSiteRemovesExactlyItself) {
  auto d = base_design(3, 3);
  d.mode = gw::conflict_mode::radius(1);
  d.blocked.insert({2, 2});
  const auto grid = gw::build_candidate_grid(d);
  EXPECT_EQ(grid.available_count(), 8);
  EXPECT_FALSE(grid.available(2, 2));
}

TEST(BuildCandidateGrid, RejectsOutOfRangeIndices) {
  auto d = base_design(2, 2);
  d.blocked.insert({3, 1});
  EXPECT_THROW(gw::build_candidate_grid(d), std::out_of_range);
}

TEST(ConflictsOf, VerticalNeighborsOnly) {
  const auto grid =
      gw::candidate_grid::all_available(4, 4, gw::conflict_mode::vertical_only());
  const auto got = gw::conflicts_of(grid, {2, 3});
  const std::vector<gw::site> expect = {{1, 3}, {3, 3}};
  EXPECT_EQ(got, expect);
}

TEST(ConflictsOf, SingleSiteGridHasNoNeighbors) {
  const auto grid =
      gw::candidate_grid::all_available(1, 1, gw::conflict_mode::vertical_only());
  EXPECT_TRUE(gw::conflicts_of(grid, {1, 1}).empty());
}

TEST(ConflictsOf, ChebyshevBallAroundCenter) {
  const auto grid =
      gw::candidate_grid::all_available(3, 3, gw::conflict_mode::radius(1));
  const auto got = gw::conflicts_of(grid, {2, 2});
  // Independent enumeration of the Chebyshev ball.
  std::set<gw::site> expect;
  for (int r = 1; r <= 3; ++r)
    for (int c = 1; c <= 3; ++c)
      if (!(r == 2 && c == 2)) expect.insert({r, c});
  EXPECT_EQ(std::set<gw::site>(got.begin(), got.end()), expect);
  EXPECT_EQ(got.size(), 8u);
}

TEST(ConflictsOf, OutOfRangeSiteThrows) {
  const auto grid =
      gw::candidate_grid::all_available(2, 2, gw::conflict_mode::vertical_only());
  EXPECT_THROW(gw::conflicts_of(grid, {0, 1}), std::out_of_range);
  EXPECT_THROW(gw::conflicts_of(grid, {1, 3}), std::out_of_range);
}

TEST(ConflictsOf, SymmetryOnRandomGrids) {
  gw::split_mix64 rng(7);
  const gw::conflict_mode modes[] = {gw::conflict_mode::vertical_only(),
                                     gw::conflict_mode::radius(1),
                                     gw::conflict_mode::radius(2)};
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 1 + static_cast<int>(rng.next_below(5));
    const int n = 1 + static_cast<int>(rng.next_below(5));
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(m) * n);
    for (auto& b : mask) b = rng.next_below(4) != 0;
    const gw::candidate_grid grid(m, n, modes[trial % 3], mask);
    for (int r = 1; r <= m; ++r)
      for (int c = 1; c <= n; ++c) {
        if (!grid.available(r, c)) continue;
        for (gw::site other : gw::conflicts_of(grid, {r, c})) {
          const auto back = gw::conflicts_of(grid, other);
          EXPECT_NE(std::find(back.begin(), back.end(), gw::site{r, c}),
                    back.end())
              << "asymmetric conflict at " << r << "," << c;
        }
      }
  }
}

TEST(ConflictsOf, VerticalOnlyNeverCrossesColumns) {
  gw::split_mix64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 1 + static_cast<int>(rng.next_below(6));
    const int n = 1 + static_cast<int>(rng.next_below(6));
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(m) * n);
    for (auto& b : mask) b = rng.next_below(3) != 0;
    const gw::candidate_grid grid(m, n, gw::conflict_mode::vertical_only(), mask);
    for (int r = 1; r <= m; ++r)
      for (int c = 1; c <= n; ++c)
        for (gw::site other : gw::conflicts_of(grid, {r, c}))
          EXPECT_EQ(other.col, c);
  }
}

TEST(BuildCandidateGrid, PureAndIdempotent) {
  auto d = base_design(4, 5);
  d.mode = gw::conflict_mode::radius(1);
  d.blocked.insert({2, 2});
  d.existing_vias.insert({4, 4});
  const auto a = gw::build_candidate_grid(d);
  const auto b = gw::build_candidate_grid(d);
  EXPECT_EQ(a.available_mask(), b.available_mask());
}

TEST(BuildCandidateGrid, BlockingNeverIncreasesAvailability) {
  gw::split_mix64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    auto d = base_design(4, 4);
    if (trial % 2) d.mode = gw::conflict_mode::radius(1);
    for (int i = 0; i < 3; ++i) {
      const gw::site s{1 + static_cast<int>(rng.next_below(4)),
                       1 + static_cast<int>(rng.next_below(4))};
      if (!d.blocked.count(s)) d.existing_vias.insert(s);
    }
    const int before = gw::build_candidate_grid(d).available_count();
    const gw::site extra{1 + static_cast<int>(rng.next_below(4)),
                         1 + static_cast<int>(rng.next_below(4))};
    if (d.existing_vias.count(extra)) continue;
    d.blocked.insert(extra);
    const int after = gw::build_candidate_grid(d).available_count();
    EXPECT_LE(after, before);
  }
}

TEST(ValidateDesign, WellFormedDesignPasses) {
  auto d = base_design(2, 2);
  d.pads.clear();
  d.pads.push_back({gw::layer_id::b, 1, 1, 1000.0});
  d.existing_vias.insert({2, 1});  // sink row gets a via down to... up to A
  d.sinks.push_back({2, 2, 50.0});
  // sink (2,2) -> A row 2 -> via (2,1) -> B col 1 -> pad B(1,1)
  EXPECT_TRUE(gw::validate_design(d).empty());
}

TEST(ValidateDesign, DisconnectedSinkIsReported) {
  auto d = base_design(3, 3);
  d.pads.clear();
  d.pads.push_back({gw::layer_id::b, 1, 1, 1000.0});
  d.sinks.push_back({2, 2, 10.0});  // row 2 has no via and no layer-A pad
  const auto violations = gw::validate_design(d);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].kind, gw::violation_kind::disconnected_sink);
  EXPECT_NE(violations[0].detail.find("(2,2)"), std::string::npos);
}

TEST(ValidateDesign, BlockedViaOverlapIsReported) {
  auto d = base_design(2, 2);
  d.blocked.insert({1, 1});
  d.existing_vias.insert({1, 1});
  const auto violations = gw::validate_design(d);
  bool found = false;
  for (const auto& v : violations)
    if (v.kind == gw::violation_kind::blocked_via_overlap &&
        v.detail.find("(1,1)") != std::string::npos)
      found = true;
  EXPECT_TRUE(found);
}

TEST(ValidateDesign, CatchesParameterAndIndexProblems) {
  auto d = base_design(2, 2);
  d.strap_resistance_h_ohm = 0.0;
  d.sinks.push_back({1, 1, -5.0});
  d.pads.push_back({gw::layer_id::a, 2, 2, 900.0});  // mixed supply
  d.blocked.insert({5, 5});
  const auto violations = gw::validate_design(d);
  std::set<gw::violation_kind> kinds;
  for (const auto& v : violations) kinds.insert(v.kind);
  EXPECT_TRUE(kinds.count(gw::violation_kind::bad_parameter));
  EXPECT_TRUE(kinds.count(gw::violation_kind::negative_sink_current));
  EXPECT_TRUE(kinds.count(gw::violation_kind::mixed_pad_voltage));
  EXPECT_TRUE(kinds.count(gw::violation_kind::index_out_of_range));
}

TEST(ValidateDesign, NoPadsIsReported) {
  gw::design_description d;
  d.rows = 2;
  d.cols = 2;
  const auto violations = gw::validate_design(d);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].kind, gw::violation_kind::no_pads);
}

TEST(DesignJson, RoundTripPreservesEverything) {
  auto d = base_design(3, 4);
  d.mode = gw::conflict_mode::radius(2);
  d.blocked.insert({1, 2});
  d.existing_vias.insert({2, 2});
  d.sinks.push_back({1, 3, 12.5});
  d.em_limit_ma = 80.0;
  const auto j = gw::design_to_json(d);
  const auto back = gw::design_from_json(j);
  EXPECT_EQ(gw::design_to_json(back), j);
  EXPECT_EQ(back.mode, d.mode);
  EXPECT_EQ(back.blocked, d.blocked);
  EXPECT_EQ(back.em_limit_ma, d.em_limit_ma);
}

TEST(DesignJson, UnknownKeyIsRejected) {
  auto j = gw::design_to_json(base_design(2, 2));
  j["surprise"] = 1;
  EXPECT_THROW(gw::design_from_json(j), gw::parse_error);
}

TEST(DesignJson, UnknownNestedKeyIsRejected) {
  auto j = gw::design_to_json(base_design(2, 2));
  j["pads"][0]["oops"] = true;
  EXPECT_THROW(gw::design_from_json(j), gw::parse_error);
}

TEST(DesignJson, MissingKeyIsRejected) {
  auto j = gw::design_to_json(base_design(2, 2));
  j.erase("rows");
  EXPECT_THROW(gw::design_from_json(j), gw::parse_error);
}

TEST(DesignJson, ConflictModeForms) {
  auto j = gw::design_to_json(base_design(2, 2));
  j["conflict_mode"] = "vertical_only";
  EXPECT_TRUE(gw::design_from_json(j).mode.is_vertical_only());
  j["conflict_mode"] = {{"radius", 3}};
  EXPECT_EQ(gw::design_from_json(j).mode.radius(), 3);
  j["conflict_mode"] = "diagonal";
  EXPECT_THROW(gw::design_from_json(j), gw::parse_error);
  j["conflict_mode"] = {{"radius", 0}};
  EXPECT_THROW(gw::design_from_json(j), gw::parse_error);
}
