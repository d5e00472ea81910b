#include <gtest/gtest.h>

#include "gridweld/dc_solver.hpp"
#include "gridweld/generator.hpp"
#include "gridweld/ir_report.hpp"
#include "gridweld/network.hpp"

namespace gw = gridweld;

namespace {

gw::generator_spec small_spec() {
  gw::generator_spec s;
  s.rows = 8;
  s.cols = 12;
  s.block_density = 0.25;
  s.via_density = 0.1;
  s.sink_count = 5;
  s.current_min_ma = 5.0;
  s.current_max_ma = 25.0;
  s.mode = gw::conflict_mode::radius(1);
  s.strap_resistance_h_ohm = 0.5;
  s.strap_resistance_v_ohm = 0.7;
  s.via_resistance_ohm = 1.5;
  return s;
}

}  // namespace

TEST(Generator, DeterministicForSpecAndSeed) {
  const auto spec = small_spec();
  const auto a = gw::generate_design(spec, 42);
  const auto b = gw::generate_design(spec, 42);
  EXPECT_EQ(gw::design_to_json(a).dump(2), gw::design_to_json(b).dump(2));
}

TEST(Generator, SeedChangesTheDesign) {
  const auto spec = small_spec();
  const auto a = gw::generate_design(spec, 1);
  const auto b = gw::generate_design(spec, 2);
  EXPECT_NE(gw::design_to_json(a).dump(), gw::design_to_json(b).dump());
}

TEST(Generator, OutputAlwaysValidates) {
  auto spec = small_spec();
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto d = gw::generate_design(spec, seed);
    EXPECT_TRUE(gw::validate_design(d).empty()) << "seed " << seed;
  }
  spec.via_density = 0.0;  // forces the sink fallback onto pad rows
  spec.block_density = 0.0;
  spec.sink_count = 1;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto d = gw::generate_design(spec, seed);
    EXPECT_TRUE(gw::validate_design(d).empty()) << "seed " << seed;
  }
}

TEST(Generator, ZeroSinksMeansZeroDrops) {
  auto spec = small_spec();
  spec.sink_count = 0;
  const auto d = gw::generate_design(spec, 7);
  const auto net = gw::build_network(d, gw::make_selection({}));
  const auto rep = gw::ir_metrics(net, gw::solve_dc(net));
  EXPECT_EQ(rep.drop_avg_mv, 0.0);
  EXPECT_EQ(rep.drop_worst_mv, 0.0);
}

TEST(Generator, EdgeUniformPadsValidate) {
  auto spec = small_spec();
  spec.pad_rule = gw::generator_spec::pad_placement::edge_uniform;
  spec.pad_count = 6;
  const auto d = gw::generate_design(spec, 3);
  EXPECT_EQ(d.pads.size(), 6u);
  EXPECT_TRUE(gw::validate_design(d).empty());
}

TEST(Generator, RejectsBadSpecs) {
  auto spec = small_spec();
  spec.block_density = 1.0;
  EXPECT_THROW(gw::generate_design(spec, 0), std::invalid_argument);
  spec = small_spec();
  spec.current_max_ma = spec.current_min_ma - 1.0;
  EXPECT_THROW(gw::generate_design(spec, 0), std::invalid_argument);
  spec = small_spec();
  spec.sink_count = spec.rows * spec.cols + 1;
  EXPECT_THROW(gw::generate_design(spec, 0), std::invalid_argument);
}

TEST(GeneratorJson, RoundTripAndStrictness) {
  auto spec = small_spec();
  spec.pad_rule = gw::generator_spec::pad_placement::edge_uniform;
  spec.pad_count = 8;
  spec.em_limit_ma = 55.0;
  auto j = gw::generator_spec_to_json(spec);
  const auto back = gw::generator_spec_from_json(j);
  EXPECT_EQ(gw::generator_spec_to_json(back), j);
  j["bogus"] = 1;
  EXPECT_THROW(gw::generator_spec_from_json(j), gw::parse_error);
}
