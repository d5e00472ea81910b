#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridweld/design.hpp"
#include "gridweld/prng.hpp"
#include "gridweld/union_find.hpp"

namespace gridweld {

class generation_failed : public std::runtime_error {
 public:
  explicit generation_failed(const std::string& msg)
      : std::runtime_error(msg) {}
};

/// Synthetic benchmark recipe. Generation is deterministic for a
/// (spec, seed) pair: every random decision draws from one splitmix64 stream
/// in a documented order (see generate_design).
struct generator_spec {
  int rows = 1;
  int cols = 1;
  double block_density = 0.0;  // [0, 1)
  double via_density = 0.0;    // [0, 1)
  int sink_count = 0;
  double current_min_ma = 0.0;
  double current_max_ma = 0.0;

  enum class pad_placement { corners, edge_uniform };
  pad_placement pad_rule = pad_placement::corners;
  int pad_count = 4;  // edge_uniform only

  conflict_mode mode = conflict_mode::vertical_only();
  double pitch_x_um = 1.0;
  double pitch_y_um = 1.0;
  double strap_resistance_h_ohm = 1.0;
  double strap_resistance_v_ohm = 1.0;
  double via_resistance_ohm = 1.0;
  double supply_mv = 1000.0;
  std::optional<double> em_limit_ma;
};

namespace detail {

inline void validate_spec(const generator_spec& s) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (s.rows < 1 || s.cols < 1) fail("generator rows/cols must be >= 1");
  if (s.block_density < 0.0 || s.block_density >= 1.0)
    fail("block_density must be in [0, 1)");
  if (s.via_density < 0.0 || s.via_density >= 1.0)
    fail("via_density must be in [0, 1)");
  if (s.sink_count < 0 ||
      static_cast<long long>(s.sink_count) >
          static_cast<long long>(s.rows) * s.cols)
    fail("sink_count must be in [0, rows*cols]");
  if (s.current_min_ma < 0.0 || s.current_max_ma < s.current_min_ma)
    fail("current range must satisfy 0 <= min <= max");
  if (s.pad_rule == generator_spec::pad_placement::edge_uniform &&
      s.pad_count < 1)
    fail("edge_uniform pad count must be >= 1");
  if (!(s.strap_resistance_h_ohm > 0.0) || !(s.strap_resistance_v_ohm > 0.0) ||
      !(s.via_resistance_ohm > 0.0))
    fail("resistances must be > 0");
  if (!(s.pitch_x_um > 0.0) || !(s.pitch_y_um > 0.0)) fail("pitches must be > 0");
  if (s.em_limit_ma && !(*s.em_limit_ma > 0.0)) fail("em_limit_ma must be > 0");
}

/// Clockwise perimeter walk starting at (1,1); degenerates to a single row
/// or column walk for 1-wide grids.
inline std::vector<site> perimeter_sites(int m, int n) {
  std::vector<site> walk;
  if (m == 1) {
    for (int c = 1; c <= n; ++c) walk.push_back({1, c});
    return walk;
  }
  if (n == 1) {
    for (int r = 1; r <= m; ++r) walk.push_back({r, 1});
    return walk;
  }
  for (int c = 1; c <= n; ++c) walk.push_back({1, c});
  for (int r = 2; r <= m; ++r) walk.push_back({r, n});
  for (int c = n - 1; c >= 1; --c) walk.push_back({m, c});
  for (int r = m - 1; r >= 2; --r) walk.push_back({r, 1});
  return walk;
}

inline std::vector<pad> place_pads(const generator_spec& s) {
  std::vector<pad> pads;
  auto push = [&](int r, int c) {
    for (const pad& p : pads)
      if (p.row == r && p.col == c) return;
    pads.push_back({layer_id::a, r, c, s.supply_mv});
  };
  if (s.pad_rule == generator_spec::pad_placement::corners) {
    push(1, 1);
    push(1, s.cols);
    push(s.rows, 1);
    push(s.rows, s.cols);
  } else {
    const std::vector<site> walk = perimeter_sites(s.rows, s.cols);
    const long long p = static_cast<long long>(walk.size());
    for (int t = 0; t < s.pad_count; ++t) {
      const site w = walk[static_cast<std::size_t>(t * p / s.pad_count)];
      push(w.row, w.col);
    }
  }
  return pads;
}

}  // namespace detail

/// Produces a validate_design-clean benchmark. Draw order (one splitmix64
/// stream seeded with `seed`):
///   1. one draw per site, row-major: blocked iff draw < block_density and
///      the site is not a pad site;
///   2. one draw per site, row-major: existing via iff draw < via_density
///      and the site is not blocked;
///   3. per sink: up to 64 (row, col) draws until the site reaches a pad in
///      the reference mesh, then one draw for its current; if all attempts
///      fail the sink snaps to a pad row (pads are on layer A, so the whole
///      row is supplied) with one more column draw.
/// Pads are placed first and deterministically (no draws).
inline design_description generate_design(const generator_spec& spec,
                                          std::uint64_t seed) {
  detail::validate_spec(spec);
  const int m = spec.rows, n = spec.cols;
  split_mix64 rng(seed);

  design_description d;
  d.rows = m;
  d.cols = n;
  d.pitch_x_um = spec.pitch_x_um;
  d.pitch_y_um = spec.pitch_y_um;
  d.strap_resistance_h_ohm = spec.strap_resistance_h_ohm;
  d.strap_resistance_v_ohm = spec.strap_resistance_v_ohm;
  d.via_resistance_ohm = spec.via_resistance_ohm;
  d.mode = spec.mode;
  d.em_limit_ma = spec.em_limit_ma;
  d.pads = detail::place_pads(spec);

  std::vector<std::uint8_t> is_pad_site(static_cast<std::size_t>(m) * n, 0);
  for (const pad& p : d.pads)
    is_pad_site[static_cast<std::size_t>(p.row - 1) * n + (p.col - 1)] = 1;

  for (int r = 1; r <= m; ++r)
    for (int c = 1; c <= n; ++c) {
      const bool hit = rng.next_double() < spec.block_density;
      if (hit && !is_pad_site[static_cast<std::size_t>(r - 1) * n + (c - 1)])
        d.blocked.insert({r, c});
    }
  for (int r = 1; r <= m; ++r)
    for (int c = 1; c <= n; ++c) {
      const bool hit = rng.next_double() < spec.via_density;
      if (hit && !d.blocked.count({r, c})) d.existing_vias.insert({r, c});
    }

  // Reference-mesh connectivity, used to accept sink positions.
  auto node_a = [&](int r, int c) { return (r - 1) * n + (c - 1); };
  auto node_b = [&](int r, int c) { return m * n + node_a(r, c); };
  detail::union_find uf(2 * m * n);
  for (int r = 1; r <= m; ++r)
    for (int c = 1; c < n; ++c) uf.unite(node_a(r, c), node_a(r, c + 1));
  for (int c = 1; c <= n; ++c)
    for (int r = 1; r < m; ++r) uf.unite(node_b(r, c), node_b(r + 1, c));
  for (site v : d.existing_vias)
    uf.unite(node_a(v.row, v.col), node_b(v.row, v.col));
  std::vector<char> pad_root(2 * m * n, 0);
  for (const pad& p : d.pads) pad_root[uf.find(node_a(p.row, p.col))] = 1;
  auto connected = [&](int r, int c) { return pad_root[uf.find(node_a(r, c))] != 0; };

  for (int s = 0; s < spec.sink_count; ++s) {
    int row = 0, col = 0;
    bool placed = false;
    for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
      row = 1 + static_cast<int>(rng.next_below(m));
      col = 1 + static_cast<int>(rng.next_below(n));
      placed = connected(row, col);
    }
    if (!placed) {
      const pad& p = d.pads[s % d.pads.size()];
      row = p.row;
      col = 1 + static_cast<int>(rng.next_below(n));
    }
    const double current =
        spec.current_min_ma +
        rng.next_double() * (spec.current_max_ma - spec.current_min_ma);
    d.sinks.push_back({row, col, current});
  }

  if (!validate_design(d).empty())
    throw generation_failed("generated design failed validation");
  return d;
}

/// Strict parser for the generator spec document.
inline generator_spec generator_spec_from_json(const nlohmann::json& j) {
  using namespace detail;
  check_keys(j,
             {"rows", "cols", "block_density", "via_density", "sink_count",
              "current_min_ma", "current_max_ma", "pad_rule", "conflict_mode",
              "pitch_x_um", "pitch_y_um", "strap_resistance_h_ohm",
              "strap_resistance_v_ohm", "via_resistance_ohm", "supply_mv",
              "em_limit_ma"},
             "generator spec");
  generator_spec s;
  s.rows = get_int(j, "rows", "generator spec");
  s.cols = get_int(j, "cols", "generator spec");
  s.block_density = get_double(j, "block_density", "generator spec");
  s.via_density = get_double(j, "via_density", "generator spec");
  s.sink_count = get_int(j, "sink_count", "generator spec");
  s.current_min_ma = get_double(j, "current_min_ma", "generator spec");
  s.current_max_ma = get_double(j, "current_max_ma", "generator spec");

  const nlohmann::json& rule = get_key(j, "pad_rule", "generator spec");
  if (rule.is_string() && rule.get<std::string>() == "corners") {
    s.pad_rule = generator_spec::pad_placement::corners;
  } else if (rule.is_object()) {
    check_keys(rule, {"edge_uniform"}, "pad_rule");
    s.pad_rule = generator_spec::pad_placement::edge_uniform;
    s.pad_count = get_int(rule, "edge_uniform", "pad_rule");
  } else {
    throw parse_error("pad_rule must be \"corners\" or {\"edge_uniform\": n}");
  }

  s.mode = conflict_mode_from_json(get_key(j, "conflict_mode", "generator spec"));
  s.pitch_x_um = get_double(j, "pitch_x_um", "generator spec");
  s.pitch_y_um = get_double(j, "pitch_y_um", "generator spec");
  s.strap_resistance_h_ohm =
      get_double(j, "strap_resistance_h_ohm", "generator spec");
  s.strap_resistance_v_ohm =
      get_double(j, "strap_resistance_v_ohm", "generator spec");
  s.via_resistance_ohm = get_double(j, "via_resistance_ohm", "generator spec");
  s.supply_mv = get_double(j, "supply_mv", "generator spec");
  if (auto it = j.find("em_limit_ma"); it != j.end()) {
    if (!it->is_number())
      throw parse_error("'em_limit_ma' must be a number when present");
    s.em_limit_ma = it->get<double>();
  }
  return s;
}

inline nlohmann::json generator_spec_to_json(const generator_spec& s) {
  nlohmann::json j;
  j["rows"] = s.rows;
  j["cols"] = s.cols;
  j["block_density"] = s.block_density;
  j["via_density"] = s.via_density;
  j["sink_count"] = s.sink_count;
  j["current_min_ma"] = s.current_min_ma;
  j["current_max_ma"] = s.current_max_ma;
  if (s.pad_rule == generator_spec::pad_placement::corners)
    j["pad_rule"] = "corners";
  else
    j["pad_rule"] = nlohmann::json{{"edge_uniform", s.pad_count}};
  j["conflict_mode"] = detail::conflict_mode_to_json(s.mode);
  j["pitch_x_um"] = s.pitch_x_um;
  j["pitch_y_um"] = s.pitch_y_um;
  j["strap_resistance_h_ohm"] = s.strap_resistance_h_ohm;
  j["strap_resistance_v_ohm"] = s.strap_resistance_v_ohm;
  j["via_resistance_ohm"] = s.via_resistance_ohm;
  j["supply_mv"] = s.supply_mv;
  if (s.em_limit_ma) j["em_limit_ma"] = *s.em_limit_ma;
  return j;
}

}  // namespace gridweld
