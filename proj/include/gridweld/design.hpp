#pragma once

#include <compare>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridweld/union_find.hpp"

namespace gridweld {

/// Grid coordinate, 1-based in both the API and the file format.
/// Ordering is row-major (row first, then column).
struct site {
  int row = 0;
  int col = 0;
  friend constexpr auto operator<=>(const site&, const site&) = default;
};

inline std::string to_string(site s) {
  return "(" + std::to_string(s.row) + "," + std::to_string(s.col) + ")";
}

enum class layer_id { a, b };

inline char layer_name(layer_id l) { return l == layer_id::a ? 'A' : 'B'; }

/// Via-spacing rule that decides which candidate pairs compete.
///
/// vertical_only couples (i, j) with (i+1, j) only: two vias may not sit on
/// vertically adjacent sites of the same column. radius(r) generalizes the
/// rule to a square DRC window: any two sites within Chebyshev distance r
/// conflict. vertical_only is exactly the radius-style relation restricted
/// to delta_col = 0, delta_row = 1.
class conflict_mode {
 public:
  static conflict_mode vertical_only() { return conflict_mode(0); }

  static conflict_mode radius(int r) {
    if (r < 1) throw std::invalid_argument("conflict radius must be >= 1");
    return conflict_mode(r);
  }

  bool is_vertical_only() const { return radius_ == 0; }

  /// Spacing radius; only meaningful when !is_vertical_only().
  int radius() const { return radius_; }

  /// Largest row/col offset at which a conflict can still occur.
  int reach() const { return radius_ == 0 ? 1 : radius_; }

  /// Width of a deactivated column strip that fully decouples the columns
  /// on either side of it.
  int strip_width() const { return radius_ == 0 ? 1 : radius_; }

  /// Symmetric, irreflexive conflict relation.
  bool conflicts(site a, site b) const {
    if (a == b) return false;
    const int dr = a.row > b.row ? a.row - b.row : b.row - a.row;
    const int dc = a.col > b.col ? a.col - b.col : b.col - a.col;
    if (radius_ == 0) return dc == 0 && dr == 1;
    return dr <= radius_ && dc <= radius_;
  }

  friend bool operator==(const conflict_mode&, const conflict_mode&) = default;

 private:
  explicit conflict_mode(int r) : radius_(r) {}
  int radius_ = 0;  // 0 encodes vertical_only
};

struct pad {
  layer_id layer = layer_id::a;
  int row = 1;
  int col = 1;
  double voltage_mv = 0.0;
};

struct sink {
  int row = 1;
  int col = 1;
  double current_ma = 0.0;
};

/// Post-route design abstraction: an m x n grid of potential via sites over
/// a two-layer power mesh (horizontal straps on layer A, vertical straps on
/// layer B), plus the electrical boundary conditions needed for IR analysis.
struct design_description {
  int rows = 0;
  int cols = 0;
  double pitch_x_um = 1.0;
  double pitch_y_um = 1.0;
  std::set<site> blocked;        // sites occupied by signal routing
  std::set<site> existing_vias;  // sites already connecting the two layers
  std::vector<pad> pads;
  std::vector<sink> sinks;  // attached to layer A
  double strap_resistance_h_ohm = 1.0;
  double strap_resistance_v_ohm = 1.0;
  double via_resistance_ohm = 1.0;
  conflict_mode mode = conflict_mode::vertical_only();
  std::optional<double> em_limit_ma;
};

enum class violation_kind {
  bad_dimension,
  bad_parameter,
  index_out_of_range,
  blocked_via_overlap,
  no_pads,
  mixed_pad_voltage,
  negative_sink_current,
  disconnected_sink,
};

inline const char* to_string(violation_kind k) {
  switch (k) {
    case violation_kind::bad_dimension: return "BadDimension";
    case violation_kind::bad_parameter: return "BadParameter";
    case violation_kind::index_out_of_range: return "IndexOutOfRange";
    case violation_kind::blocked_via_overlap: return "OverlapViolation";
    case violation_kind::no_pads: return "NoPads";
    case violation_kind::mixed_pad_voltage: return "MixedPadVoltage";
    case violation_kind::negative_sink_current: return "NegativeSinkCurrent";
    case violation_kind::disconnected_sink: return "DisconnectedSink";
  }
  return "Unknown";
}

struct violation {
  violation_kind kind;
  std::string detail;
};

inline std::string to_string(const violation& v) {
  return std::string(to_string(v.kind)) + ": " + v.detail;
}

/// Checks every structural invariant plus reference-network connectivity
/// (with no added vias, every sink must reach at least one pad). Returns an
/// empty list iff the design is well formed; one entry per failed invariant,
/// naming the offending element.
inline std::vector<violation> validate_design(const design_description& d) {
  std::vector<violation> out;
  auto add = [&](violation_kind k, std::string detail) {
    out.push_back({k, std::move(detail)});
  };

  if (d.rows < 1 || d.cols < 1) {
    add(violation_kind::bad_dimension,
        "rows and cols must be >= 1, got " + std::to_string(d.rows) + "x" +
            std::to_string(d.cols));
    return out;  // nothing else is checkable
  }

  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      add(violation_kind::bad_parameter,
          std::string(name) + " must be finite and > 0");
  };
  positive(d.pitch_x_um, "pitch_x_um");
  positive(d.pitch_y_um, "pitch_y_um");
  positive(d.strap_resistance_h_ohm, "strap_resistance_h_ohm");
  positive(d.strap_resistance_v_ohm, "strap_resistance_v_ohm");
  positive(d.via_resistance_ohm, "via_resistance_ohm");
  if (d.em_limit_ma) positive(*d.em_limit_ma, "em_limit_ma");

  bool indices_ok = true;
  auto in_range = [&](site s) {
    return s.row >= 1 && s.row <= d.rows && s.col >= 1 && s.col <= d.cols;
  };
  auto check_site = [&](site s, const char* what) {
    if (!in_range(s)) {
      add(violation_kind::index_out_of_range,
          std::string(what) + " at " + to_string(s) + " outside " +
              std::to_string(d.rows) + "x" + std::to_string(d.cols));
      indices_ok = false;
    }
  };
  for (site s : d.blocked) check_site(s, "blocked site");
  for (site s : d.existing_vias) check_site(s, "existing via");
  for (const pad& p : d.pads) check_site({p.row, p.col}, "pad");
  for (const sink& s : d.sinks) check_site({s.row, s.col}, "sink");

  for (site s : d.blocked)
    if (d.existing_vias.count(s))
      add(violation_kind::blocked_via_overlap,
          "site " + to_string(s) + " is both blocked and an existing via");

  if (d.pads.empty()) {
    add(violation_kind::no_pads, "at least one pad is required");
  } else {
    const double v0 = d.pads.front().voltage_mv;
    for (const pad& p : d.pads)
      if (p.voltage_mv != v0) {
        add(violation_kind::mixed_pad_voltage,
            "pad at " + to_string({p.row, p.col}) +
                " breaks the single supply domain");
        break;
      }
  }

  for (const sink& s : d.sinks)
    if (!(s.current_ma >= 0.0) || !std::isfinite(s.current_ma))
      add(violation_kind::negative_sink_current,
          "sink at " + to_string({s.row, s.col}) + " draws " +
              std::to_string(s.current_ma) + " mA");

  // Reference-network connectivity, only meaningful once indices are sane.
  if (indices_ok && !d.pads.empty()) {
    const int m = d.rows, n = d.cols;
    auto node_a = [&](int r, int c) { return (r - 1) * n + (c - 1); };
    auto node_b = [&](int r, int c) { return m * n + node_a(r, c); };
    detail::union_find uf(2 * m * n);
    for (int r = 1; r <= m; ++r)
      for (int c = 1; c < n; ++c) uf.unite(node_a(r, c), node_a(r, c + 1));
    for (int c = 1; c <= n; ++c)
      for (int r = 1; r < m; ++r) uf.unite(node_b(r, c), node_b(r + 1, c));
    for (site v : d.existing_vias)
      uf.unite(node_a(v.row, v.col), node_b(v.row, v.col));

    std::set<int> pad_roots;
    for (const pad& p : d.pads)
      pad_roots.insert(uf.find(p.layer == layer_id::a ? node_a(p.row, p.col)
                                                      : node_b(p.row, p.col)));
    for (const sink& s : d.sinks)
      if (!pad_roots.count(uf.find(node_a(s.row, s.col))))
        add(violation_kind::disconnected_sink,
            "sink at " + to_string({s.row, s.col}) + " has no path to a pad");
  }

  return out;
}

/// Malformed structured-text input (unknown key, wrong type, bad value).
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

inline void check_keys(const nlohmann::json& j,
                       std::initializer_list<const char*> allowed,
                       const char* what) {
  if (!j.is_object())
    throw parse_error(std::string(what) + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw parse_error("unknown key '" + it.key() + "' in " + what);
  }
}

inline const nlohmann::json& get_key(const nlohmann::json& j, const char* key,
                                     const char* what) {
  auto it = j.find(key);
  if (it == j.end())
    throw parse_error("missing key '" + std::string(key) + "' in " + what);
  return *it;
}

inline int get_int(const nlohmann::json& j, const char* key,
                   const char* what) {
  const nlohmann::json& v = get_key(j, key, what);
  if (!v.is_number_integer())
    throw parse_error("key '" + std::string(key) + "' in " + what +
                      " must be an integer");
  return v.get<int>();
}

inline double get_double(const nlohmann::json& j, const char* key,
                         const char* what) {
  const nlohmann::json& v = get_key(j, key, what);
  if (!v.is_number())
    throw parse_error("key '" + std::string(key) + "' in " + what +
                      " must be a number");
  return v.get<double>();
}

inline site site_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
      !j[1].is_number_integer())
    throw parse_error(std::string(what) + " entries must be [row, col] pairs");
  return {j[0].get<int>(), j[1].get<int>()};
}

inline conflict_mode conflict_mode_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "vertical_only")
      return conflict_mode::vertical_only();
    throw parse_error("conflict_mode string must be \"vertical_only\"");
  }
  if (j.is_object()) {
    check_keys(j, {"radius"}, "conflict_mode");
    const int r = get_int(j, "radius", "conflict_mode");
    if (r < 1) throw parse_error("conflict_mode radius must be >= 1");
    return conflict_mode::radius(r);
  }
  throw parse_error("conflict_mode must be \"vertical_only\" or {\"radius\": r}");
}

inline nlohmann::json conflict_mode_to_json(const conflict_mode& m) {
  if (m.is_vertical_only()) return "vertical_only";
  return nlohmann::json{{"radius", m.radius()}};
}

}  // namespace detail

/// Strict parser for the design input document: unknown keys are an error.
inline design_description design_from_json(const nlohmann::json& j) {
  using namespace detail;
  check_keys(j,
             {"rows", "cols", "pitch_x_um", "pitch_y_um", "blocked",
              "existing_vias", "pads", "sinks", "strap_resistance_h_ohm",
              "strap_resistance_v_ohm", "via_resistance_ohm", "conflict_mode",
              "em_limit_ma"},
             "design");

  design_description d;
  d.rows = get_int(j, "rows", "design");
  d.cols = get_int(j, "cols", "design");
  d.pitch_x_um = get_double(j, "pitch_x_um", "design");
  d.pitch_y_um = get_double(j, "pitch_y_um", "design");

  const nlohmann::json& blocked = get_key(j, "blocked", "design");
  if (!blocked.is_array()) throw parse_error("'blocked' must be an array");
  for (const auto& e : blocked) d.blocked.insert(site_from_json(e, "blocked"));

  const nlohmann::json& vias = get_key(j, "existing_vias", "design");
  if (!vias.is_array()) throw parse_error("'existing_vias' must be an array");
  for (const auto& e : vias)
    d.existing_vias.insert(site_from_json(e, "existing_vias"));

  const nlohmann::json& pads = get_key(j, "pads", "design");
  if (!pads.is_array()) throw parse_error("'pads' must be an array");
  for (const auto& e : pads) {
    check_keys(e, {"layer", "row", "col", "voltage_mv"}, "pad");
    const nlohmann::json& layer = get_key(e, "layer", "pad");
    if (!layer.is_string() ||
        (layer.get<std::string>() != "A" && layer.get<std::string>() != "B"))
      throw parse_error("pad layer must be \"A\" or \"B\"");
    pad p;
    p.layer = layer.get<std::string>() == "A" ? layer_id::a : layer_id::b;
    p.row = get_int(e, "row", "pad");
    p.col = get_int(e, "col", "pad");
    p.voltage_mv = get_double(e, "voltage_mv", "pad");
    d.pads.push_back(p);
  }

  const nlohmann::json& sinks = get_key(j, "sinks", "design");
  if (!sinks.is_array()) throw parse_error("'sinks' must be an array");
  for (const auto& e : sinks) {
    check_keys(e, {"row", "col", "current_ma"}, "sink");
    sink s;
    s.row = get_int(e, "row", "sink");
    s.col = get_int(e, "col", "sink");
    s.current_ma = get_double(e, "current_ma", "sink");
    d.sinks.push_back(s);
  }

  d.strap_resistance_h_ohm = get_double(j, "strap_resistance_h_ohm", "design");
  d.strap_resistance_v_ohm = get_double(j, "strap_resistance_v_ohm", "design");
  d.via_resistance_ohm = get_double(j, "via_resistance_ohm", "design");
  d.mode = conflict_mode_from_json(get_key(j, "conflict_mode", "design"));

  if (auto it = j.find("em_limit_ma"); it != j.end()) {
    if (!it->is_number())
      throw parse_error("'em_limit_ma' must be a number when present");
    d.em_limit_ma = it->get<double>();
  }
  return d;
}

inline nlohmann::json design_to_json(const design_description& d) {
  nlohmann::json j;
  j["rows"] = d.rows;
  j["cols"] = d.cols;
  j["pitch_x_um"] = d.pitch_x_um;
  j["pitch_y_um"] = d.pitch_y_um;
  j["blocked"] = nlohmann::json::array();
  for (site s : d.blocked) j["blocked"].push_back({s.row, s.col});
  j["existing_vias"] = nlohmann::json::array();
  for (site s : d.existing_vias) j["existing_vias"].push_back({s.row, s.col});
  j["pads"] = nlohmann::json::array();
  for (const pad& p : d.pads)
    j["pads"].push_back({{"layer", std::string(1, layer_name(p.layer))},
                         {"row", p.row},
                         {"col", p.col},
                         {"voltage_mv", p.voltage_mv}});
  j["sinks"] = nlohmann::json::array();
  for (const sink& s : d.sinks)
    j["sinks"].push_back(
        {{"row", s.row}, {"col", s.col}, {"current_ma", s.current_ma}});
  j["strap_resistance_h_ohm"] = d.strap_resistance_h_ohm;
  j["strap_resistance_v_ohm"] = d.strap_resistance_v_ohm;
  j["via_resistance_ohm"] = d.via_resistance_ohm;
  j["conflict_mode"] = detail::conflict_mode_to_json(d.mode);
  if (d.em_limit_ma) j["em_limit_ma"] = *d.em_limit_ma;
  return j;
}

}  // namespace gridweld
