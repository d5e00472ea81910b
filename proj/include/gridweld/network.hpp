#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridweld/design.hpp"
#include "gridweld/selection.hpp"
#include "gridweld/union_find.hpp"

namespace gridweld {

struct network_edge {
  int a = 0;
  int b = 0;
  double conductance = 0.0;  // siemens
};

struct node_ref {
  layer_id layer = layer_id::a;
  int row = 1;
  int col = 1;
};

inline std::string to_string(const node_ref& n) {
  return std::string(1, layer_name(n.layer)) + to_string(site{n.row, n.col});
}

/// Two-layer DC model of the power mesh. Layer A carries one horizontal
/// strap per row, layer B one vertical strap per column; vias couple the
/// layers at their site. Pads are ideal voltage sources (Dirichlet nodes),
/// sinks draw fixed current from layer-A nodes. Node ids: layer A row-major
/// first, then layer B.
struct resistive_network {
  int rows = 0;
  int cols = 0;
  double supply_mv = 0.0;
  std::vector<network_edge> edges;
  std::vector<int> pad_nodes;           // ascending, unique
  std::vector<int> sink_nodes;          // ascending, unique
  std::vector<double> sink_current_ma;  // per node id
  std::optional<double> em_limit_ma;

  int node_count() const { return 2 * rows * cols; }
  int node_a(int row, int col) const { return (row - 1) * cols + (col - 1); }
  int node_b(int row, int col) const { return rows * cols + node_a(row, col); }

  node_ref node_info(int id) const {
    node_ref n;
    const int per_layer = rows * cols;
    n.layer = id < per_layer ? layer_id::a : layer_id::b;
    const int cell = id % per_layer;
    n.row = cell / cols + 1;
    n.col = cell % cols + 1;
    return n;
  }
};

class disconnected_sink_error : public std::runtime_error {
 public:
  explicit disconnected_sink_error(const std::string& msg)
      : std::runtime_error(msg) {}
};

/// Assembles the mesh for a design plus a set of added vias. Added vias get
/// the same via conductance as existing ones. Throws disconnected_sink_error
/// if some sink has no path to a pad (validate_design pre-empts this for
/// well-formed designs).
inline resistive_network build_network(const design_description& d,
                                       const selection& added_vias) {
  if (d.rows < 1 || d.cols < 1)
    throw std::invalid_argument("network needs a at least 1x1 design");
  if (d.pads.empty()) throw std::invalid_argument("network needs pads");

  resistive_network net;
  net.rows = d.rows;
  net.cols = d.cols;
  net.supply_mv = d.pads.front().voltage_mv;
  net.em_limit_ma = d.em_limit_ma;
  net.sink_current_ma.assign(net.node_count(), 0.0);

  const double g_h = 1.0 / d.strap_resistance_h_ohm;
  const double g_v = 1.0 / d.strap_resistance_v_ohm;
  const double g_via = 1.0 / d.via_resistance_ohm;

  for (int r = 1; r <= d.rows; ++r)
    for (int c = 1; c < d.cols; ++c)
      net.edges.push_back({net.node_a(r, c), net.node_a(r, c + 1), g_h});
  for (int r = 1; r < d.rows; ++r)
    for (int c = 1; c <= d.cols; ++c)
      net.edges.push_back({net.node_b(r, c), net.node_b(r + 1, c), g_v});

  std::set<site> vias = d.existing_vias;
  vias.insert(added_vias.chosen.begin(), added_vias.chosen.end());
  for (site v : vias)
    net.edges.push_back({net.node_a(v.row, v.col), net.node_b(v.row, v.col), g_via});

  std::set<int> pad_ids;
  for (const pad& p : d.pads)
    pad_ids.insert(p.layer == layer_id::a ? net.node_a(p.row, p.col)
                                          : net.node_b(p.row, p.col));
  net.pad_nodes.assign(pad_ids.begin(), pad_ids.end());

  std::set<int> sink_ids;
  for (const sink& s : d.sinks) {
    const int id = net.node_a(s.row, s.col);
    net.sink_current_ma[id] += s.current_ma;
    sink_ids.insert(id);
  }
  net.sink_nodes.assign(sink_ids.begin(), sink_ids.end());

  detail::union_find uf(net.node_count());
  for (const network_edge& e : net.edges) uf.unite(e.a, e.b);
  std::set<int> pad_roots;
  for (int p : net.pad_nodes) pad_roots.insert(uf.find(p));
  for (int s : net.sink_nodes)
    if (!pad_roots.count(uf.find(s)))
      throw disconnected_sink_error("sink node " + to_string(net.node_info(s)) +
                                    " has no path to a pad");
  return net;
}

}  // namespace gridweld
