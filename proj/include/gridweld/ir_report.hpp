#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gridweld/dc_solver.hpp"
#include "gridweld/network.hpp"
#include "gridweld/solver.hpp"

namespace gridweld {

struct em_violation {
  node_ref from;
  node_ref to;
  double current_ma = 0.0;
};

struct ir_report {
  std::vector<double> voltages_mv;
  double drop_avg_mv = 0.0;
  double drop_worst_mv = 0.0;
  std::vector<em_violation> em_violations;
};

/// Drop statistics over the sink nodes plus the per-edge EM current check
/// (|g * (v_a - v_b)| against the limit, when one is set).
inline ir_report ir_metrics(const resistive_network& net,
                            const std::vector<double>& voltages) {
  ir_report rep;
  rep.voltages_mv = voltages;
  double sum = 0.0;
  for (int id : net.sink_nodes) {
    const double drop = net.supply_mv - voltages[id];
    sum += drop;
    if (drop > rep.drop_worst_mv) rep.drop_worst_mv = drop;
  }
  if (!net.sink_nodes.empty())
    rep.drop_avg_mv = sum / static_cast<double>(net.sink_nodes.size());
  if (net.em_limit_ma) {
    for (const network_edge& e : net.edges) {
      const double current =
          std::abs(e.conductance * (voltages[e.a] - voltages[e.b]));
      if (current > *net.em_limit_ma)
        rep.em_violations.push_back(
            {net.node_info(e.a), net.node_info(e.b), current});
    }
  }
  return rep;
}

inline nlohmann::json ir_report_to_json(const ir_report& rep,
                                        bool include_voltages = false) {
  nlohmann::json j;
  j["drop_avg_mv"] = rep.drop_avg_mv;
  j["drop_worst_mv"] = rep.drop_worst_mv;
  j["em_violations"] = nlohmann::json::array();
  for (const em_violation& v : rep.em_violations)
    j["em_violations"].push_back(
        {{"from", to_string(v.from)},
         {"to", to_string(v.to)},
         {"current_ma", v.current_ma}});
  if (include_voltages) j["voltages_mv"] = rep.voltages_mv;
  return j;
}

/// Per-node voltage dump, layer A row-major then layer B.
inline std::string dump_voltages_csv(const resistive_network& net,
                                     const std::vector<double>& voltages) {
  std::string out = "layer,row,col,voltage_mv\n";
  char line[96];
  for (int id = 0; id < net.node_count(); ++id) {
    const node_ref n = net.node_info(id);
    std::snprintf(line, sizeof(line), "%c,%d,%d,%.9f\n", layer_name(n.layer),
                  n.row, n.col, voltages[id]);
    out += line;
  }
  return out;
}

struct compare_row {
  std::string label;
  std::optional<long long> via_count;  // absent for the reference row
  ir_report report;
  std::optional<double> wall_time_s;   // optimization time; absent for reference
};

/// One IR evaluation per strategy, preceded by the mandatory reference row
/// (the unmodified design). Row errors are annotated with their label.
inline std::vector<compare_row> compare(
    const design_description& design,
    const std::vector<std::pair<std::string, selection>>& strategies,
    double tol = 1e-10, solve_method method = solve_method::direct) {
  const candidate_grid grid = build_candidate_grid(design);
  std::vector<compare_row> rows;

  auto evaluate = [&](const std::string& label, const selection& sel) {
    try {
      const resistive_network net = build_network(design, sel);
      const std::vector<double> voltages = solve_dc(net, tol, method);
      return ir_metrics(net, voltages);
    } catch (const std::exception& e) {
      throw std::runtime_error("strategy '" + label + "': " + e.what());
    }
  };

  rows.push_back({"reference", std::nullopt,
                  evaluate("reference", make_selection({})), std::nullopt});
  for (const auto& [label, sel] : strategies) {
    if (!verify_feasible(grid, sel))
      throw std::runtime_error("strategy '" + label +
                               "': selection is not feasible for this design");
    rows.push_back({label, sel.objective, evaluate(label, sel), sel.wall_time_s});
  }
  return rows;
}

}  // namespace gridweld
