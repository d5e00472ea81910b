#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "gridweld/ir_report.hpp"

namespace gridweld {

/// Comparison table rows (reference first) plus the index of the optimal-LP
/// row when one was run, used as the runtime baseline.
struct comparison_report {
  std::vector<compare_row> rows;
  std::optional<std::size_t> optimal_row;
};

/// Percentage improvement of `value` over `reference`; 0 when the reference
/// is itself (or zero).
inline double improvement_pct(double reference, double value) {
  if (reference == 0.0) return 0.0;
  return (reference - value) / reference * 100.0;
}

namespace detail {

inline std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace detail

/// One-decimal percentage string, e.g. "6.0%".
inline std::string format_pct(double pct) {
  return detail::format_fixed(pct, 1) + "%";
}

inline std::string render_csv(const comparison_report& report) {
  std::string out =
      "strategy,vias_added,voltage_drop_avg_mv,voltage_drop_worst_mv,"
      "runtime_s,power_integrity_improvement_pct,runtime_improvement_pct\n";
  const double ref_worst = report.rows.empty()
                               ? 0.0
                               : report.rows.front().report.drop_worst_mv;
  std::optional<double> t_opt;
  if (report.optimal_row)
    t_opt = report.rows[*report.optimal_row].wall_time_s;
  for (const compare_row& row : report.rows) {
    out += row.label;
    out += ',';
    out += row.via_count ? std::to_string(*row.via_count) : "NA";
    out += ',';
    out += detail::format_fixed(row.report.drop_avg_mv, 6);
    out += ',';
    out += detail::format_fixed(row.report.drop_worst_mv, 6);
    out += ',';
    out += row.wall_time_s ? detail::format_fixed(*row.wall_time_s, 6) : "NA";
    out += ',';
    out += detail::format_fixed(
        improvement_pct(ref_worst, row.report.drop_worst_mv), 1);
    out += ',';
    out += t_opt && row.wall_time_s
               ? detail::format_fixed(improvement_pct(*t_opt, *row.wall_time_s), 1)
               : "NA";
    out += '\n';
  }
  return out;
}

inline std::string render_text(const comparison_report& report) {
  const std::vector<std::string> headers = {
      "strategy", "# vias added", "voltage drop avg (mV)",
      "voltage drop worst (mV)", "runtime (s)"};
  std::vector<std::vector<std::string>> cells;
  for (const compare_row& row : report.rows)
    cells.push_back(
        {row.label,
         row.via_count ? std::to_string(*row.via_count) : "N/A",
         detail::format_fixed(row.report.drop_avg_mv, 4),
         detail::format_fixed(row.report.drop_worst_mv, 4),
         row.wall_time_s ? detail::format_fixed(*row.wall_time_s, 3) : "N/A"});

  std::vector<std::size_t> width(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    width[c] = headers[c].size();
    for (const auto& row : cells)
      if (row[c].size() > width[c]) width[c] = row[c].size();
  }
  auto emit_row = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size())
        line += std::string(width[c] - row[c].size() + 2, ' ');
    }
    line += '\n';
    return line;
  };

  std::string out = emit_row(headers);
  for (const auto& row : cells) out += emit_row(row);

  if (!report.rows.empty()) {
    const double ref_worst = report.rows.front().report.drop_worst_mv;
    std::string pi_line;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
      if (!pi_line.empty()) pi_line += ", ";
      pi_line += report.rows[i].label + " " +
                 format_pct(improvement_pct(
                     ref_worst, report.rows[i].report.drop_worst_mv));
    }
    if (!pi_line.empty())
      out += "power integrity improvement vs reference: " + pi_line + "\n";
    if (report.optimal_row && report.rows[*report.optimal_row].wall_time_s) {
      const double t_opt = *report.rows[*report.optimal_row].wall_time_s;
      std::string rt_line;
      for (std::size_t i = 1; i < report.rows.size(); ++i) {
        if (i == *report.optimal_row || !report.rows[i].wall_time_s) continue;
        if (!rt_line.empty()) rt_line += ", ";
        rt_line += report.rows[i].label + " " +
                   format_pct(improvement_pct(t_opt, *report.rows[i].wall_time_s));
      }
      if (!rt_line.empty())
        out += "runtime improvement vs optimal: " + rt_line + "\n";
    }
  }
  return out;
}

}  // namespace gridweld
