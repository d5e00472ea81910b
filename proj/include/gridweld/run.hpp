#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gridweld/generator.hpp"
#include "gridweld/partition.hpp"
#include "gridweld/report.hpp"

namespace gridweld {

enum class run_stage { load, validate, solve, ir, write };

inline const char* to_string(run_stage s) {
  switch (s) {
    case run_stage::load: return "load";
    case run_stage::validate: return "validate";
    case run_stage::solve: return "solve";
    case run_stage::ir: return "ir";
    case run_stage::write: return "write";
  }
  return "unknown";
}

/// Failure of one pipeline stage, carrying the process exit code
/// (1 usage, 2 validation, 3 solver, 4 I/O).
class stage_error : public std::runtime_error {
 public:
  stage_error(run_stage stage, int exit_code, const std::string& msg)
      : std::runtime_error(std::string(to_string(stage)) + ": " + msg),
        stage_(stage),
        exit_code_(exit_code) {}

  run_stage stage() const { return stage_; }
  int exit_code() const { return exit_code_; }

 private:
  run_stage stage_;
  int exit_code_;
};

struct strategy_request {
  enum class kind { reference, optimal, partition };
  kind type = kind::reference;
  int partitions = 0;                   // partition strategy only
  std::vector<int> explicit_break_cols; // overrides even spacing when set

  std::string label() const {
    switch (type) {
      case kind::reference: return "reference";
      case kind::optimal: return "optimal";
      case kind::partition:
        return "partition=" +
               std::to_string(explicit_break_cols.empty()
                                  ? partitions
                                  : static_cast<int>(explicit_break_cols.size()));
    }
    return "?";
  }
};

struct run_config {
  std::optional<std::string> input_path;
  std::optional<std::string> generate_spec_path;
  std::uint64_t seed = 0;
  std::vector<strategy_request> strategies;
  solve_budget budget;
  solve_method ir_method = solve_method::direct;
  double ir_tol = 1e-10;
  std::optional<std::string> report_path;  // stdout when absent
  enum class output_format { text, csv };
  output_format format = output_format::text;
  std::optional<std::string> dump_voltages_dir;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw stage_error(run_stage::load, 4, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content,
                       run_stage stage) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw stage_error(stage, 4, "cannot open '" + path + "' for write");
  out << content;
  if (!out) throw stage_error(stage, 4, "short write to '" + path + "'");
}

inline std::string sanitize_label(const std::string& label) {
  std::string out;
  for (char c : label)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
               ? c
               : '-';
  return out;
}

}  // namespace detail

inline design_description load_run_design(const run_config& config) {
  if (config.input_path && config.generate_spec_path)
    throw stage_error(run_stage::load, 1,
                      "input path and generator spec are mutually exclusive");
  if (!config.input_path && !config.generate_spec_path)
    throw stage_error(run_stage::load, 1,
                      "either an input design or a generator spec is required");
  try {
    if (config.input_path) {
      const std::string text = detail::read_file(*config.input_path);
      return design_from_json(nlohmann::json::parse(text));
    }
    const std::string text = detail::read_file(*config.generate_spec_path);
    const generator_spec spec = generator_spec_from_json(nlohmann::json::parse(text));
    return generate_design(spec, config.seed);
  } catch (const stage_error&) {
    throw;
  } catch (const generation_failed& e) {
    throw stage_error(run_stage::load, 3, e.what());
  } catch (const std::exception& e) {
    throw stage_error(run_stage::load, 2, e.what());
  }
}

/// Full pipeline: load/generate, validate, solve each strategy (timing the
/// optimization phase only), evaluate IR per strategy, render and write the
/// report. Returns the report so callers can inspect it programmatically.
inline comparison_report run(const run_config& config) {
  if (config.strategies.empty())
    throw stage_error(run_stage::load, 1, "at least one strategy is required");

  const design_description design = load_run_design(config);

  const std::vector<violation> violations = validate_design(design);
  if (!violations.empty()) {
    std::string msg = "design is not well formed:";
    for (const violation& v : violations) msg += "\n  " + to_string(v);
    throw stage_error(run_stage::validate, 2, msg);
  }

  candidate_grid grid = build_candidate_grid(design);

  std::vector<std::pair<std::string, selection>> labeled;
  std::optional<selection> optimal;
  std::vector<partitioned_result> partition_results;
  try {
    for (const strategy_request& req : config.strategies) {
      switch (req.type) {
        case strategy_request::kind::reference:
          break;  // compare() always emits the reference row
        case strategy_request::kind::optimal: {
          optimal = solve_exact(grid, config.budget);
          labeled.emplace_back(req.label(), *optimal);
          break;
        }
        case strategy_request::kind::partition: {
          partition_plan plan;
          if (req.explicit_break_cols.empty()) {
            plan = make_breaks(grid, req.partitions);
          } else {
            plan.break_cols = req.explicit_break_cols;
            detail::validate_plan(grid, plan);
          }
          partitioned_result result = solve_partitioned(grid, plan, config.budget);
          labeled.emplace_back(req.label(), result.merged);
          partition_results.push_back(std::move(result));
          break;
        }
      }
    }
    // Runtime check of the suboptimality bound whenever the optimum is known.
    if (optimal && optimal->proven_optimal)
      for (partitioned_result& r : partition_results)
        attach_optimal_objective(r, optimal->objective, grid.rows());
  } catch (const std::invalid_argument& e) {
    throw stage_error(run_stage::solve, 1, e.what());
  } catch (const std::exception& e) {
    throw stage_error(run_stage::solve, 3, e.what());
  }

  comparison_report report;
  try {
    report.rows = compare(design, labeled, config.ir_tol, config.ir_method);
    for (std::size_t i = 0; i < report.rows.size(); ++i)
      if (report.rows[i].label == "optimal") report.optimal_row = i;
  } catch (const std::exception& e) {
    throw stage_error(run_stage::ir, 3, e.what());
  }

  const std::string rendered = config.format == run_config::output_format::csv
                                   ? render_csv(report)
                                   : render_text(report);
  if (config.report_path)
    detail::write_file(*config.report_path, rendered, run_stage::write);

  if (config.dump_voltages_dir) {
    try {
      std::filesystem::create_directories(*config.dump_voltages_dir);
    } catch (const std::exception& e) {
      throw stage_error(run_stage::write, 4, e.what());
    }
    // Rebuild per-row networks so dumps match what was measured.
    std::size_t labeled_index = 0;
    for (const compare_row& row : report.rows) {
      const selection sel = row.via_count
                                ? labeled[labeled_index++].second
                                : make_selection({});
      const resistive_network net = build_network(design, sel);
      detail::write_file(*config.dump_voltages_dir + "/" +
                             detail::sanitize_label(row.label) + ".csv",
                         dump_voltages_csv(net, row.report.voltages_mv),
                         run_stage::write);
    }
  }
  return report;
}

}  // namespace gridweld
