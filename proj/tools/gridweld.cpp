// gridweld: post-route power grid enhancement workbench.
//
// Subcommands:
//   run       solve strategies on a design and emit a comparison report
//   generate  write a deterministic benchmark design from a generator spec
//   validate  check a design file against all structural invariants
//
// Exit codes: 0 success, 1 usage error, 2 validation failure,
//             3 solver failure, 4 I/O failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridweld/gridweld.hpp"

namespace {

int parse_strategies(const std::string& text,
                     const std::vector<int>& break_cols,
                     std::vector<gridweld::strategy_request>& out) {
  bool had_partition_k = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    pos = comma == std::string::npos ? text.size() + 1 : comma + 1;
    if (item.empty()) continue;
    gridweld::strategy_request req;
    if (item == "reference") {
      req.type = gridweld::strategy_request::kind::reference;
    } else if (item == "optimal") {
      req.type = gridweld::strategy_request::kind::optimal;
    } else if (item.rfind("partition=", 0) == 0) {
      req.type = gridweld::strategy_request::kind::partition;
      try {
        req.partitions = std::stoi(item.substr(10));
      } catch (const std::exception&) {
        std::cerr << "usage: bad partition count in '" << item << "'\n";
        return 1;
      }
      if (req.partitions < 0) {
        std::cerr << "usage: partition count must be >= 0\n";
        return 1;
      }
      had_partition_k = true;
    } else {
      std::cerr << "usage: unknown strategy '" << item << "'\n";
      return 1;
    }
    out.push_back(req);
  }
  if (!break_cols.empty()) {
    if (had_partition_k) {
      std::cerr << "usage: --break-cols and partition=<k> strategies are "
                   "mutually exclusive\n";
      return 1;
    }
    gridweld::strategy_request req;
    req.type = gridweld::strategy_request::kind::partition;
    req.explicit_break_cols = break_cols;
    out.push_back(req);
  }
  if (out.empty()) {
    std::cerr << "usage: at least one strategy is required\n";
    return 1;
  }
  return 0;
}

int run_command(const std::string& input, const std::string& generate,
                std::uint64_t seed, const std::string& strategies,
                const std::vector<int>& partitions_flag,
                const std::vector<int>& break_cols, double budget_time,
                long long budget_nodes, const std::string& ir_method,
                double ir_tol, const std::string& report_path,
                const std::string& report_format,
                const std::string& dump_voltages) {
  gridweld::run_config config;
  if (!input.empty()) config.input_path = input;
  if (!generate.empty()) config.generate_spec_path = generate;
  config.seed = seed;

  std::string strategy_text = strategies;
  if (!partitions_flag.empty()) {
    if (!break_cols.empty()) {
      std::cerr << "usage: --partitions and --break-cols are mutually "
                   "exclusive\n";
      return 1;
    }
    for (int k : partitions_flag)
      strategy_text += ",partition=" + std::to_string(k);
  }
  if (const int rc = parse_strategies(strategy_text, break_cols, config.strategies))
    return rc;

  if (budget_time > 0) config.budget.time_limit_s = budget_time;
  if (budget_nodes > 0) config.budget.max_nodes = budget_nodes;
  if (ir_method == "cg") {
    config.ir_method = gridweld::solve_method::conjugate_gradient;
  } else if (ir_method == "direct") {
    config.ir_method = gridweld::solve_method::direct;
  } else {
    std::cerr << "usage: --ir-method must be 'cg' or 'direct'\n";
    return 1;
  }
  config.ir_tol = ir_tol;
  if (!report_path.empty()) config.report_path = report_path;
  if (report_format == "csv") {
    config.format = gridweld::run_config::output_format::csv;
  } else if (report_format == "text") {
    config.format = gridweld::run_config::output_format::text;
  } else {
    std::cerr << "usage: --report-format must be 'csv' or 'text'\n";
    return 1;
  }
  if (!dump_voltages.empty()) config.dump_voltages_dir = dump_voltages;

  try {
    const gridweld::comparison_report report = gridweld::run(config);
    if (!config.report_path) {
      std::cout << (config.format == gridweld::run_config::output_format::csv
                        ? gridweld::render_csv(report)
                        : gridweld::render_text(report));
    }
    return 0;
  } catch (const gridweld::stage_error& e) {
    std::cerr << "gridweld run failed at stage " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "gridweld run failed: " << e.what() << "\n";
    return 3;
  }
}

int generate_command(const std::string& spec_path, std::uint64_t seed,
                     const std::string& out_path) {
  try {
    const std::string text = gridweld::detail::read_file(spec_path);
    const gridweld::generator_spec spec =
        gridweld::generator_spec_from_json(nlohmann::json::parse(text));
    const gridweld::design_description design =
        gridweld::generate_design(spec, seed);
    gridweld::detail::write_file(out_path,
                                 gridweld::design_to_json(design).dump(2) + "\n",
                                 gridweld::run_stage::write);
    return 0;
  } catch (const gridweld::stage_error& e) {
    std::cerr << "gridweld generate failed at stage " << e.what() << "\n";
    return e.exit_code();
  } catch (const gridweld::generation_failed& e) {
    std::cerr << "gridweld generate failed: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "gridweld generate failed: " << e.what() << "\n";
    return 2;
  }
}

int validate_command(const std::string& input) {
  try {
    const std::string text = gridweld::detail::read_file(input);
    const gridweld::design_description design =
        gridweld::design_from_json(nlohmann::json::parse(text));
    const std::vector<gridweld::violation> violations =
        gridweld::validate_design(design);
    if (violations.empty()) {
      std::cout << "OK: " << input << " passes all checks\n";
      return 0;
    }
    for (const gridweld::violation& v : violations)
      std::cout << gridweld::to_string(v) << "\n";
    return 2;
  } catch (const gridweld::stage_error& e) {
    std::cerr << "gridweld validate failed at stage " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "gridweld validate failed: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post-route power grid enhancement workbench"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Solve strategies and report");
  std::string input, generate, strategies = "reference,optimal";
  std::string ir_method = "direct", report_path, report_format = "text";
  std::string dump_voltages;
  std::uint64_t seed = 0;
  std::vector<int> partitions_flag, break_cols;
  double budget_time = 0.0, ir_tol = 1e-10;
  long long budget_nodes = 0;
  run->add_option("--input", input, "Design JSON file");
  run->add_option("--generate", generate, "Generator spec JSON file");
  run->add_option("--seed", seed, "Generator seed");
  run->add_option("--strategies", strategies,
                  "Comma list: reference,optimal,partition=<k>");
  run->add_option("--partitions", partitions_flag,
                  "Add partition strategies by break count");
  run->add_option("--break-cols", break_cols,
                  "Explicit break columns (one partition strategy)")
      ->delimiter(',');
  run->add_option("--budget-time", budget_time, "Solve time limit (s)");
  run->add_option("--budget-nodes", budget_nodes, "Branch-and-bound node limit");
  run->add_option("--ir-method", ir_method, "IR solver: direct|cg");
  run->add_option("--ir-tol", ir_tol, "CG relative residual tolerance");
  run->add_option("--report", report_path, "Report output path");
  run->add_option("--report-format", report_format, "text|csv");
  run->add_option("--dump-voltages", dump_voltages,
                  "Directory for per-strategy voltage dumps");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a benchmark design");
  std::string gen_spec, gen_out;
  std::uint64_t gen_seed = 0;
  gen->add_option("--spec", gen_spec, "Generator spec JSON file")->required();
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out", gen_out, "Design output path")->required();

  // validate
  auto* val = app.add_subcommand("validate", "Check a design file");
  std::string val_input;
  val->add_option("--input", val_input, "Design JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (run->parsed())
    return run_command(input, generate, seed, strategies, partitions_flag,
                       break_cols, budget_time, budget_nodes, ir_method, ir_tol,
                       report_path, report_format, dump_voltages);
  if (gen->parsed()) return generate_command(gen_spec, gen_seed, gen_out);
  if (val->parsed()) return validate_command(val_input);
  return 1;
}
