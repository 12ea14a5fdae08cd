// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: change point tests on CSV matrices plus the
// simulation harness (size, power, method comparison).

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cptest/cptest.hpp"

namespace {

struct TestOptions {
  std::string input;
  std::string kernel = "linear";
  double alpha = 0.05;
  cptest::Index bootstrap = 200;
  std::uint64_t seed = 1;
  cptest::Index boundary = 40;
  bool has_header = false;
  std::string delimiter = ",";
  bool transpose = false;
  bool as_json = false;
  bool exit_status = false;
  bool no_timing = false;
  int threads = 0;
};

struct SimulateOptions {
  std::string config_path;
  std::string out_prefix;
  int threads = 0;
  // optional overrides of config file values
  std::string kernel;
  std::uint64_t seed = 0;
  cptest::Index reps = 0;
  cptest::Index bootstrap = 0;
  double alpha = 0.0;
  bool seed_set = false, reps_set = false, bootstrap_set = false, alpha_set = false;
};

int resolve_threads(int requested) {
  return requested > 0 ? requested : cptest::default_threads();
}

cptest::CsvSchema schema_of(const TestOptions& opt) {
  cptest::CsvSchema schema;
  schema.has_header = opt.has_header;
  if (opt.delimiter.size() != 1) {
    throw cptest::InvalidParameter("--delimiter must be a single character");
  }
  schema.delimiter = opt.delimiter[0];
  schema.transpose = opt.transpose;
  return schema;
}

void print_key_value(std::ostream& out, const char* key, const std::string& value) {
  out << key << ' ' << value << '\n';
}

void print_result_text(const nlohmann::json& j) {
  // fixed field order regardless of JSON key sorting
  static const char* order[] = {"statistic", "boundary", "quantile", "p_value", "alpha",
                                "reject",    "B",        "seed",     "kernel",  "n",
                                "p",         "elapsed_ms"};
  for (const char* key : order) {
    if (!j.contains(key)) continue;
    const auto& v = j.at(key);
    std::string text;
    if (v.is_number_float()) {
      text = cptest::format_double(v.get<double>());
    } else if (v.is_boolean()) {
      text = v.get<bool>() ? "true" : "false";
    } else if (v.is_string()) {
      text = v.get<std::string>();
    } else {
      text = v.dump();
    }
    print_key_value(std::cout, key, text);
  }
}

int run_test_command(const TestOptions& opt) {
  cptest::DataMatrix data = cptest::load_csv(opt.input, schema_of(opt));
  cptest::Kernel kernel = cptest::kernel_from_kind(cptest::kernel_kind_from_name(opt.kernel));
  cptest::TestResult result = cptest::run_test(data, kernel, opt.alpha, opt.bootstrap, opt.seed,
                                               resolve_threads(opt.threads));
  nlohmann::json j = cptest::test_result_json(result, !opt.no_timing);
  if (opt.as_json) {
    std::cout << j.dump(2) << '\n';
  } else {
    print_result_text(j);
  }
  if (opt.exit_status && result.reject) return 3;
  return 0;
}

int run_cusum_command(const TestOptions& opt) {
  cptest::DataMatrix data = cptest::load_csv(opt.input, schema_of(opt));
  cptest::CusumResult result = cptest::run_cusum_test(data, opt.boundary, opt.alpha,
                                                      opt.bootstrap, opt.seed,
                                                      resolve_threads(opt.threads));
  nlohmann::json j = cptest::cusum_result_json(result, !opt.no_timing);
  if (opt.as_json) {
    std::cout << j.dump(2) << '\n';
  } else {
    print_result_text(j);
  }
  if (opt.exit_status && result.reject) return 3;
  return 0;
}

cptest::ScenarioConfig load_scenario(const SimulateOptions& opt, nlohmann::json* raw = nullptr) {
  nlohmann::json j = cptest::load_config_file(opt.config_path);
  if (!opt.kernel.empty()) j["kernel"] = opt.kernel;
  if (opt.seed_set) j["seed"] = opt.seed;
  if (opt.reps_set) j["reps"] = opt.reps;
  if (opt.bootstrap_set) j["B"] = opt.bootstrap;
  if (opt.alpha_set) j["alpha"] = opt.alpha;
  if (raw) *raw = j;
  return cptest::scenario_from_json(j);
}

std::string out_prefix(const SimulateOptions& opt, const cptest::ScenarioConfig& config) {
  return opt.out_prefix.empty() ? config.id : opt.out_prefix;
}

int run_simulate_size(const SimulateOptions& opt) {
  cptest::ScenarioConfig config = load_scenario(opt);
  cptest::SizeReport report =
      cptest::size_experiment(config, config.reps, resolve_threads(opt.threads));
  const std::string prefix = out_prefix(opt, config);
  cptest::write_size_pvalues_csv(report, prefix + "_pvalues.csv");
  cptest::write_size_summary_csv(report, prefix + "_summary.csv");
  {
    std::ofstream json_out(prefix + ".json");
    json_out << cptest::size_report_json(report).dump(2) << '\n';
  }
  std::cout << "scenario " << config.id << ": uniform_error_full "
            << cptest::format_double(report.uniform_error_full) << ", uniform_error_01 "
            << cptest::format_double(report.uniform_error_01) << " (" << report.p_values.size()
            << " reps, " << cptest::format_double(report.runtime_ms) << " ms)\n"
            << "wrote " << prefix << "_pvalues.csv, " << prefix << "_summary.csv, " << prefix
            << ".json\n";
  return 0;
}

int run_simulate_power(const SimulateOptions& opt) {
  nlohmann::json raw;
  cptest::ScenarioConfig base = load_scenario(opt, &raw);
  cptest::PowerGrid grid = cptest::power_grid_from_json(raw);
  std::vector<cptest::ScenarioConfig> points = cptest::expand_power_grid(base, grid);
  cptest::PowerReport report =
      cptest::power_experiment(points, base.reps, resolve_threads(opt.threads));
  const std::string prefix = out_prefix(opt, base);
  cptest::write_power_csv(report, prefix + "_power.csv");
  {
    std::ofstream json_out(prefix + ".json");
    json_out << cptest::power_report_json(report).dump(2) << '\n';
  }
  std::cout << "scenario " << base.id << ": " << report.grid.size() << " grid points, "
            << report.reps << " reps each (" << cptest::format_double(report.runtime_ms)
            << " ms)\n";
  for (const cptest::PowerPoint& pt : report.grid) {
    std::cout << "  theta_max " << cptest::format_double(pt.theta_max) << ", m " << pt.m
              << " -> rejection rate " << cptest::format_double(pt.rejection_rate) << '\n';
  }
  std::cout << "wrote " << prefix << "_power.csv, " << prefix << ".json\n";
  return 0;
}

int run_compare(const SimulateOptions& opt) {
  cptest::ScenarioConfig config = load_scenario(opt);
  cptest::ComparisonReport report =
      cptest::method_comparison(config, config.reps, resolve_threads(opt.threads));
  const std::string prefix = out_prefix(opt, config);
  cptest::write_size_pvalues_csv(report.jmb, prefix + "_jmb_pvalues.csv");
  cptest::write_size_pvalues_csv(report.cusum, prefix + "_cusum_pvalues.csv");
  {
    std::ofstream out(prefix + "_summary.csv");
    cptest::write_size_summary_header(out);
    cptest::write_size_summary_row(out, report.jmb);
    cptest::write_size_summary_row(out, report.cusum);
  }
  {
    std::ofstream json_out(prefix + ".json");
    nlohmann::json j{{"jmb", cptest::size_report_json(report.jmb)},
                     {"cusum", cptest::size_report_json(report.cusum)}};
    json_out << j.dump(2) << '\n';
  }
  std::cout << "scenario " << config.id << " (shared datasets, independent multipliers)\n"
            << "  jmb/" << report.jmb.method << ": full "
            << cptest::format_double(report.jmb.uniform_error_full) << ", (0,0.1] "
            << cptest::format_double(report.jmb.uniform_error_01) << '\n'
            << "  cusum (boundary " << config.boundary << "): full "
            << cptest::format_double(report.cusum.uniform_error_full) << ", (0,0.1] "
            << cptest::format_double(report.cusum.uniform_error_01) << '\n'
            << "wrote " << prefix << "_jmb_pvalues.csv, " << prefix << "_cusum_pvalues.csv, "
            << prefix << "_summary.csv, " << prefix << ".json\n";
  return 0;
}

void add_csv_flags(CLI::App* cmd, TestOptions& opt) {
  cmd->add_option("--input", opt.input, "CSV matrix, rows are observations")->required();
  cmd->add_flag("--has-header", opt.has_header, "skip the first line");
  cmd->add_option("--delimiter", opt.delimiter, "field delimiter (default ,)");
  cmd->add_flag("--transpose", opt.transpose, "treat columns as observations");
  cmd->add_option("--alpha", opt.alpha, "significance level in (0,1)");
  cmd->add_option("--bootstrap", opt.bootstrap, "bootstrap replicates B");
  cmd->add_option("--seed", opt.seed, "64-bit reproducibility seed");
  cmd->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
  cmd->add_flag("--json", opt.as_json, "print the result as JSON");
  cmd->add_flag("--no-timing", opt.no_timing, "omit timing fields from output");
  cmd->add_flag("--exit-status", opt.exit_status, "exit 3 when the test rejects");
}

void add_simulate_flags(CLI::App* cmd, SimulateOptions& opt) {
  cmd->add_option("--config", opt.config_path, "scenario config (.json or flat .toml)")
      ->required();
  cmd->add_option("--out", opt.out_prefix, "output file prefix (default: scenario id)");
  cmd->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
  cmd->add_option("--kernel", opt.kernel, "override kernel from config")
      ->check(CLI::IsMember({"linear", "sign"}));
  cmd->add_option("--seed", opt.seed, "override seed");
  cmd->add_option("--reps", opt.reps, "override repetition count");
  cmd->add_option("--B", opt.bootstrap, "override bootstrap replicates");
  cmd->add_option("--alpha", opt.alpha, "override significance level");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bootstrap change point tests for high-dimensional location shifts"};
  app.require_subcommand(1);

  TestOptions test_opt;
  CLI::App* test_cmd = app.add_subcommand("test", "U-statistic multiplier bootstrap test");
  test_cmd->add_option("--kernel", test_opt.kernel, "anti-symmetric kernel")
      ->check(CLI::IsMember({"linear", "sign"}));
  add_csv_flags(test_cmd, test_opt);

  TestOptions cusum_opt;
  CLI::App* cusum_cmd = app.add_subcommand("cusum", "CUSUM multiplier bootstrap baseline");
  cusum_cmd->add_option("--boundary", cusum_opt.boundary, "boundary removal (default 40)");
  add_csv_flags(cusum_cmd, cusum_opt);

  SimulateOptions size_opt;
  CLI::App* size_cmd = app.add_subcommand("simulate-size", "null-size Monte Carlo study");
  add_simulate_flags(size_cmd, size_opt);

  SimulateOptions power_opt;
  CLI::App* power_cmd = app.add_subcommand("simulate-power", "power curve Monte Carlo study");
  add_simulate_flags(power_cmd, power_opt);

  SimulateOptions compare_opt;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "paired JMB (linear) vs CUSUM size comparison");
  add_simulate_flags(compare_cmd, compare_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  // flag-provided overrides are distinguishable from defaults via counts
  size_opt.seed_set = size_cmd->count("--seed") > 0;
  size_opt.reps_set = size_cmd->count("--reps") > 0;
  size_opt.bootstrap_set = size_cmd->count("--B") > 0;
  size_opt.alpha_set = size_cmd->count("--alpha") > 0;
  power_opt.seed_set = power_cmd->count("--seed") > 0;
  power_opt.reps_set = power_cmd->count("--reps") > 0;
  power_opt.bootstrap_set = power_cmd->count("--B") > 0;
  power_opt.alpha_set = power_cmd->count("--alpha") > 0;
  compare_opt.seed_set = compare_cmd->count("--seed") > 0;
  compare_opt.reps_set = compare_cmd->count("--reps") > 0;
  compare_opt.bootstrap_set = compare_cmd->count("--B") > 0;
  compare_opt.alpha_set = compare_cmd->count("--alpha") > 0;

  try {
    if (*test_cmd) return run_test_command(test_opt);
    if (*cusum_cmd) return run_cusum_command(cusum_opt);
    if (*size_cmd) return run_simulate_size(size_opt);
    if (*power_cmd) return run_simulate_power(power_opt);
    if (*compare_cmd) return run_compare(compare_opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
