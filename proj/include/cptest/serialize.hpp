#pragma once
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <string>

#include <json.hpp>

#include "cptest/bootstrap.hpp"
#include "cptest/csv.hpp"
#include "cptest/cusum.hpp"
#include "cptest/experiments.hpp"

namespace cptest {

inline nlohmann::json test_result_json(const TestResult& r, bool include_timing = true) {
  nlohmann::json j{
      {"statistic", r.statistic.t_max},
      {"quantile", r.quantile},
      {"p_value", r.p_value},
      {"alpha", r.alpha},
      {"reject", r.reject},
      {"B", r.B},
      {"seed", r.seed},
      {"kernel", r.kernel},
      {"n", r.n},
      {"p", r.p},
  };
  if (include_timing) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

inline nlohmann::json cusum_result_json(const CusumResult& r, bool include_timing = true) {
  nlohmann::json j{
      {"statistic", r.s_max_statistic},
      {"boundary", r.boundary},
      {"quantile", r.quantile},
      {"p_value", r.p_value},
      {"alpha", r.alpha},
      {"reject", r.reject},
      {"B", r.B},
      {"seed", r.seed},
      {"kernel", "cusum"},
      {"n", r.n},
      {"p", r.p},
  };
  if (include_timing) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

inline nlohmann::json size_report_json(const SizeReport& r, bool include_timing = true) {
  nlohmann::json j{
      {"scenario_id", r.scenario.id},
      {"n", r.scenario.n},
      {"p", r.scenario.p},
      {"kernel", r.method},
      {"distribution", r.scenario.noise.name()},
      {"cov", r.scenario.cov.name()},
      {"B", r.scenario.B},
      {"reps", static_cast<Index>(r.p_values.size())},
      {"seed", r.scenario.seed},
      {"uniform_error_full", r.uniform_error_full},
      {"uniform_error_01", r.uniform_error_01},
      {"p_values", r.p_values},
  };
  if (include_timing) j["runtime_ms"] = r.runtime_ms;
  return j;
}

inline nlohmann::json power_report_json(const PowerReport& r, bool include_timing = true) {
  nlohmann::json grid = nlohmann::json::array();
  for (const PowerPoint& pt : r.grid) {
    grid.push_back({{"theta_max", pt.theta_max},
                    {"m", pt.m},
                    {"rejection_rate", pt.rejection_rate}});
  }
  nlohmann::json j{
      {"scenario_id", r.base.id},
      {"n", r.base.n},
      {"p", r.base.p},
      {"kernel", kernel_kind_name(r.base.kernel)},
      {"distribution", r.base.noise.name()},
      {"cov", r.base.cov.name()},
      {"alpha", r.alpha},
      {"R", r.reps},
      {"grid", grid},
  };
  if (include_timing) j["runtime_ms"] = r.runtime_ms;
  return j;
}

/// One row per repetition: scenario_id, rep, p_value.
inline void write_size_pvalues_csv(const SizeReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << "scenario_id,rep,p_value\n";
  for (std::size_t i = 0; i < r.p_values.size(); ++i) {
    out << r.scenario.id << ',' << i << ',' << format_double(r.p_values[i]) << '\n';
  }
}

inline void write_size_summary_header(std::ofstream& out) {
  out << "scenario_id,n,p,kernel,distribution,cov,uniform_error_full,uniform_error_01,"
         "runtime_ms\n";
}

inline void write_size_summary_row(std::ofstream& out, const SizeReport& r,
                                   bool include_timing = true) {
  out << r.scenario.id << ',' << r.scenario.n << ',' << r.scenario.p << ',' << r.method << ','
      << r.scenario.noise.name() << ',' << r.scenario.cov.name() << ','
      << format_double(r.uniform_error_full) << ',' << format_double(r.uniform_error_01) << ','
      << (include_timing ? format_double(r.runtime_ms) : std::string("-")) << '\n';
}

inline void write_size_summary_csv(const SizeReport& r, const std::string& path,
                                   bool include_timing = true) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  write_size_summary_header(out);
  write_size_summary_row(out, r, include_timing);
}

inline void write_power_csv(const PowerReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << "theta_max,m,rejection_rate,R\n";
  for (const PowerPoint& pt : r.grid) {
    out << format_double(pt.theta_max) << ',' << pt.m << ','
        << format_double(pt.rejection_rate) << ',' << r.reps << '\n';
  }
}

}  // namespace cptest
