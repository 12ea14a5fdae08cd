#pragma once
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cptest/bootstrap.hpp"
#include "cptest/cusum.hpp"
#include "cptest/datagen.hpp"
#include "cptest/parallel.hpp"
#include "cptest/rng.hpp"

namespace cptest {

/// Exact sup_{alpha in (0, upper]} |ECDF(alpha) - alpha| (or over the open
/// interval when include_upper is false, as for (0,1)). Evaluated at the
/// sorted jump points with one-sided limits at both interval endpoints, so no
/// grid approximation enters the headline metric.
inline double uniform_size_error(std::vector<double> p_values, double upper = 1.0,
                                 bool include_upper = false) {
  if (p_values.empty()) throw InvalidParameter("uniform_size_error of empty p-values");
  if (!(upper > 0.0 && upper <= 1.0)) throw InvalidParameter("upper must lie in (0,1]");
  std::sort(p_values.begin(), p_values.end());
  const double r = static_cast<double>(p_values.size());

  // Right limit at 0: ECDF mass at or below zero.
  const auto at_zero = std::upper_bound(p_values.begin(), p_values.end(), 0.0) - p_values.begin();
  double best = static_cast<double>(at_zero) / r;

  for (std::size_t i = 0; i < p_values.size(); ++i) {
    const double pv = p_values[i];
    if (pv <= 0.0) continue;
    if (pv > upper) break;
    const double at_jump = static_cast<double>(i + 1) / r;
    const double left_limit = static_cast<double>(i) / r;
    if (pv < upper || include_upper) best = std::max(best, std::abs(at_jump - pv));
    best = std::max(best, std::abs(left_limit - pv));
  }

  const auto below = std::lower_bound(p_values.begin(), p_values.end(), upper) - p_values.begin();
  best = std::max(best, std::abs(static_cast<double>(below) / r - upper));
  if (include_upper) {
    const auto at = std::upper_bound(p_values.begin(), p_values.end(), upper) - p_values.begin();
    best = std::max(best, std::abs(static_cast<double>(at) / r - upper));
  }
  return best;
}

struct SizeReport {
  std::vector<double> p_values;
  double uniform_error_full = 0.0;  // sup over alpha in (0,1)
  double uniform_error_01 = 0.0;    // sup over alpha in (0,0.1]
  ScenarioConfig scenario;
  std::string method;  // "linear", "sign" or "cusum"
  double runtime_ms = 0.0;
};

struct PowerPoint {
  double theta_max = 0.0;
  Index m = 0;
  double rejection_rate = 0.0;
};

struct PowerReport {
  std::vector<PowerPoint> grid;
  ScenarioConfig base;
  double alpha = 0.05;
  Index reps = 0;
  double runtime_ms = 0.0;
};

struct ComparisonReport {
  SizeReport jmb;
  SizeReport cusum;
};

namespace detail {

inline void finalize_size_metrics(SizeReport& report) {
  report.uniform_error_full = uniform_size_error(report.p_values, 1.0, false);
  report.uniform_error_01 = uniform_size_error(report.p_values, 0.1, true);
}

}  // namespace detail

/// R independent null datasets -> bootstrap p-values -> uniform error-in-size
/// metrics. Repetition r is a pure function of (scenario seed, scenario id, r).
inline SizeReport size_experiment(const ScenarioConfig& config, Index R, int threads = 1) {
  config.validate();
  if (!config.is_null()) {
    throw InvalidParameter("size_experiment requires a null (no-shift) scenario");
  }
  if (R < 1) throw InvalidParameter("size_experiment needs R >= 1");
  const auto start = std::chrono::steady_clock::now();

  ScenarioSampler sampler(config);
  const Kernel kernel = kernel_from_kind(config.kernel);
  const std::uint64_t sid = hash_label(config.id);

  SizeReport report;
  report.scenario = config;
  report.method = kernel.name();
  report.p_values.resize(static_cast<std::size_t>(R));
  parallel_for(R, threads, [&](std::int64_t rep) {
    const auto r = static_cast<std::uint64_t>(rep);
    DataMatrix data = sampler.generate(derive_seed(config.seed, sid, r, stream::kData));
    TestResult res = run_test(data, kernel, config.alpha, config.B,
                              derive_seed(config.seed, sid, r, stream::kJmb));
    report.p_values[static_cast<std::size_t>(rep)] = res.p_value;
  });
  detail::finalize_size_metrics(report);
  report.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

/// Rejection rate at the nominal level for every shifted scenario in the
/// grid, R repetitions each, independent substreams per grid point.
inline PowerReport power_experiment(const std::vector<ScenarioConfig>& grid, Index R,
                                    int threads = 1) {
  if (grid.empty()) throw InvalidParameter("power_experiment needs a nonempty grid");
  if (R < 1) throw InvalidParameter("power_experiment needs R >= 1");
  const auto start = std::chrono::steady_clock::now();

  PowerReport report;
  report.base = grid.front();
  report.alpha = grid.front().alpha;
  report.reps = R;
  // Grid entries are shifted scenarios; a theta = 0 (null) point may be
  // embedded to anchor the curve at the nominal size.
  for (const ScenarioConfig& config : grid) {
    config.validate();
    ScenarioSampler sampler(config);
    const Kernel kernel = kernel_from_kind(config.kernel);
    const std::uint64_t sid = hash_label(config.id);
    std::vector<char> rejected(static_cast<std::size_t>(R), 0);
    parallel_for(R, threads, [&](std::int64_t rep) {
      const auto r = static_cast<std::uint64_t>(rep);
      DataMatrix data = sampler.generate(derive_seed(config.seed, sid, r, stream::kData));
      TestResult res = run_test(data, kernel, config.alpha, config.B,
                                derive_seed(config.seed, sid, r, stream::kJmb));
      rejected[static_cast<std::size_t>(rep)] = res.reject ? 1 : 0;
    });
    const double rate =
        static_cast<double>(std::count(rejected.begin(), rejected.end(), 1)) /
        static_cast<double>(R);
    report.grid.push_back(PowerPoint{config.theta_max(),
                                     config.m.value_or(0), rate});
  }
  report.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

/// Linear-kernel multiplier bootstrap vs. CUSUM bootstrap on the SAME
/// generated datasets (shared data stream, independent multiplier streams),
/// which shrinks the Monte Carlo variance of the paired comparison.
inline ComparisonReport method_comparison(const ScenarioConfig& config, Index R,
                                          int threads = 1) {
  config.validate();
  if (!config.is_null()) {
    throw InvalidParameter("method_comparison requires a null (no-shift) scenario");
  }
  if (R < 1) throw InvalidParameter("method_comparison needs R >= 1");
  validate_cusum_boundary(config.n, config.boundary);
  const auto start = std::chrono::steady_clock::now();

  ScenarioSampler sampler(config);
  const Kernel kernel = Kernel::linear();
  const std::uint64_t sid = hash_label(config.id);

  ComparisonReport report;
  report.jmb.scenario = config;
  report.jmb.method = kernel.name();
  report.jmb.p_values.resize(static_cast<std::size_t>(R));
  report.cusum.scenario = config;
  report.cusum.method = "cusum";
  report.cusum.p_values.resize(static_cast<std::size_t>(R));
  parallel_for(R, threads, [&](std::int64_t rep) {
    const auto r = static_cast<std::uint64_t>(rep);
    DataMatrix data = sampler.generate(derive_seed(config.seed, sid, r, stream::kData));
    TestResult jmb = run_test(data, kernel, config.alpha, config.B,
                              derive_seed(config.seed, sid, r, stream::kJmb));
    CusumResult cusum = run_cusum_test(data, config.boundary, config.alpha, config.B,
                                       derive_seed(config.seed, sid, r, stream::kCusum));
    report.jmb.p_values[static_cast<std::size_t>(rep)] = jmb.p_value;
    report.cusum.p_values[static_cast<std::size_t>(rep)] = cusum.p_value;
  });
  detail::finalize_size_metrics(report.jmb);
  detail::finalize_size_metrics(report.cusum);
  const double elapsed =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  report.jmb.runtime_ms = elapsed;
  report.cusum.runtime_ms = elapsed;
  return report;
}

}  // namespace cptest
