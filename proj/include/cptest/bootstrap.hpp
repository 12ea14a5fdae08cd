#pragma once
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cptest/matrix.hpp"
#include "cptest/parallel.hpp"
#include "cptest/rng.hpp"
#include "cptest/teststat.hpp"

namespace cptest {

/// One bootstrap draw per replicate: the l_inf norm of the multiplier
/// statistic, so every entry is >= 0.
struct BootstrapDraws {
  std::vector<double> values;
  std::uint64_t seed = 0;

  Index B() const { return static_cast<Index>(values.size()); }
};

/// Multiplier statistic for given multipliers e:
///   sqrt(n) C(n,2)^{-1} sum_i e_i A_i.
inline Vector jmb_vector_from_multipliers(const HalfRows& rows, const Vector& e) {
  if (e.size() != rows.n()) {
    throw DimensionMismatch("multiplier vector length must equal n");
  }
  return u_stat_scale(rows.n()) * (rows.rows.transpose() * e);
}

/// Replicate b's multipliers are N(0,1) draws from a stream derived from
/// (seed, b) alone, so serial and parallel execution agree exactly.
inline Vector jmb_replicate_multipliers(Index n, std::uint64_t seed, std::uint64_t replicate) {
  auto engine = make_engine(derive_seed(seed, replicate, stream::kJmb));
  std::normal_distribution<double> normal;
  Vector e(n);
  for (Index i = 0; i < n; ++i) e(i) = normal(engine);
  return e;
}

inline Vector jmb_replicate_vector(const HalfRows& rows, std::uint64_t seed, std::uint64_t replicate) {
  return jmb_vector_from_multipliers(rows, jmb_replicate_multipliers(rows.n(), seed, replicate));
}

inline BootstrapDraws jmb_draws(const HalfRows& rows, Index B, std::uint64_t seed, int threads = 1) {
  if (B < 1) throw InvalidParameter("bootstrap replicate count B must be >= 1");
  BootstrapDraws draws;
  draws.seed = seed;
  draws.values.resize(static_cast<std::size_t>(B));
  parallel_for(B, threads, [&](std::int64_t b) {
    draws.values[static_cast<std::size_t>(b)] =
        jmb_replicate_vector(rows, seed, static_cast<std::uint64_t>(b)).cwiseAbs().maxCoeff();
  });
  return draws;
}

/// ceil(B * level)-th smallest draw: the empirical inf{t : ECDF(t) >= level}.
/// A tiny fuzz keeps exact integer products from ceiling one rank too high.
inline double quantile(const BootstrapDraws& draws, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw InvalidParameter("quantile level must lie in (0,1)");
  }
  if (draws.values.empty()) throw InvalidParameter("quantile of empty draws");
  const Index B = draws.B();
  const double target = static_cast<double>(B) * level;
  Index k = static_cast<Index>(std::ceil(target - 1e-12 * (1.0 + target)));
  k = std::clamp<Index>(k, 1, B);
  std::vector<double> copy(draws.values);
  std::nth_element(copy.begin(), copy.begin() + (k - 1), copy.end());
  return copy[static_cast<std::size_t>(k - 1)];
}

/// Add-one convention: (1 + #{b : draw_b >= observed}) / (B + 1), always in
/// (0, 1]. The quantile rule stays the primary decision; with it, reject
/// implies p_value < alpha + 1/(B+1).
inline double p_value(const BootstrapDraws& draws, double observed) {
  if (draws.values.empty()) throw InvalidParameter("p_value of empty draws");
  const auto exceed = std::count_if(draws.values.begin(), draws.values.end(),
                                    [observed](double v) { return v >= observed; });
  return static_cast<double>(1 + exceed) / static_cast<double>(draws.B() + 1);
}

/// Gamma-hat = (n (n-1)^2)^{-1} sum_i A_i A_i^T. The conditional covariance
/// of the multiplier statistic vector given the data is exactly 4 Gamma-hat,
/// which makes this an exact internal diagnostic for the bootstrap.
struct GammaHat {
  Vector diag;
  std::optional<Matrix> full;  // populated when d <= full_matrix_limit
};

inline GammaHat gamma_hat(const HalfRows& rows, Index full_matrix_limit = 256) {
  const Index n = rows.n();
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n - 1) *
                              static_cast<double>(n - 1));
  GammaHat g;
  g.diag = scale * rows.rows.cwiseProduct(rows.rows).colwise().sum().transpose();
  if (rows.d() <= full_matrix_limit) {
    g.full = Matrix(scale * (rows.rows.transpose() * rows.rows));
  }
  return g;
}

struct TestResult {
  StatisticValue statistic;
  double quantile = 0.0;
  double p_value = 0.0;
  double alpha = 0.0;
  bool reject = false;
  Index B = 0;
  std::uint64_t seed = 0;
  std::string kernel;
  Index n = 0;
  Index p = 0;
  double elapsed_ms = 0.0;
};

/// Full test: half rows (fast path for the linear kernel), statistic,
/// multiplier bootstrap, quantile and p-value. Rejects when the observed
/// statistic strictly exceeds the bootstrap quantile; ties keep the null.
inline TestResult run_test(const DataMatrix& data, const Kernel& kernel, double alpha,
                           Index B, std::uint64_t seed, int threads = 1) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("alpha must lie in (0,1)");
  if (B < 1) throw InvalidParameter("bootstrap replicate count B must be >= 1");
  if (data.n() < 2) throw InsufficientData("test needs at least 2 observations");
  const auto start = std::chrono::steady_clock::now();

  HalfRows rows = kernel.kind() == KernelKind::Linear ? half_rows_linear_fast(data)
                                                      : half_rows(kernel, data);
  TestResult result;
  result.statistic = statistic_from_rows(rows);
  BootstrapDraws draws = jmb_draws(rows, B, seed, threads);
  result.quantile = quantile(draws, 1.0 - alpha);
  result.p_value = cptest::p_value(draws, result.statistic.t_max);
  result.alpha = alpha;
  result.reject = result.statistic.t_max > result.quantile;
  result.B = B;
  result.seed = seed;
  result.kernel = kernel.name();
  result.n = data.n();
  result.p = data.p();
  result.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace cptest
