#pragma once
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cmath>
#include <cstdint>
#include <utility>

#include "cptest/bootstrap.hpp"
#include "cptest/matrix.hpp"
#include "cptest/parallel.hpp"
#include "cptest/rng.hpp"

namespace cptest {

inline void validate_cusum_boundary(Index n, Index boundary) {
  if (n < 2) throw InsufficientData("cusum needs at least 2 observations");
  if (boundary < 1 || 2 * boundary > n) {
    throw InvalidParameter("cusum boundary must satisfy 1 <= boundary <= n/2");
  }
}

/// Z_n(s) for s in the scan range [boundary, n - boundary]; row s - boundary
/// holds Z_n(s) = sqrt(s(n-s)/n) (mean of first s rows - mean of rest).
struct CusumSequence {
  Matrix z;
  Index boundary = 1;
  Index n = 0;

  Index s_begin() const { return boundary; }
  Index s_end() const { return n - boundary; }  // inclusive
};

/// Prefix-sum evaluation, O(np) for the whole sequence.
inline CusumSequence cusum_sequence(const DataMatrix& data, Index boundary) {
  validate_cusum_boundary(data.n(), boundary);
  const Index n = data.n();
  const Index p = data.p();
  const Index s_lo = boundary;
  const Index s_hi = n - boundary;
  const double nn = static_cast<double>(n);
  Matrix z(s_hi - s_lo + 1, p);
  RowVector total = data.values.colwise().sum();
  RowVector prefix = RowVector::Zero(p);
  for (Index s = 1; s <= s_hi; ++s) {
    prefix += data.values.row(s - 1);
    if (s < s_lo) continue;
    const double sl = static_cast<double>(s);
    const double sr = static_cast<double>(n - s);
    z.row(s - s_lo) = std::sqrt(sl * sr / nn) * (prefix / sl - (total - prefix) / sr);
  }
  return CusumSequence{std::move(z), boundary, n};
}

/// S-bar = max over the scan range of |Z_n(s)|_inf.
inline double cusum_max_statistic(const CusumSequence& seq) {
  return seq.z.cwiseAbs().maxCoeff();
}

/// Multiplier version for one shared multiplier vector e:
///   Z#(s) = sqrt((n-s)/(ns)) sum_{i<=s} e_i (X_i - leftmean_s)
///         - sqrt(s/(n(n-s))) sum_{i>s}  e_i (X_i - rightmean_s)
/// evaluated over the scan range; returns max_s |Z#(s)|_inf. Running prefix
/// sums keep one replicate at O(np).
inline double cusum_bootstrap_statistic(const DataMatrix& data, Index boundary, const Vector& e) {
  validate_cusum_boundary(data.n(), boundary);
  const Index n = data.n();
  const Index p = data.p();
  if (e.size() != n) throw DimensionMismatch("multiplier vector length must equal n");
  const Index s_lo = boundary;
  const Index s_hi = n - boundary;
  const double nn = static_cast<double>(n);
  const Matrix& x = data.values;

  RowVector total_x = x.colwise().sum();
  RowVector total_ex = RowVector::Zero(p);
  for (Index i = 0; i < n; ++i) total_ex += e(i) * x.row(i);
  const double total_e = e.sum();

  RowVector prefix_x = RowVector::Zero(p);
  RowVector prefix_ex = RowVector::Zero(p);
  double prefix_e = 0.0;
  RowVector buf(p);
  double best = 0.0;
  for (Index s = 1; s <= s_hi; ++s) {
    prefix_x += x.row(s - 1);
    prefix_ex += e(s - 1) * x.row(s - 1);
    prefix_e += e(s - 1);
    if (s < s_lo) continue;
    const double sl = static_cast<double>(s);
    const double sr = static_cast<double>(n - s);
    buf = std::sqrt(sr / (nn * sl)) * (prefix_ex - (prefix_e / sl) * prefix_x) -
          std::sqrt(sl / (nn * sr)) *
              ((total_ex - prefix_ex) - ((total_e - prefix_e) / sr) * (total_x - prefix_x));
    best = std::max(best, buf.cwiseAbs().maxCoeff());
  }
  return best;
}

inline BootstrapDraws cusum_bootstrap_draws(const DataMatrix& data, Index boundary, Index B,
                                            std::uint64_t seed, int threads = 1) {
  validate_cusum_boundary(data.n(), boundary);
  if (B < 1) throw InvalidParameter("bootstrap replicate count B must be >= 1");
  const Index n = data.n();
  BootstrapDraws draws;
  draws.seed = seed;
  draws.values.resize(static_cast<std::size_t>(B));
  parallel_for(B, threads, [&](std::int64_t b) {
    auto engine = make_engine(derive_seed(seed, static_cast<std::uint64_t>(b), stream::kCusum));
    std::normal_distribution<double> normal;
    Vector e(n);
    for (Index i = 0; i < n; ++i) e(i) = normal(engine);
    draws.values[static_cast<std::size_t>(b)] = cusum_bootstrap_statistic(data, boundary, e);
  });
  return draws;
}

struct CusumResult {
  double s_max_statistic = 0.0;
  Index boundary = 1;
  double quantile = 0.0;
  double p_value = 0.0;
  double alpha = 0.0;
  bool reject = false;
  Index B = 0;
  std::uint64_t seed = 0;
  Index n = 0;
  Index p = 0;
  double elapsed_ms = 0.0;
};

inline CusumResult run_cusum_test(const DataMatrix& data, Index boundary, double alpha, Index B,
                                  std::uint64_t seed, int threads = 1) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("alpha must lie in (0,1)");
  if (B < 1) throw InvalidParameter("bootstrap replicate count B must be >= 1");
  validate_cusum_boundary(data.n(), boundary);
  const auto start = std::chrono::steady_clock::now();

  CusumResult result;
  result.s_max_statistic = cusum_max_statistic(cusum_sequence(data, boundary));
  BootstrapDraws draws = cusum_bootstrap_draws(data, boundary, B, seed, threads);
  result.quantile = quantile(draws, 1.0 - alpha);
  result.p_value = cptest::p_value(draws, result.s_max_statistic);
  result.boundary = boundary;
  result.alpha = alpha;
  result.reject = result.s_max_statistic > result.quantile;
  result.B = B;
  result.seed = seed;
  result.n = data.n();
  result.p = data.p();
  result.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace cptest
