#pragma once
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <utility>

#include "cptest/kernels.hpp"
#include "cptest/matrix.hpp"

namespace cptest {

/// Half-jackknife row sums A_i = sum_{j > i} h(X_i, X_j). The last row is
/// identically zero. This is the shared substrate of the test statistic, the
/// multiplier bootstrap and the Gamma-hat diagnostic, so it is materialized
/// (n x d) rather than streamed.
struct HalfRows {
  Matrix rows;

  Index n() const { return rows.rows(); }
  Index d() const { return rows.cols(); }
};

/// Generic path, O(n^2) kernel evaluations.
inline HalfRows half_rows(const Kernel& kernel, const DataMatrix& data) {
  const Index n = data.n();
  const Index p = data.p();
  if (n < 2) throw InsufficientData("half_rows needs at least 2 observations");
  const Index d = kernel.output_dim(p);
  const Matrix& x = data.values;
  Matrix acc = Matrix::Zero(n, d);
  switch (kernel.kind()) {
    case KernelKind::Linear:
      for (Index i = 0; i + 1 < n; ++i) {
        auto ai = acc.row(i);
        for (Index j = i + 1; j < n; ++j) ai += x.row(i) - x.row(j);
      }
      break;
    case KernelKind::Sign:
      for (Index i = 0; i + 1 < n; ++i) {
        auto ai = acc.row(i);
        for (Index j = i + 1; j < n; ++j) {
          for (Index k = 0; k < p; ++k) ai(k) += sign_of(x(i, k) - x(j, k));
        }
      }
      break;
    case KernelKind::Custom: {
      RowVector buf(d);
      for (Index i = 0; i + 1 < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
          kernel.apply_into(x.row(i), x.row(j), buf);
          acc.row(i) += buf;
        }
      }
      break;
    }
  }
  return HalfRows{std::move(acc)};
}

/// Linear-kernel fast path: A_i = (n - i) X_i - sum_{j > i} X_j with a
/// right-to-left running suffix sum. One pass, O(np), same output as
/// half_rows(Kernel::linear(), data).
inline HalfRows half_rows_linear_fast(const DataMatrix& data) {
  const Index n = data.n();
  const Index p = data.p();
  if (n < 2) throw InsufficientData("half_rows needs at least 2 observations");
  Matrix acc(n, p);
  RowVector suffix = RowVector::Zero(p);
  for (Index i = n - 1; i >= 0; --i) {
    acc.row(i) = static_cast<double>(n - 1 - i) * data.values.row(i) - suffix;
    suffix += data.values.row(i);
  }
  return HalfRows{std::move(acc)};
}

/// sqrt(n) * C(n,2)^{-1}: the scale shared by the statistic and its
/// bootstrap draws.
inline double u_stat_scale(Index n) {
  const double nn = static_cast<double>(n);
  return std::sqrt(nn) * 2.0 / (nn * (nn - 1.0));
}

struct StatisticValue {
  Vector t_vector;      // T_n
  double t_max = 0.0;   // |T_n|_inf
  Index n = 0;
  Index d = 0;
};

inline StatisticValue statistic_from_rows(const HalfRows& rows) {
  StatisticValue s;
  s.n = rows.n();
  s.d = rows.d();
  s.t_vector = u_stat_scale(s.n) * rows.rows.colwise().sum().transpose();
  s.t_max = s.t_vector.cwiseAbs().maxCoeff();
  return s;
}

/// l_inf gap between the brute-force pairwise linear sum
/// sum_{i<j} (X_i - X_j) and its weighted one-pass form
/// sum_i (n - 2i + 1) X_i. A test-only diagnostic for the fast path's
/// weight structure; should sit at floating-point roundoff.
inline double cross_weight_identity_check(const DataMatrix& data) {
  const Index n = data.n();
  const Index p = data.p();
  if (n < 2) throw InsufficientData("needs at least 2 observations");
  const Matrix& x = data.values;
  RowVector pairwise = RowVector::Zero(p);
  for (Index i = 0; i + 1 < n; ++i) {
    for (Index j = i + 1; j < n; ++j) pairwise += x.row(i) - x.row(j);
  }
  RowVector weighted = RowVector::Zero(p);
  for (Index i = 0; i < n; ++i) {
    weighted += static_cast<double>(n - 2 * i - 1) * x.row(i);
  }
  return (pairwise - weighted).cwiseAbs().maxCoeff();
}

}  // namespace cptest
