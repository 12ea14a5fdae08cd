#pragma once
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "cptest/matrix.hpp"

namespace cptest::testutil {

inline Matrix random_matrix(Index n, Index p, std::mt19937_64& engine, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(n, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) m(i, j) = normal(engine);
  }
  return m;
}

inline Vector random_vector(Index p, std::mt19937_64& engine, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(p);
  for (Index i = 0; i < p; ++i) v(i) = normal(engine);
  return v;
}

inline Matrix scalar_column(std::initializer_list<double> values) {
  Matrix m(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

}  // namespace cptest::testutil
