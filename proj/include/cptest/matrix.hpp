#pragma once
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/Dense>

#include <utility>

#include "cptest/errors.hpp"

namespace cptest {

using Index = Eigen::Index;
// Observations live in rows, so row-major keeps each observation contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using ConstRowRef = Eigen::Ref<const RowVector>;
using RowRef = Eigen::Ref<RowVector>;

/// n x p observation matrix; row i is the i-th observation in time order.
struct DataMatrix {
  Matrix values;

  Index n() const { return values.rows(); }
  Index p() const { return values.cols(); }

  /// Ingestion points (CSV loader, data generator) construct through here so
  /// downstream code can assume every entry is finite.
  static DataMatrix checked(Matrix m) {
    if (m.rows() == 0 || m.cols() == 0) {
      throw InsufficientData("data matrix is empty");
    }
    if (!m.allFinite()) {
      throw InvalidParameter("data matrix contains NaN or Inf entries");
    }
    return DataMatrix{std::move(m)};
  }
};

}  // namespace cptest
