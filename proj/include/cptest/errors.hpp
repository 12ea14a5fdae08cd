#pragma once
// SPDX-License-Identifier: Apache-2.0

#include <stdexcept>

namespace cptest {

/// Invalid argument values: alpha outside (0,1), B = 0, bad boundary, ...
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operands with incompatible shapes (vector length, matrix size).
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fewer observations than the operation needs.
class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file (CSV or config); message carries line/column
/// coordinates where applicable.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cptest
