#pragma once
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cptest/errors.hpp"
#include "cptest/matrix.hpp"

namespace cptest {

/// Rows are observations; transpose covers column-major files.
struct CsvSchema {
  bool has_header = false;
  char delimiter = ',';
  bool transpose = false;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline double parse_cell(std::string_view cell, std::size_t line, std::size_t column) {
  const std::string where =
      "line " + std::to_string(line) + ", column " + std::to_string(column);
  cell = trim(cell);
  if (cell.empty()) throw ParseError("empty cell at " + where);
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("cell '" + std::string(cell) + "' at " + where + " is not a number");
  }
  if (!std::isfinite(value)) {
    throw ParseError("non-finite value '" + std::string(cell) + "' at " + where);
  }
  return value;
}

}  // namespace detail

inline DataMatrix load_csv(const std::string& path, const CsvSchema& schema = {}) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");

  std::vector<std::vector<double>> table;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = schema.has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<double> row;
    std::string_view rest(line);
    std::size_t column = 1;
    for (;;) {
      const std::size_t cut = rest.find(schema.delimiter);
      const std::string_view cell = rest.substr(0, cut);
      row.push_back(detail::parse_cell(cell, line_no, column));
      if (cut == std::string_view::npos) break;
      rest.remove_prefix(cut + 1);
      ++column;
    }
    if (!table.empty() && row.size() != table.front().size()) {
      throw ParseError("line " + std::to_string(line_no) + " has " +
                       std::to_string(row.size()) + " fields, expected " +
                       std::to_string(table.front().size()));
    }
    table.push_back(std::move(row));
  }
  if (table.empty()) throw ParseError("'" + path + "' contains no data rows");

  Matrix values(static_cast<Index>(table.size()), static_cast<Index>(table.front().size()));
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      values(i, j) = table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  if (schema.transpose) values = values.transpose().eval();
  return DataMatrix::checked(std::move(values));
}

/// 17 significant digits, so save/load round-trips are bitwise exact.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void save_csv(const DataMatrix& data, const std::string& path, char delimiter = ',') {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  for (Index i = 0; i < data.n(); ++i) {
    for (Index j = 0; j < data.p(); ++j) {
      if (j > 0) out << delimiter;
      out << format_double(data.values(i, j));
    }
    out << '\n';
  }
}

}  // namespace cptest
