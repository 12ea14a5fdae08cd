#pragma once
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cptest/csv.hpp"
#include "cptest/datagen.hpp"
#include "cptest/errors.hpp"

namespace cptest {

using json = nlohmann::json;

namespace detail {

inline json parse_toml_value(std::string_view raw, std::size_t line_no) {
  raw = trim(raw);
  const std::string where = "line " + std::to_string(line_no);
  if (raw.empty()) throw ParseError("missing value at " + where);
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') {
      throw ParseError("unterminated string at " + where);
    }
    return std::string(raw.substr(1, raw.size() - 2));
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  if (raw.front() == '[') {
    if (raw.back() != ']') throw ParseError("unterminated array at " + where);
    json arr = json::array();
    std::string_view body = trim(raw.substr(1, raw.size() - 2));
    while (!body.empty()) {
      const std::size_t cut = body.find(',');
      arr.push_back(parse_toml_value(body.substr(0, cut), line_no));
      if (cut == std::string_view::npos) break;
      body.remove_prefix(cut + 1);
      body = trim(body);
    }
    return arr;
  }
  // Bare scalar: integer when it parses exactly as one, double otherwise.
  const char* begin = raw.data();
  const char* end = raw.data() + raw.size();
  if (raw.find('.') == std::string_view::npos && raw.find('e') == std::string_view::npos &&
      raw.find('E') == std::string_view::npos) {
    if (raw.front() == '-') {
      long long iv = 0;
      auto [p, ec] = std::from_chars(begin, end, iv);
      if (ec == std::errc{} && p == end) return iv;
    } else {
      unsigned long long uv = 0;
      auto [p, ec] = std::from_chars(begin, end, uv);
      if (ec == std::errc{} && p == end) return uv;
    }
  }
  double dv = 0.0;
  auto [p, ec] = std::from_chars(begin, end, dv);
  if (ec != std::errc{} || p != end) {
    throw ParseError("cannot parse value '" + std::string(raw) + "' at " + where);
  }
  return dv;
}

}  // namespace detail

/// Flat key = value TOML subset: strings, numbers, booleans and arrays, with
/// '#' comments. Matches the flat key layout the scenario files use.
inline json parse_flat_toml(std::istream& in) {
  json out = json::object();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    // strip comments, respecting quoted strings
    bool quoted = false;
    for (std::size_t i = 0; i < view.size(); ++i) {
      if (view[i] == '"') quoted = !quoted;
      if (view[i] == '#' && !quoted) {
        view = view.substr(0, i);
        break;
      }
    }
    view = detail::trim(view);
    if (view.empty()) continue;
    const std::size_t eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected key = value at line " + std::to_string(line_no));
    }
    const std::string key{detail::trim(view.substr(0, eq))};
    if (key.empty()) throw ParseError("empty key at line " + std::to_string(line_no));
    out[key] = detail::parse_toml_value(view.substr(eq + 1), line_no);
  }
  return out;
}

/// Loads a config as JSON; .toml (or anything non-.json) goes through the
/// flat TOML reader.
inline json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'");
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ParseError("config '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw ParseError("config '" + path + "' must be an object");
    return j;
  }
  return parse_flat_toml(in);
}

inline KernelKind kernel_kind_from_name(const std::string& name) {
  if (name == "linear") return KernelKind::Linear;
  if (name == "sign") return KernelKind::Sign;
  throw InvalidParameter("unknown kernel '" + name + "' (expected linear or sign)");
}

namespace detail {

inline NoiseSpec noise_from_json(const json& j) {
  const std::string name = j.value("noise", "gaussian");
  if (name == "gaussian") return NoiseSpec::gaussian();
  if (name == "student_t") return NoiseSpec::student_t(j.value("nu", 6.0));
  if (name == "contaminated_gaussian") {
    return NoiseSpec::contaminated_gaussian(j.value("eps", 0.2), j.value("nu", 2.0));
  }
  if (name == "cauchy") return NoiseSpec::cauchy();
  throw InvalidParameter("unknown noise '" + name + "'");
}

inline CovarianceSpec cov_from_json(const json& j, Index p) {
  const std::string name = j.value("cov", "identity");
  if (name == "identity") return CovarianceSpec::identity(p);
  if (name == "compound") {
    return CovarianceSpec::compound(p, j.value("load", 0.8), j.value("diag", 0.2));
  }
  if (name == "ar") return CovarianceSpec::ar(p, j.value("rho", 0.8));
  throw InvalidParameter("unknown cov '" + name + "'");
}

}  // namespace detail

/// Builds a scenario from flat config keys. theta may be given as an array
/// ("theta") or as a scalar ("theta_max"), which expands to
/// (theta_max, 0, ..., 0).
inline ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig c;
  c.id = j.value("id", std::string("scenario"));
  c.n = j.value("n", static_cast<Index>(100));
  c.p = j.value("p", static_cast<Index>(20));
  c.noise = detail::noise_from_json(j);
  c.cov = detail::cov_from_json(j, c.p);
  if (j.contains("m") && !j.at("m").is_null()) {
    c.m = j.at("m").get<Index>();
  }
  if (j.contains("theta")) {
    const auto& t = j.at("theta");
    if (!t.is_array()) throw InvalidParameter("theta must be an array");
    c.theta = Vector(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      c.theta(static_cast<Index>(i)) = t.at(i).get<double>();
    }
  } else if (j.contains("theta_max")) {
    c.theta = Vector::Zero(c.p);
    c.theta(0) = j.at("theta_max").get<double>();
  }
  c.B = j.value("B", static_cast<Index>(200));
  c.reps = j.value("reps", static_cast<Index>(500));
  c.alpha = j.value("alpha", 0.05);
  c.seed = j.value("seed", static_cast<std::uint64_t>(1));
  c.kernel = kernel_kind_from_name(j.value("kernel", std::string("linear")));
  c.boundary = j.value("boundary", static_cast<Index>(40));
  c.validate();
  return c;
}

struct PowerGrid {
  std::vector<double> theta_max;
  std::vector<Index> m;
};

/// Power studies add theta_grid / m_grid on top of the base scenario keys.
inline PowerGrid power_grid_from_json(const json& j) {
  PowerGrid grid;
  if (!j.contains("theta_grid") || !j.contains("m_grid")) {
    throw InvalidParameter("power config needs theta_grid and m_grid arrays");
  }
  for (const auto& v : j.at("theta_grid")) grid.theta_max.push_back(v.get<double>());
  for (const auto& v : j.at("m_grid")) grid.m.push_back(v.get<Index>());
  if (grid.theta_max.empty() || grid.m.empty()) {
    throw InvalidParameter("theta_grid and m_grid must be nonempty");
  }
  return grid;
}

/// Expands (base, grids) into one scenario per (m, theta) pair. theta = 0
/// points stay null scenarios anchored at the same m label.
inline std::vector<ScenarioConfig> expand_power_grid(const ScenarioConfig& base,
                                                     const PowerGrid& grid) {
  std::vector<ScenarioConfig> out;
  for (Index m : grid.m) {
    for (double theta_max : grid.theta_max) {
      ScenarioConfig c = base;
      c.id = base.id + "_m" + std::to_string(m) + "_t" + format_double(theta_max);
      if (theta_max == 0.0) {
        c.m.reset();
        c.theta = Vector();
      } else {
        c.m = m;
        c.theta = Vector::Zero(c.p);
        c.theta(0) = theta_max;
      }
      c.validate();
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace cptest
