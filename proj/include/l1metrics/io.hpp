#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "l1metrics/distributions.hpp"
#include "l1metrics/gini.hpp"
#include "l1metrics/joints.hpp"
#include "l1metrics/oracle.hpp"
#include "l1metrics/simple_metrics.hpp"
#include "l1metrics/transport.hpp"

namespace l1metrics::io {

using json = nlohmann::json;

/// Malformed input text: bad JSON or CSV syntax, missing fields, wrong types.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Parses JSON text; syntax errors report line and column.
inline json parse_json(const std::string& text, const std::string& origin = "input") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    throw InputError(origin + ": JSON syntax error at line " + std::to_string(line) + ", column " +
                     std::to_string(col));
  }
}

namespace detail {
inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field \"" + key + "\"");
  return *it;
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

inline std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}
}  // namespace detail

inline UnivariateDist dist_from_json(const json& j, const std::string& where = "dist") {
  const json& type = detail::field(j, "type", where);
  if (!type.is_string()) throw InputError(where + ".type: expected a string");
  const std::string t = type.get<std::string>();
  if (t == "gaussian")
    return Gaussian{detail::number(detail::field(j, "mu", where), where + ".mu"),
                    detail::number(detail::field(j, "sigma", where), where + ".sigma")};
  if (t == "uniform")
    return Uniform{detail::number(detail::field(j, "a", where), where + ".a"),
                   detail::number(detail::field(j, "b", where), where + ".b")};
  if (t == "dirac") return Dirac{detail::number(detail::field(j, "c", where), where + ".c")};
  if (t == "discrete")
    return Discrete(detail::numbers(detail::field(j, "points", where), where + ".points"),
                    detail::numbers(detail::field(j, "weights", where), where + ".weights"));
  throw InputError(where + ".type: unknown family \"" + t + "\"");
}

inline json to_json(const UnivariateDist& d) {
  return d.visit(overloaded{
      [](const Discrete& dd) { return json{{"type", "discrete"}, {"points", dd.points()}, {"weights", dd.weights()}}; },
      [](const Gaussian& g) { return json{{"type", "gaussian"}, {"mu", g.mu}, {"sigma", g.sigma}}; },
      [](const Uniform& u) { return json{{"type", "uniform"}, {"a", u.a}, {"b", u.b}}; },
      [](const Dirac& dr) { return json{{"type", "dirac"}, {"c", dr.c}}; }});
}

inline JointDiscrete joint_from_json(const json& j, const std::string& where = "joint") {
  auto xs = detail::numbers(detail::field(j, "x", where), where + ".x");
  auto ys = detail::numbers(detail::field(j, "y", where), where + ".y");
  const json& p = detail::field(j, "p", where);
  if (!p.is_array()) throw InputError(where + ".p: expected an array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < p.size(); ++i) rows.push_back(detail::numbers(p[i], where + ".p[" + std::to_string(i) + "]"));
  return JointDiscrete(std::move(xs), std::move(ys), std::move(rows));
}

inline json to_json(const JointDiscrete& j) {
  return json{{"x", j.x_support()}, {"y", j.y_support()}, {"p", j.matrix()}};
}

inline TripleTables triple_from_json(const json& j, const std::string& where = "triple") {
  return TripleTables(joint_from_json(detail::field(j, "xy", where), where + ".xy"),
                      joint_from_json(detail::field(j, "yz", where), where + ".yz"),
                      joint_from_json(detail::field(j, "xz", where), where + ".xz"));
}

inline json to_json(const TripleTables& t) { return json{{"xy", to_json(t.xy)}, {"yz", to_json(t.yz)}, {"xz", to_json(t.xz)}}; }

/// CSV table: the header row holds the y values after one leading label cell,
/// every further row holds an x value followed by its probabilities.
inline JointDiscrete joint_from_csv(const std::string& text, const std::string& origin = "csv") {
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  auto parse_cell = [&](const std::string& cell, std::size_t line, std::size_t fieldno) {
    const std::string s = trim(cell);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size())
      throw InputError(origin + ": line " + std::to_string(line) + ", field " + std::to_string(fieldno) +
                       ": not a number '" + s + "'");
    return v;
  };
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  std::vector<double> ys, xs;
  std::vector<std::vector<double>> rows;
  bool header = true;
  while (std::getline(in, raw)) {
    ++line;
    if (trim(raw).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(raw);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!raw.empty() && raw.back() == ',') cells.emplace_back();
    if (header) {
      if (cells.size() < 2) throw InputError(origin + ": line " + std::to_string(line) + ": header needs at least one y value");
      for (std::size_t k = 1; k < cells.size(); ++k) ys.push_back(parse_cell(cells[k], line, k + 1));
      header = false;
      continue;
    }
    if (cells.size() != ys.size() + 1)
      throw InputError(origin + ": line " + std::to_string(line) + ": expected " + std::to_string(ys.size() + 1) +
                       " fields, found " + std::to_string(cells.size()));
    xs.push_back(parse_cell(cells[0], line, 1));
    std::vector<double> row;
    for (std::size_t k = 1; k < cells.size(); ++k) row.push_back(parse_cell(cells[k], line, k + 1));
    rows.push_back(std::move(row));
  }
  if (header) throw InputError(origin + ": empty table");
  if (rows.empty()) throw InputError(origin + ": no data rows");
  return JointDiscrete(std::move(xs), std::move(ys), std::move(rows));
}

inline json to_json(const TriangleReport& r) {
  return json{{"lhs", r.lhs}, {"rhs", r.rhs}, {"slack", r.slack}, {"combination", r.combination}, {"holds", r.holds}};
}

inline json to_json(const ConsistencyReport& r) {
  json m = json::array();
  for (const auto& row : r.cov_matrix) m.push_back(row);
  return json{{"cov_matrix", m}, {"eigenvalues", r.eigenvalues}, {"consistent", r.consistent}};
}

inline json to_json(const MCEstimate& e) {
  return json{{"mean", e.mean}, {"std_error", e.std_error}, {"n", e.n}, {"seed", e.seed}};
}

inline json to_json(const MetricResult& r) { return json{{"value", r.value}, {"method", to_string(r.method)}}; }

inline json to_json(const std::vector<PolylinePoint>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back(json{{"t", p.t}, {"x", p.x}, {"y", p.y}});
  return arr;
}

}  // namespace l1metrics::io
