#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "l1metrics/gini.hpp"
#include "l1metrics/joints.hpp"

namespace l1metrics::fixtures {

/// Two tables shown side by side (the pi1 / pi2 pair).
struct TablePair {
  JointDiscrete first;
  JointDiscrete second;
};

using Fixture = std::variant<JointDiscrete, TripleTables, TablePair>;

inline JointDiscrete binary(std::vector<std::vector<double>> p) { return JointDiscrete({0, 1}, {0, 1}, std::move(p)); }
inline JointDiscrete signed_binary(std::vector<std::vector<double>> p) {
  return JointDiscrete({-1, 1}, {-1, 1}, std::move(p));
}

// Table 1: the same marginals, two couplings
inline JointDiscrete gk_a() { return binary({{0.1, 0.6}, {0.1, 0.2}}); }
inline JointDiscrete gk_b() { return binary({{0.14, 0.56}, {0.06, 0.24}}); }

// one table per category A..F
inline JointDiscrete sixdistrib(char c) {
  switch (c) {
    case 'A': return binary({{0.3, 0.0}, {0.0, 0.7}});
    case 'B': return binary({{0.1, 0.2}, {0.2, 0.5}});
    case 'C': return binary({{1.0, 0.0}, {0.0, 0.0}});
    case 'D': return binary({{0.09, 0.21}, {0.21, 0.49}});
    case 'E': return binary({{0.06, 0.14}, {0.24, 0.56}});
    case 'F': return binary({{0.3, 0.1}, {0.4, 0.2}});
  }
  throw std::invalid_argument(std::string("unknown sixdistrib table '") + c + "'");
}

// fixed marginals, entropy from minimal to maximal
inline JointDiscrete minmax(char c) {
  switch (c) {
    case 'a': return binary({{0.25, 0.25}, {0.0, 0.5}});
    case 'b': return binary({{0.125, 0.375}, {0.125, 0.375}});
    case 'c': return binary({{0.0, 0.5}, {0.25, 0.25}});
  }
  throw std::invalid_argument(std::string("unknown minmax table '") + c + "'");
}

// Lettered tables on {-1, 1}. The first of each group has rows X and columns Z,
// the second rows X and columns Y, the third rows Z and columns Y.
inline JointDiscrete pxpypz_table(char c) {
  switch (c) {
    case 'A': return signed_binary({{0.1, 0.3}, {0.6, 0.0}});
    case 'B': return signed_binary({{0.3, 0.1}, {0.0, 0.6}});
    case 'C': return signed_binary({{0.11, 0.59}, {0.19, 0.11}});
    case 'D': return signed_binary({{0.2, 0.2}, {0.5, 0.1}});
    case 'E': return signed_binary({{0.3, 0.1}, {0.0, 0.6}});
    case 'F': return signed_binary({{0.3, 0.4}, {0.0, 0.3}});
    case 'G': return signed_binary({{0.28, 0.12}, {0.42, 0.18}});
    case 'H': return signed_binary({{0.12, 0.28}, {0.18, 0.42}});
    case 'I': return signed_binary({{0.21, 0.49}, {0.09, 0.21}});
  }
  throw std::invalid_argument(std::string("unknown pxpypz table '") + c + "'");
}

inline TripleTables pxpypz(const std::string& group) {
  if (group.size() != 3) throw std::invalid_argument("pxpypz: expected a group such as ABC");
  const JointDiscrete xz = pxpypz_table(group[0]);
  const JointDiscrete xy = pxpypz_table(group[1]);
  const JointDiscrete zy = pxpypz_table(group[2]);
  return TripleTables(xy, zy.transposed(), xz);
}

inline TablePair pi1pi2() {
  const std::vector<double> s{0, 1, 2};
  return {JointDiscrete(s, s, {{0.05, 0.10, 0.05}, {0.05, 0.20, 0.10}, {0.10, 0.05, 0.30}}),
          JointDiscrete(s, s, {{0.0, 0.10, 0.10}, {0.15, 0.20, 0.0}, {0.05, 0.05, 0.35}})};
}

/// X = b with probability eps, else 0; X and Y i.i.d.
inline JointDiscrete epsilon(double eps, double b) {
  if (!(eps > 0.0 && eps < 1.0) || !(b > 0.0)) throw std::invalid_argument("epsilon: need 0 < eps < 1 and b > 0");
  return JointDiscrete({0.0, b}, {0.0, b},
                       {{(1 - eps) * (1 - eps), eps * (1 - eps)}, {eps * (1 - eps), eps * eps}});
}

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n{
      "gk_a",         "gk_b",         "sixdistrib_A", "sixdistrib_B", "sixdistrib_C", "sixdistrib_D",
      "sixdistrib_E", "sixdistrib_F", "minmax_a",     "minmax_b",     "minmax_c",     "pxpypz_ABC",
      "pxpypz_DEF",   "pxpypz_GHI",   "pi1pi2",       "epsilon(eps,b)"};
  return n;
}

/// Fixture by name; epsilon takes its parameters inline, e.g. "epsilon(0.1,5)".
inline Fixture by_name(const std::string& name) {
  if (name == "gk_a") return gk_a();
  if (name == "gk_b") return gk_b();
  if (name.size() == 12 && name.rfind("sixdistrib_", 0) == 0) return sixdistrib(name[11]);
  if (name.size() == 8 && name.rfind("minmax_", 0) == 0) return minmax(name[7]);
  if (name == "pxpypz_ABC" || name == "pxpypz_DEF" || name == "pxpypz_GHI") return pxpypz(name.substr(7));
  if (name == "pi1pi2") return pi1pi2();
  if (name.rfind("epsilon(", 0) == 0 && name.back() == ')') {
    const std::string args = name.substr(8, name.size() - 9);
    const auto comma = args.find(',');
    if (comma != std::string::npos) {
      char* end1 = nullptr;
      char* end2 = nullptr;
      const std::string a = args.substr(0, comma), b = args.substr(comma + 1);
      const double eps = std::strtod(a.c_str(), &end1);
      const double bb = std::strtod(b.c_str(), &end2);
      if (!a.empty() && !b.empty() && *end1 == '\0' && *end2 == '\0') return epsilon(eps, bb);
    }
  }
  throw std::invalid_argument("unknown fixture '" + name + "'");
}

}  // namespace l1metrics::fixtures
