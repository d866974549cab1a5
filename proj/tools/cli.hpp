#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "l1metrics/l1metrics.hpp"

namespace l1metrics::cli {

using json = io::json;

enum ExitCode : int { kOk = 0, kValidation = 1, kUsage = 2 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool looks_inline(const std::string& s) {
  const auto p = s.find_first_not_of(" \t\r\n");
  return p != std::string::npos && (s[p] == '{' || s[p] == '[');
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline json load_json(const std::string& arg) {
  if (looks_inline(arg)) return io::parse_json(arg, "argument");
  return io::parse_json(io::read_file(arg), arg);
}

// --joint / --triple / --pi1 values: fixture:NAME, inline JSON, a .csv file or a JSON file.
inline fixtures::Fixture load_table(const std::string& arg) {
  if (arg.rfind("fixture:", 0) == 0) return fixtures::by_name(arg.substr(8));
  if (!looks_inline(arg) && ends_with(arg, ".csv")) return io::joint_from_csv(io::read_file(arg), arg);
  const json j = load_json(arg);
  if (j.is_object() && j.contains("xy")) return io::triple_from_json(j);
  return io::joint_from_json(j);
}

inline JointDiscrete load_joint(const std::string& arg) {
  auto f = load_table(arg);
  if (auto* j = std::get_if<JointDiscrete>(&f)) return *j;
  throw io::InputError(arg + ": expected a single joint table");
}

inline TripleTables load_triple(const std::string& arg) {
  auto f = load_table(arg);
  if (auto* t = std::get_if<TripleTables>(&f)) return *t;
  throw io::InputError(arg + ": expected three pairwise tables {xy, yz, xz}");
}

inline UnivariateDist load_dist(const std::string& arg) { return io::dist_from_json(load_json(arg)); }

// Transport marginals additionally accept {"type":"lognormal","mu":m,"sigma":s}.
inline Marginal load_marginal(const std::string& arg) {
  const json j = load_json(arg);
  if (j.is_object() && j.value("type", "") == "lognormal") {
    const double mu = j.contains("mu") ? j.at("mu").get<double>() : 0.0;
    const double sigma = j.contains("sigma") ? j.at("sigma").get<double>() : 1.0;
    return Marginal::lognormal(mu, sigma);
  }
  return Marginal(io::dist_from_json(j));
}

inline CostFn parse_cost(const std::string& s) {
  if (s == "abs") return CostFn::abs();
  if (s.rfind("power:", 0) == 0) {
    const std::string num = s.substr(6);
    char* end = nullptr;
    const double p = std::strtod(num.c_str(), &end);
    if (!num.empty() && *end == '\0') return CostFn::power(p);
  }
  throw UsageError("--cost: expected abs or power:P, got '" + s + "'");
}

inline std::string render_scalar(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

// Human-readable form: one "key: value" line per field.
inline void write_pretty(std::ostream& out, const json& j, const std::string& indent = "") {
  if (!j.is_object()) {
    out << indent << j.dump(2) << '\n';
    return;
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    const json& v = it.value();
    if (v.is_object()) {
      out << indent << it.key() << ":\n";
      write_pretty(out, v, indent + "  ");
    } else if (v.is_array() && !v.empty() && v.front().is_array()) {
      out << indent << it.key() << ":\n";
      for (const auto& row : v) out << indent << "  " << row.dump() << '\n';
    } else {
      out << indent << it.key() << ": " << render_scalar(v) << '\n';
    }
  }
}

}  // namespace detail

/// Runs one subcommand. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Expected absolute difference, Gini and one-dimensional transport metrics", "l1metrics"};
  app.require_subcommand(1);
  app.fallthrough();

  bool pretty = false;
  app.add_flag("--pretty", pretty, "Human-readable output instead of JSON");

  std::string joint, dist, mu, nu, triple, pi1, pi2, cost = "abs", export_plan, fixture_name;
  double p = 1.0, tol = kDefaultPredicateTolerance, rho = 0.0;
  std::uint64_t seed = 0, n = 1000000;
  std::size_t resolution = 512;

  std::function<json()> action;
  auto need = [](const std::string& v, const char* flag) {
    if (v.empty()) throw UsageError(std::string("missing required option ") + flag);
  };
  auto pair_from_flags = [&]() -> std::pair<UnivariateDist, UnivariateDist> {
    need(mu, "--mu");
    need(nu, "--nu");
    return {detail::load_dist(mu), detail::load_dist(nu)};
  };

  auto* eabs_cmd = app.add_subcommand("eabs", "E|X-Y| of a joint table, or of independent --mu and --nu");
  eabs_cmd->add_option("--joint", joint, "Joint table: FILE (.json/.csv), inline JSON or fixture:NAME");
  eabs_cmd->add_option("--mu", mu, "Law of X (JSON literal or file)");
  eabs_cmd->add_option("--nu", nu, "Law of Y (JSON literal or file)");
  eabs_cmd->callback([&] {
    action = [&] {
      if (!joint.empty()) return json{{"eabs", eabs_joint(detail::load_joint(joint))}};
      const auto [x, y] = pair_from_flags();
      return json{{"eabs", eabs_product(x, y)}};
    };
  });

  auto* dnorm_cmd = app.add_subcommand("dnorm", "E|X-Y| / (E|X| + E|Y|)");
  dnorm_cmd->add_option("--joint", joint, "Joint table");
  dnorm_cmd->add_option("--mu", mu, "Law of X (independent pair)");
  dnorm_cmd->add_option("--nu", nu, "Law of Y (independent pair)");
  dnorm_cmd->callback([&] {
    action = [&] {
      double e = 0.0, ex = 0.0, ey = 0.0;
      if (!joint.empty()) {
        const auto j = detail::load_joint(joint);
        const auto [x, y] = marginals(j);
        e = eabs_joint(j);
        ex = mean_abs(x);
        ey = mean_abs(y);
      } else {
        const auto [x, y] = pair_from_flags();
        e = eabs_product(x, y);
        ex = mean_abs(x);
        ey = mean_abs(y);
      }
      return json{{"dnorm", d_norm(e, ex, ey)}, {"eabs", e}, {"ex", ex}, {"ey", ey}};
    };
  });

  auto* gmd_cmd = app.add_subcommand("gmd", "Gini mean difference of a law");
  gmd_cmd->add_option("--dist", dist, "Law (JSON literal or file)")->required();
  gmd_cmd->callback([&] { action = [&] { return json{{"gmd", gmd(detail::load_dist(dist))}}; }; });

  auto* gini_cmd = app.add_subcommand("gini", "Gini index of a law");
  gini_cmd->add_option("--dist", dist, "Law (JSON literal or file)")->required();
  gini_cmd->callback([&] {
    action = [&] {
      const auto r = gini_index(detail::load_dist(dist));
      json j{{"gini", r.value}};
      if (r.absolute_denominator) j["absolute_denominator"] = true;
      return j;
    };
  });

  auto* gk_cmd = app.add_subcommand("gk", "Gini-Kantorovich distance between two laws");
  gk_cmd->add_option("--mu", mu, "First law");
  gk_cmd->add_option("--nu", nu, "Second law");
  gk_cmd->add_option("--joint", joint, "Use the marginals of this joint table");
  gk_cmd->callback([&] {
    action = [&] {
      MetricResult r{};
      if (!joint.empty()) {
        const auto [x, y] = marginals(detail::load_joint(joint));
        r = gk(x, y);
      } else {
        const auto [x, y] = pair_from_flags();
        r = gk(x, y);
      }
      return json{{"gk", r.value}, {"method", to_string(r.method)}};
    };
  });

  auto* w_cmd = app.add_subcommand("wasserstein", "Wasserstein-p distance between two laws");
  w_cmd->add_option("--mu", mu, "First law")->required();
  w_cmd->add_option("--nu", nu, "Second law")->required();
  w_cmd->add_option("--p", p, "Order p >= 1")->capture_default_str();
  w_cmd->callback([&] {
    action = [&] {
      const auto [x, y] = pair_from_flags();
      const auto r = wasserstein_p(x, y, p);
      return json{{"wasserstein", r.value}, {"p", p}, {"method", to_string(r.method)}};
    };
  });

  auto* t_cmd = app.add_subcommand("transport", "Optimal transport cost between two laws (quantile coupling)");
  t_cmd->add_option("--mu", mu, "Source law")->required();
  t_cmd->add_option("--nu", nu, "Target law; {\"type\":\"lognormal\",...} is also accepted")->required();
  t_cmd->add_option("--cost", cost, "abs or power:P")->capture_default_str();
  t_cmd->add_option("--export-plan", export_plan, "Write the plan's quantile polyline as JSON to FILE");
  t_cmd->add_option("--resolution", resolution, "Polyline points")->capture_default_str()->check(CLI::PositiveNumber);
  t_cmd->callback([&] {
    action = [&] {
      const CostFn c = detail::parse_cost(cost);
      const Marginal a = detail::load_marginal(mu), b = detail::load_marginal(nu);
      const TransportPlan plan = optimal_plan(a, b);
      json j{{"cost", plan_cost(plan, c)}, {"cost_fn", c.describe()}};
      if (!export_plan.empty()) {
        std::ofstream f(export_plan);
        if (!f) throw io::InputError("cannot write '" + export_plan + "'");
        f << json{{"plan", "quantile"}, {"points", io::to_json(quantile_polyline(std::get<QuantilePlan>(plan), resolution))}}
                 .dump()
          << '\n';
        j["exported"] = export_plan;
      }
      return j;
    };
  });

  auto* tri_cmd = app.add_subcommand("check-triangle", "D_norm triangle inequality over three pairwise tables");
  tri_cmd->add_option("--triple", triple, "Tables {xy, yz, xz}: FILE, inline JSON or fixture:pxpypz_ABC")->required();
  tri_cmd->callback([&] { action = [&] { return io::to_json(check_triangle_dnorm(detail::load_triple(triple))); }; });

  auto* cons_cmd = app.add_subcommand("check-consistency", "Covariance-matrix check of three pairwise tables");
  cons_cmd->add_option("--triple", triple, "Tables {xy, yz, xz}")->required();
  cons_cmd->callback([&] { action = [&] { return io::to_json(consistency_rule(detail::load_triple(triple))); }; });

  auto* cls_cmd = app.add_subcommand("classify", "Category A-F of a joint table");
  cls_cmd->add_option("--joint", joint, "Joint table")->required();
  cls_cmd->add_option("--tol", tol, "Predicate tolerance")->capture_default_str();
  cls_cmd->callback([&] {
    action = [&] {
      const auto j = detail::load_joint(joint);
      const auto pr = category_predicates(j, tol);
      return json{{"category", to_string(classify(j, tol))},
                  {"independent", pr.independent},
                  {"almost_surely_equal", pr.almost_surely_equal},
                  {"equal_in_distribution", pr.equal_in_distribution}};
    };
  });

  auto* ent_cmd = app.add_subcommand("entropy", "Entropy and mutual information in nats");
  ent_cmd->add_option("--joint", joint, "Joint table");
  ent_cmd->add_option("--dist", dist, "Atomic law");
  ent_cmd->callback([&] {
    action = [&] {
      if (!dist.empty()) return json{{"entropy", entropy(to_discrete(detail::load_dist(dist)))}};
      need(joint, "--joint");
      const auto j = detail::load_joint(joint);
      return json{{"entropy", entropy(j)},
                  {"h_x", entropy(Discrete(j.x_support(), row_sums(j)))},
                  {"h_y", entropy(Discrete(j.y_support(), col_sums(j)))},
                  {"mutual_information", mutual_information(j)}};
    };
  });

  auto* eta_cmd = app.add_subcommand("eta", "eta_p distance between two joint tables");
  eta_cmd->add_option("--pi1", pi1, "First table, or fixture:pi1pi2 for the pair");
  eta_cmd->add_option("--pi2", pi2, "Second table");
  eta_cmd->add_option("--p", p, "Order p >= 1")->capture_default_str();
  eta_cmd->callback([&] {
    action = [&] {
      need(pi1, "--pi1");
      auto first = detail::load_table(pi1);
      std::optional<EtaPInput> in;
      if (auto* pair = std::get_if<fixtures::TablePair>(&first)) {
        in = EtaPInput{pair->first, pair->second, p};
      } else {
        need(pi2, "--pi2");
        in = EtaPInput{detail::load_joint(pi1), detail::load_joint(pi2), p};
      }
      return json{{"eta", eta_p(*in)}, {"p", p}};
    };
  });

  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimate of E|X-Y| for independent laws");
  mc_cmd->add_option("--mu", mu, "Law of X")->required();
  mc_cmd->add_option("--nu", nu, "Law of Y")->required();
  mc_cmd->add_option("--seed", seed, "Generator seed")->required();
  mc_cmd->add_option("--n", n, "Sample size (>= 2)")->capture_default_str();
  auto* rho_opt = mc_cmd->add_option("--rho", rho, "Correlation; Gaussian --mu and --nu only");
  mc_cmd->callback([&] {
    action = [&] {
      const auto [x, y] = pair_from_flags();
      if (rho_opt->count() > 0) {
        const auto* gx = x.get_if<Gaussian>();
        const auto* gy = y.get_if<Gaussian>();
        if (!gx || !gy) throw std::invalid_argument("mc: --rho requires Gaussian --mu and --nu");
        return io::to_json(mc_eabs_correlated_gaussian(gx->mu, gx->sigma, gy->mu, gy->sigma, rho, n, seed));
      }
      return io::to_json(mc_eabs({x, y}, n, seed));
    };
  });

  auto* fx_cmd = app.add_subcommand("fixtures", "List the built-in tables, or print one");
  fx_cmd->add_option("name", fixture_name, "Fixture name, e.g. minmax_b or epsilon(0.1,5)");
  fx_cmd->callback([&] {
    action = [&] {
      if (fixture_name.empty()) return json{{"fixtures", fixtures::names()}};
      return std::visit(overloaded{[](const JointDiscrete& j) { return io::to_json(j); },
                                   [](const TripleTables& t) { return io::to_json(t); },
                                   [](const fixtures::TablePair& tp) {
                                     return json{{"pi1", io::to_json(tp.first)}, {"pi2", io::to_json(tp.second)}};
                                   }},
                        fixtures::by_name(fixture_name));
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const json result = action();
    if (pretty)
      detail::write_pretty(out, result);
    else
      out << result.dump() << '\n';
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
}

}  // namespace l1metrics::cli
