#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using l1metrics::io::json;

namespace {
struct Result {
  int code;
  std::string out;
  std::string err;
  json value() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = l1metrics::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("l1metrics_" + name)).string();
}

const std::string kGauss = R"({"type":"gaussian","mu":0,"sigma":1})";
}  // namespace

TEST(Cli, EabsOfFixtureTable) {
  const auto r = run({"eabs", "--joint", "fixture:gk_a"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.value()["eabs"].get<double>(), 0.7, 1e-15);
}

TEST(Cli, InlineAndFileInputsAgree) {
  const std::string inline_table = R"({"x":[0,1],"y":[0,1],"p":[[0.14,0.56],[0.06,0.24]]})";
  const auto path = temp_path("table.json");
  std::ofstream(path) << inline_table;
  const auto csv = temp_path("table.csv");
  std::ofstream(csv) << "x,0,1\n0,0.14,0.56\n1,0.06,0.24\n";
  const auto a = run({"eabs", "--joint", inline_table}), b = run({"eabs", "--joint", path}), c = run({"eabs", "--joint", csv});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  EXPECT_NEAR(a.value()["eabs"].get<double>(), 0.62, 1e-15);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"gini"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"eabs"}).code, 2);
  EXPECT_EQ(run({"transport", "--mu", kGauss, "--nu", kGauss, "--cost", "cube"}).code, 2);
  const auto bad = run({"gini", "--dist", R"({"type":"dirac","c":0})"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("degenerate-at-zero"), std::string::npos);
  EXPECT_EQ(run({"eabs", "--joint", "/nonexistent/table.json"}).code, 1);
  EXPECT_EQ(run({"eabs", "--joint", R"({"x":[0],"y":[0],"p":[[0.5]]})"}).code, 1);
}

TEST(Cli, TriangleAndConsistency) {
  const auto t = run({"check-triangle", "--triple", "fixture:pxpypz_ABC"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_FALSE(t.value()["holds"].get<bool>());
  EXPECT_NEAR(t.value()["combination"].get<double>(), -0.02, 1e-14);
  const auto c = run({"check-consistency", "--triple", "fixture:pxpypz_DEF"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_FALSE(c.value()["consistent"].get<bool>());
  EXPECT_EQ(run({"check-triangle", "--triple", "fixture:gk_a"}).code, 1);
}

TEST(Cli, GiniClassifyEntropy) {
  const auto g = run({"gini", "--dist", R"({"type":"discrete","points":[0,5],"weights":[0.9,0.1]})"});
  EXPECT_EQ(g.value()["gini"].get<double>(), 0.9);
  EXPECT_EQ(run({"classify", "--joint", "fixture:sixdistrib_B"}).value()["category"], "B");
  EXPECT_NEAR(run({"entropy", "--joint", "fixture:minmax_b"}).value()["entropy"].get<double>(), 1.25548, 5e-6);
  EXPECT_NEAR(run({"eta", "--pi1", "fixture:pi1pi2", "--p", "2"}).value()["eta"].get<double>(), 0.0, 1e-12);
}

TEST(Cli, MetricsAndTransport) {
  const std::string u = R"({"type":"uniform","a":0,"b":2})";
  const auto gk = run({"gk", "--mu", kGauss, "--nu", u});
  ASSERT_EQ(gk.code, 0) << gk.err;
  EXPECT_EQ(gk.value()["method"], "cdf_integral");
  const auto w = run({"wasserstein", "--mu", kGauss, "--nu", R"({"type":"gaussian","mu":1,"sigma":2})", "--p", "2"});
  EXPECT_NEAR(w.value()["wasserstein"].get<double>(), std::sqrt(2.0), 1e-10);

  const auto path = temp_path("plan.json");
  const auto t = run({"transport", "--mu", kGauss, "--nu", R"({"type":"lognormal"})", "--export-plan", path, "--resolution", "16"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_NEAR(t.value()["cost"].get<double>(), std::exp(0.5), 1e-9);
  std::ifstream f(path);
  const json plan = json::parse(f);
  ASSERT_EQ(plan["points"].size(), 16u);
  EXPECT_NEAR(plan["points"][0]["y"].get<double>(), std::exp(plan["points"][0]["x"].get<double>()), 1e-15);
  EXPECT_EQ(run({"transport", "--mu", kGauss, "--nu", u, "--cost", "power:2"}).value()["cost_fn"], "power:2");
}

TEST(Cli, MonteCarloIsReproducible) {
  const std::vector<std::string> args{"mc", "--mu", kGauss, "--nu", R"({"type":"uniform","a":-1,"b":1})", "--seed", "99", "--n", "100000"};
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.value()["seed"], 99);
  EXPECT_EQ(run({"mc", "--mu", kGauss, "--nu", kGauss}).code, 2);
  EXPECT_EQ(run({"mc", "--mu", kGauss, "--nu", R"({"type":"dirac","c":0})", "--seed", "1", "--rho", "0.5"}).code, 1);
}

TEST(Cli, PrettyOutputAndFixtures) {
  const auto p = run({"--pretty", "eabs", "--joint", "fixture:gk_b"});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(p.out.rfind("eabs: ", 0), 0u) << p.out;
  const auto list = run({"fixtures"});
  EXPECT_NE(list.out.find("pxpypz_GHI"), std::string::npos);
  const auto eps = run({"fixtures", "epsilon(0.1,5)"});
  ASSERT_EQ(eps.code, 0) << eps.err;
  EXPECT_TRUE(eps.value().contains("p"));
}
