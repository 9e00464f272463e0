#include "commands.hpp"

#include <gtest/gtest.h>

using namespace fzq;

namespace {

GlobalOptions opts() {
  GlobalOptions g;
  g.argv = {"fuzzyq", "test"};
  return g;
}

}  // namespace

TEST(CliParse, Levels) {
  EXPECT_EQ(parse_levels("5"), (std::vector<int>{5}));
  EXPECT_EQ(parse_levels("1,2,3"), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(parse_levels("1..4"), (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(parse_levels("0..12:4"), (std::vector<int>{0, 4, 8, 12}));
  EXPECT_THROW(parse_levels("4..1"), fz::Error);
  EXPECT_THROW(parse_levels("-1"), fz::Error);
}

TEST(CliParse, Weights) {
  EXPECT_EQ(parse_weight("1,0"), (fz::Weight{1, 0}));
  EXPECT_EQ(parse_weight("-2"), (fz::Weight{-2}));
  EXPECT_THROW(parse_weight("1,x"), std::exception);
  EXPECT_THROW(parse_weight(""), fz::Error);
}

TEST(CliParse, Quadrature) {
  EXPECT_EQ(parse_quad("").rule, "auto");
  auto s = parse_quad("haar-mc:samples=500,seed=9");
  EXPECT_EQ(s.rule, "haar-mc");
  EXPECT_EQ(s.samples, 500);
  EXPECT_EQ(*s.seed, 9u);
  auto j = parse_quad(R"({"rule":"gauss-s2","degree":30})");
  EXPECT_EQ(j.rule, "gauss-s2");
  EXPECT_EQ(j.degree, 30);
  EXPECT_THROW(parse_quad("simpson"), fz::Error);
  EXPECT_THROW(parse_quad("haar-mc:depth=3"), fz::Error);
}

TEST(CliClassify, TableRows) {
  auto g = opts();
  EXPECT_EQ(cmd_classify(g, "A1", "1").result["dim_orbit"], 2);
  EXPECT_EQ(cmd_classify(g, "A2", "1,2").result["dim_orbit"], 6);
  EXPECT_EQ(cmd_classify(g, "B2", "1").result["dim_orbit"], 6);
  EXPECT_THROW(cmd_classify(g, "A2", ""), fz::Error);
}

TEST(CliQuantize, SphereCasimir) {
  auto g = opts();
  auto r = cmd_quantize(g, "A1", "1", "5", "");
  EXPECT_TRUE(r.failures.empty());
  EXPECT_NEAR(r.result["levels"][0]["casimir"].get<double>(), 8.75, 1e-12);
  EXPECT_EQ(r.result["levels"][0]["hw"]["spin"], "5/2");
  auto one = cmd_quantize(g, "A1", "1", "1", "");
  EXPECT_DOUBLE_EQ(one.result["levels"][0]["X_scale"].get<double>(), 1.0);
}

TEST(CliQuantize, A2LevelThree) {
  auto g = opts();
  auto r = cmd_quantize(g, "A2", "1,0", "3", "");
  EXPECT_TRUE(r.failures.empty());
  EXPECT_EQ(r.result["levels"][0]["dim"], 10);
  EXPECT_LT(r.result["levels"][0]["commutation_residual"].get<double>(), 1e-10);
}

TEST(CliQuantize, SizeCap) {
  auto g = opts();
  EXPECT_THROW(cmd_quantize(g, "A2", "1,0", "70", ""), fz::Error);
}

TEST(CliConverge, ConstantsAndCoordinates) {
  auto g = opts();
  auto c = cmd_converge(g, "A1", "1", "1", "1", "5,10", "star", 50);
  EXPECT_TRUE(c.failures.empty());
  for (const auto& row : c.result["rows"]) EXPECT_LT(row["sup_defect"].get<double>(), 1e-10);
  auto s = cmd_converge(g, "A1", "1", "x1*x2", "x3", "5,10,20,40", "star", 100);
  EXPECT_TRUE(s.failures.empty());
  EXPECT_TRUE(s.result["monotone"].get<bool>());
  auto p = cmd_converge(g, "A1", "1", "x1", "x2", "5,10,20,40", "poisson", 100);
  EXPECT_TRUE(p.failures.empty());
  EXPECT_EQ(p.csv_header.size(), 4u);
}

TEST(CliBundle, SpinOneExample) {
  auto g = opts();
  auto r = cmd_bundle(g, "A1", "1", "-2", "0..6", false);
  EXPECT_TRUE(r.failures.empty());
  EXPECT_EQ(r.result["transition_level"], 2);
  EXPECT_EQ(r.result["fiber"]["spin"], "1");
  const auto& last = r.result["levels"][6];
  std::vector<std::string> sp;
  for (const auto& e : last["decomposition"]) sp.push_back(e["spin"]);
  EXPECT_EQ(sp, (std::vector<std::string>{"1", "2", "3", "4", "5"}));
}

TEST(CliBundle, TrivialWeightIsAlgebra) {
  auto g = opts();
  auto r = cmd_bundle(g, "A1", "1", "0", "0..5", true);
  EXPECT_TRUE(r.failures.empty());
  for (const auto& l : r.result["levels"]) {
    const int N = l["N"];
    EXPECT_EQ(l["dim"], (N + 1) * (N + 1));
  }
}

TEST(CliKernel, DegenerateAndRandom) {
  auto g = opts();
  auto d = cmd_kernel(g, "A1", "1", "3,7", 4, true, 0.0);
  EXPECT_TRUE(d.failures.empty());
  for (const auto& row : d.csv_rows) {
    const double N = std::stod(row[1]);
    EXPECT_NEAR(std::stod(row[4]), (N + 1) * (N + 1), 1e-9);
  }
  auto r = cmd_kernel(g, "A1", "1", "10", 20, false, 0.0);
  EXPECT_TRUE(r.failures.empty());
  EXPECT_LT(r.result["summary"][0]["max_modulus_residual"].get<double>(), 1e-8);
}

TEST(CliKernel, PeakingDecaysAcrossLevels) {
  auto g = opts();
  auto r = cmd_kernel(g, "A1", "1", "1,5,10,20", 10, false, 0.0);
  double prev = 2;
  for (const auto& s : r.result["summary"]) {
    const double v = s["mean_abs_K_over_dim2"];
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(CliCoarseGrain, MatchesTraceChain) {
  auto g = opts();
  auto r = cmd_coarse_grain(g, "A1", "1", "0", 6, 6);
  EXPECT_TRUE(r.failures.empty());
  EXPECT_EQ(r.result["final_level"], 0);
}

TEST(CliProvenance, IsReproducible) {
  auto g = opts();
  g.seed = 77;
  auto a = cmd_kernel(g, "A1", "1", "4", 5, false, 0.0);
  auto b = cmd_kernel(g, "A1", "1", "4", 5, false, 0.0);
  EXPECT_EQ(a.result.dump(), b.result.dump());
  auto p = provenance(g, "kernel", a.config);
  EXPECT_EQ(p.dump(), provenance(g, "kernel", b.config).dump());
  EXPECT_EQ(p["seed"], 77);
  EXPECT_EQ(p["config"]["random"], 5);
  EXPECT_TRUE(p.contains("eigen"));
}
