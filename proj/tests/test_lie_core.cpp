#include "fuzzy/lie_core.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace fz;

namespace {

std::vector<DynkinDiagram> rank_le_4() {
  std::vector<DynkinDiagram> out;
  for (int r = 1; r <= 4; ++r) out.push_back(DynkinDiagram::series_diagram('A', r));
  for (int r = 2; r <= 4; ++r) out.push_back(DynkinDiagram::series_diagram('B', r));
  for (int r = 3; r <= 4; ++r) out.push_back(DynkinDiagram::series_diagram('C', r));
  out.push_back(DynkinDiagram::series_diagram('D', 4));
  out.push_back(DynkinDiagram::series_diagram('G', 2));
  out.push_back(DynkinDiagram::series_diagram('F', 4));
  return out;
}

IsotropyDescriptor classify(const std::string& d, std::vector<int> marks) {
  return classify_isotropy({parse_diagram(d), std::move(marks)});
}

}  // namespace

TEST(Diagram, ParsesSeriesNames) {
  auto a1 = parse_diagram("A1");
  EXPECT_EQ(a1.rank, 1);
  EXPECT_TRUE(a1.edges.empty());
  auto a2 = parse_diagram("A2");
  ASSERT_EQ(a2.edges.size(), 1u);
  EXPECT_EQ(a2.edges[0].mult, 1);
  auto b2 = parse_diagram("B2");
  ASSERT_EQ(b2.edges.size(), 1u);
  EXPECT_EQ(b2.edges[0].mult, 2);
  EXPECT_NE(b2.edges[0].arrow, 0);
}

TEST(Diagram, JsonMatchesNamedSeries) {
  auto j = parse_diagram(R"({"nodes":[1,2,3],"edges":[{"from":1,"to":2},{"from":2,"to":3,"mult":2,"arrow":3}]})");
  auto b3 = parse_diagram("B3");
  EXPECT_EQ(j.series, 'B');
  EXPECT_EQ(j.cartan, b3.cartan);
}

TEST(Diagram, RejectsMalformedInput) {
  EXPECT_THROW(parse_diagram(""), Error);
  EXPECT_THROW(parse_diagram("Q3"), Error);
  EXPECT_THROW(parse_diagram("B1"), Error);
  EXPECT_THROW(parse_diagram(R"({"nodes":[1,2,3],"edges":[{"from":1,"to":2}]})"), Error);
  EXPECT_THROW(parse_diagram(R"({"nodes":[1,2,3],"edges":[{"from":1,"to":2},{"from":2,"to":3},{"from":3,"to":1}]})"),
               Error);
}

TEST(Diagram, CartanDiagonalIsTwo) {
  for (const auto& d : rank_le_4())
    for (int i = 0; i < d.rank; ++i) EXPECT_EQ(d.cartan(i, i), 2) << d.label();
}

TEST(Roots, PositiveRootCounts) {
  EXPECT_EQ(RootSystem(parse_diagram("A1")).num_positive(), 1);
  EXPECT_EQ(RootSystem(parse_diagram("A2")).num_positive(), 3);
  EXPECT_EQ(RootSystem(parse_diagram("B2")).num_positive(), 4);
  EXPECT_EQ(RootSystem(parse_diagram("G2")).num_positive(), 6);
  EXPECT_EQ(RootSystem(parse_diagram("F4")).num_positive(), 24);
  EXPECT_EQ(RootSystem(parse_diagram("E6")).num_positive(), 36);
}

TEST(Roots, DimensionMatchesSeriesTable) {
  for (const auto& d : rank_le_4()) EXPECT_EQ(RootSystem(d).dim(), series_dimension(d.series, d.rank)) << d.label();
}

TEST(Classify, SphereCase) {
  auto s = classify("A1", {1});
  EXPECT_EQ(s.abelian_rank, 1);
  EXPECT_TRUE(s.semisimple_part.empty());
  EXPECT_EQ(s.dim_H, 1);
  EXPECT_EQ(s.dim_orbit, 2);
}

TEST(Classify, ProjectivePlane) {
  auto s = classify("A2", {1});
  EXPECT_EQ(s.abelian_rank, 1);
  ASSERT_EQ(s.semisimple_part.size(), 1u);
  EXPECT_EQ(s.semisimple_part[0].label(), "A1");
  EXPECT_EQ(s.dim_orbit, 4);
}

TEST(Classify, WorkedExampleB5) {
  auto s = classify("B5", {1, 3});
  EXPECT_EQ(s.dim_G, 55);
  EXPECT_EQ(s.dim_H, 1 + 3 + 1 + 10);
  EXPECT_EQ(s.dim_orbit, 40);
  std::multiset<std::string> comps;
  for (const auto& c : s.semisimple_part) comps.insert(c.label());
  EXPECT_EQ(comps, (std::multiset<std::string>{"A1", "B2"}));
}

TEST(Classify, RejectsEmptyOrRepeatedMarks) {
  EXPECT_THROW(classify("A2", {}), Error);
  EXPECT_THROW(classify("A2", {1, 1}), Error);
  EXPECT_THROW(classify("A2", {7}), Error);
}

TEST(ClassifyProperty, EveryMarkedDiagramOfRankAtMostFourIsEven) {
  int count = 0;
  for (const auto& d : rank_le_4())
    for (unsigned mask = 1; mask < (1u << d.rank); ++mask) {
      std::vector<int> marks;
      for (int i = 0; i < d.rank; ++i)
        if (mask & (1u << i)) marks.push_back(d.nodes[i]);
      auto s = classify_isotropy({d, marks});
      EXPECT_EQ(s.dim_orbit % 2, 0) << d.label() << " mask " << mask;
      // Independent count: one u(1) per mark plus the dimensions of the leftover components.
      long h = static_cast<long>(marks.size());
      for (const auto& c : s.semisimple_part) h += series_dimension(c.series, c.rank);
      EXPECT_EQ(s.dim_H, h) << d.label() << " mask " << mask;
      ++count;
    }
  EXPECT_EQ(count, 1 + 3 + 7 + 15 + 3 + 7 + 15 + 7 + 15 + 15 + 3 + 15);
}

TEST(ClassifyProperty, AllMarkedGivesFullFlag) {
  for (const auto& d : rank_le_4()) {
    auto s = classify_isotropy({d, d.nodes});
    EXPECT_TRUE(s.semisimple_part.empty());
    EXPECT_EQ(s.dim_H, d.rank);
  }
}

TEST(Weights, Dominance) {
  EXPECT_TRUE(is_dominant({3, 0}));
  EXPECT_FALSE(is_dominant({-1, 2}));
  EXPECT_TRUE(is_dominant({0, 0}));
}

TEST(Weights, DualExamples) {
  EXPECT_EQ(dual_weight(parse_diagram("A1"), {7}), Weight{7});
  EXPECT_EQ(dual_weight(parse_diagram("A2"), {1, 0}), (Weight{0, 1}));
  EXPECT_EQ(dual_weight(parse_diagram("B3"), {0, 0, 0}), (Weight{0, 0, 0}));
  EXPECT_EQ(dual_weight(parse_diagram("D4"), {1, 0, 0, 0}), (Weight{1, 0, 0, 0}));
  EXPECT_EQ(dual_weight(parse_diagram("E6"), {1, 0, 0, 0, 0, 0}), (Weight{0, 0, 0, 0, 0, 1}));
}

TEST(WeightsProperty, DualIsInvolutionAndPreservesDimension) {
  for (const auto& d : rank_le_4()) {
    RootSystem rs(d);
    for (int k = 0; k < 30; ++k) {
      Weight w(d.rank);
      for (int i = 0; i < d.rank; ++i) w[i] = (k * (i + 3) + i) % 3;
      Weight dw = dual_weight(d, w);
      EXPECT_TRUE(is_dominant(dw));
      EXPECT_EQ(dual_weight(d, dw), w);
      EXPECT_EQ(weyl_dim(rs, w), weyl_dim(rs, dw));
    }
  }
}

TEST(Weyl, Examples) {
  RootSystem a1(parse_diagram("A1")), a2(parse_diagram("A2"));
  for (int N = 0; N < 20; ++N) EXPECT_EQ(weyl_dim(a1, {N}), N + 1);
  EXPECT_EQ(weyl_dim(a2, {1, 0}), 3);
  EXPECT_EQ(weyl_dim(a2, {0, 0}), 1);
  EXPECT_EQ(weyl_dim(RootSystem(parse_diagram("G2")), {0, 0}), 1);
  EXPECT_THROW(weyl_dim(a2, {-1, 0}), Error);
}

TEST(Weyl, A2ClosedForm) {
  RootSystem a2(parse_diagram("A2"));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) EXPECT_EQ(weyl_dim(a2, {a, b}), (a + 1) * (b + 1) * (a + b + 2) / 2);
}

TEST(Weyl, KnownDimensions) {
  EXPECT_EQ(weyl_dim(RootSystem(parse_diagram("B2")), {0, 1}), 4);
  EXPECT_EQ(weyl_dim(RootSystem(parse_diagram("B2")), {1, 0}), 5);
  EXPECT_EQ(weyl_dim(RootSystem(parse_diagram("G2")), {1, 0}), 7);
  EXPECT_EQ(weyl_dim(RootSystem(parse_diagram("F4")), {0, 0, 0, 1}), 26);
  EXPECT_EQ(weyl_dim(RootSystem(parse_diagram("E6")), {1, 0, 0, 0, 0, 0}), 27);
}

TEST(WeylProperty, GrowthDegreeAlongRay) {
  for (std::string name : {"A1", "A2", "B2", "G2"}) {
    auto d = parse_diagram(name);
    RootSystem rs(d);
    for (unsigned mask = 1; mask < (1u << d.rank); ++mask) {
      Weight L(d.rank, 0);
      for (int i = 0; i < d.rank; ++i) L[i] = (mask >> i) & 1u;
      int expected = 0;
      for (int r = 0; r < rs.num_positive(); ++r) expected += rs.coroot_pairing(L, r) != 0;
      // Finite differences of order `expected` are constant and nonzero, order expected+1 vanish.
      std::vector<double> v;
      for (int N = 0; N <= expected + 4; ++N) v.push_back(static_cast<double>(weyl_dim(rs, N * L)));
      for (int k = 0; k < expected; ++k)
        for (size_t i = 0; i + 1 < v.size() - k; ++i) v[i] = v[i + 1] - v[i];
      const size_t len = v.size() - expected;
      for (size_t i = 1; i < len; ++i) EXPECT_DOUBLE_EQ(v[i], v[0]) << name << " mask " << mask;
      EXPECT_NE(v[0], 0.0);
    }
  }
}

TEST(Casimir, FormulaValues) {
  RootSystem a1(parse_diagram("A1")), a2(parse_diagram("A2"));
  for (int N = 0; N < 10; ++N) EXPECT_NEAR(casimir_value(a1, {N}), 0.5 * N * (0.5 * N + 1), 1e-12);
  EXPECT_NEAR(casimir_value(a2, {1, 0}), 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(casimir_value(a2, {1, 1}), 3.0, 1e-12);
  EXPECT_NEAR(casimir_value(a2, {0, 0}), 0.0, 1e-15);
}

TEST(Weights, DominantConjugate) {
  auto a1 = parse_diagram("A1");
  EXPECT_EQ(dominant_conjugate(a1, {-3}), Weight{3});
  auto a2 = parse_diagram("A2");
  EXPECT_EQ(dominant_conjugate(a2, {-1, 0}), (Weight{0, 1}));
  EXPECT_EQ(dominant_conjugate(a2, {2, -1}), (Weight{1, 1}));
  // Restricted to node 1 only.
  EXPECT_EQ(dominant_conjugate(a2, {-1, 0}, {0}), (Weight{1, -1}));
}

TEST(Algebra, A1Commutators) {
  auto g = algebra_data(parse_diagram("A1"));
  ASSERT_EQ(g->dim, 3);
  const cplx I(0, 1);
  EXPECT_LT((commutator(g->J[0], g->J[1]) - I * g->J[2]).norm(), 1e-12);
  EXPECT_LT((commutator(g->J[1], g->J[2]) - I * g->J[0]).norm(), 1e-12);
  EXPECT_LT((commutator(g->J[2], g->J[0]) - I * g->J[1]).norm(), 1e-12);
}

TEST(Algebra, StructureConstantsSatisfyJacobi) {
  for (std::string name : {"A1", "A2", "A3", "B2", "B3", "C3", "G2"}) {
    auto g = algebra_data(parse_diagram(name));
    EXPECT_EQ(g->dim, RootSystem(g->diagram()).dim());
    EXPECT_LT(structure_antisymmetry_residual(*g), 1e-12) << name;
    EXPECT_LT(structure_jacobi_residual(*g), 1e-12) << name;
    EXPECT_LT((g->metric - RMat::Identity(g->dim, g->dim)).norm(), 1e-10) << name;
  }
}

TEST(Algebra, B2HasTenGenerators) {
  auto g = algebra_data(parse_diagram("B2"));
  EXPECT_EQ(g->dim, 10);
  EXPECT_EQ(g->roots.num_positive(), 4);
}
