#include <gtest/gtest.h>

#include <random>

#include "hypernorm/graph.hpp"

using namespace hypernorm;

TEST(Graph, BuildersAreRegular) {
  EXPECT_EQ(RegularGraph::cycle(7).degree, 2);
  EXPECT_EQ(RegularGraph::complete(5).degree, 4);
  EXPECT_EQ(RegularGraph::petersen().degree, 3);
  EXPECT_EQ(RegularGraph::disjoint_cliques(3, 4).degree, 3);
  RegularGraph r = RegularGraph::random_regular(12, 4, 1);
  EXPECT_EQ(r.degree, 4);
  EXPECT_EQ(r.edge_count(), 24);
  EXPECT_THROW(RegularGraph::from_edges(3, {{0, 1}, {1, 2}}), PreconditionError);
}

TEST(Graph, ParseText) {
  RegularGraph g = RegularGraph::parse("4 4\n0 1\n1 2\n2 3\n3 0\n");
  EXPECT_EQ(g.n, 4);
  EXPECT_EQ(g.degree, 2);
  EXPECT_THROW(RegularGraph::parse("3 1\n0 7\n"), PreconditionError);
}

TEST(Graph, CycleSpectrum) {
  SpectralDecomposition s = spectrum(RegularGraph::cycle(6));
  EXPECT_NEAR(s.eigenvalues(0), 1.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues(1), 0.5, 1e-12);
  EXPECT_EQ(s.top_dimension(0.5), 3);
  RMat p = s.top_projector(0.5);
  EXPECT_LT((p * p - p).norm(), 1e-10);
  RMat a = RegularGraph::cycle(6).adjacency();
  EXPECT_LT((a.rowwise().sum() - RVec::Ones(6)).norm(), 1e-12);
}

TEST(Graph, ExpansionAndCollision) {
  RegularGraph c8 = RegularGraph::cycle(8);
  EXPECT_NEAR(expansion(c8, 0b11), 0.5, 1e-12);
  EXPECT_NEAR(expansion(c8, 0xFF), 0.0, 1e-12);
  ExpansionReport r = expansion_profile(c8, 0.25);
  EXPECT_NEAR(r.phi, 0.5, 1e-12);
  EXPECT_TRUE(r.exhaustive);
  RegularGraph k = RegularGraph::disjoint_cliques(4, 3);
  EXPECT_NEAR(expansion_profile(k, 0.25).phi, 0.0, 1e-12);
  EXPECT_GT(collision_probability(c8, 0b1), 0);
}

TEST(Graph, NormImpliesExpansionSmallGraphs) {
  for (const RegularGraph& g : {RegularGraph::cycle(6), RegularGraph::complete(4)}) {
    NormToExpansionReport r = check_norm_implies_expansion(g, 0.4, 4, 16, 1, false);
    EXPECT_TRUE(r.pass);
    EXPECT_TRUE(r.violations.empty());
    EXPECT_GT(r.subsets_checked, 0);
  }
}

TEST(Graph, ExpansionImpliesNormOnCycle) {
  // Singletons of C12 have cp |S| = 1/2; with lambda = 0.8 and c = 0, e = 1.25 and the hypothesis holds.
  ExpansionToNormReport r = check_expansion_implies_norm(RegularGraph::cycle(12), 0.8, 4, 1.0 / 12, 0.0, 16, 1);
  EXPECT_TRUE(r.hypothesis_met);
  EXPECT_TRUE(r.conclusion_holds);
  EXPECT_EQ(r.verdict, "verified");
}

TEST(Graph, TopProjectorNormIsAtLeastOne) {
  TopProjectorNorm t = top_projector_norm(RegularGraph::cycle(12), 0.5, 4, 32, 1, true);
  EXPECT_EQ(t.dimension, 5);
  EXPECT_GE(t.norm_lower, 1.0);
  EXPECT_NEAR(t.norm_lower, t.dual_norm_lower, 1e-3);
}

TEST(HeavySet, InequalityHolds) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::normal_distribution<double> g;
  for (int k = 0; k < 20; ++k) {
    int m = 30;
    RVec p(m), val(m);
    for (int i = 0; i < m; ++i) {
      p(i) = u(rng);
      val(i) = g(rng);
    }
    p /= p.sum();
    auto t = heavy_set_extract(p, val, 4);
    double avg = 0;
    for (int x : t) avg += val(x) * val(x) / 4;
    double e = p.dot(val.cwiseAbs());
    EXPECT_GE(avg, e * e / 4 - 1e-12);
  }
  RVec spike = RVec::Zero(4);
  spike(0) = 1;
  EXPECT_THROW(heavy_set_extract(spike, RVec::Ones(4), 2), PreconditionError);
}

TEST(Subexp, SigmaMinAndSearch) {
  // An isometry has sigma_min = 1 < c; the identity on R^8 in expectation scale has norm 8^{1/4}.
  OperatorInstance id = OperatorInstance::expectation(RMat::Identity(8, 8));
  SubexpResult r = subexp_decide(id, 4, 1.5, 2.0);
  EXPECT_EQ(r.verdict, SubexpVerdict::large);
  EXPECT_NEAR(r.oracle_value, std::pow(8.0, 0.25), 1e-6);
  OperatorInstance big = OperatorInstance::expectation(RMat::Identity(3, 3) * 3.0);
  EXPECT_EQ(subexp_decide(big, 4, 1.5, 2.0).reason, "sigma-min");
  EXPECT_THROW(subexp_decide(id, 4, 2.0, 1.5), PreconditionError);
}

TEST(Sse, DefaultThresholdsAreInconclusive) {
  SseDecision d = sse_decide(RegularGraph::disjoint_cliques(4, 3), 0.25, 0.1);
  EXPECT_EQ(d.verdict, "inconclusive-parameters");
}

TEST(Sse, OverriddenThresholds) {
  // Cliques of size 3 in 12 vertices: V_{1/2} holds the four normalized indicators, norm 4^{1/4}.
  SseDecision d = sse_decide(RegularGraph::disjoint_cliques(4, 3), 0.25, 0.1, {1.35, 1.2});
  EXPECT_EQ(d.dimension, 4);
  EXPECT_EQ(d.verdict, "not SSE");
}
