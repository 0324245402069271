#include <gtest/gtest.h>

#include <random>

#include "hypernorm/linalg.hpp"
#include "hypernorm/oracles.hpp"

using namespace hypernorm;

TEST(NormOracle, IdentityAndRankOne) {
  EXPECT_NEAR(norm_2_to_q_lower(OperatorInstance::counting(RMat::Identity(3, 3)), 4).value, 1.0, 1e-9);
  RMat r(2, 2);
  r << 1, 1, 1, 1;
  // rows <(1,1), x> with x = (1,1)/sqrt2 give (sqrt2, sqrt2); 4-norm = 2^{3/4}.
  EXPECT_NEAR(norm_2_to_q_lower(OperatorInstance::counting(r), 4).value, std::pow(2.0, 0.75), 1e-9);
}

TEST(NormOracle, WitnessCertifiesValue) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  RMat a(8, 4);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = g(rng);
  OperatorInstance inst = OperatorInstance::expectation(a);
  OracleResult o = norm_2_to_q_lower(inst, 4, 32, 1);
  EXPECT_NEAR(inst.ratio(o.witness, 4), o.value, 1e-12);
  EXPECT_GE(norm_2_to_q_lower(inst, 4, 64, 1).value, o.value - 1e-15);
}

TEST(NormOracle, ComplexDiagonal) {
  CMat a = CMat::Identity(2, 2) * cplx(0, 1);
  EXPECT_NEAR(norm_2_to_q_lower(OperatorInstance(Matrix(a), NormConvention::counting), 4).value, 1.0, 1e-9);
}

TEST(HsepOracle, MaximallyEntangled) {
  for (int n : {2, 3}) {
    CVec v = CVec::Zero(n * n);
    for (int i = 0; i < n; ++i) v(i * n + i) = 1 / std::sqrt(static_cast<double>(n));
    EXPECT_NEAR(h_sep_lower(v * v.adjoint(), n, n).value, 1.0 / n, 1e-6);
  }
}

TEST(HsepOracle, ProductProjectorReachesOne) {
  CVec x(2), y(3);
  x << cplx(0.6, 0), cplx(0, 0.8);
  y << 1, 0, 0;
  CVec xy = kron(CMat(x), CMat(y)).col(0);
  EXPECT_NEAR(h_sep_lower(xy * xy.adjoint(), 2, 3).value, 1.0, 1e-8);
}

TEST(TensorOracles, RankOneTensors) {
  int n = 3;
  RVec u(3);
  u << 1, 2, 2;
  u /= 3;
  std::vector<double> t4(81), t3(27);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        t3[(a * 3 + b) * 3 + c] = 2 * u(a) * u(b) * u(c);
        for (int d = 0; d < 3; ++d) t4[((a * 3 + b) * 3 + c) * 3 + d] = 5 * u(a) * u(b) * u(c) * u(d);
      }
  EXPECT_NEAR(inj_sym4_lower(t4, n).value, 5, 1e-8);
  EXPECT_NEAR(inj3_lower(t3, 3, 3, 3).value, 2, 1e-8);
}

TEST(ElementaryNorms, Identity) {
  ElementaryNorms e = elementary_norms(OperatorInstance::counting(RMat::Identity(4, 4)));
  EXPECT_NEAR(e.two_to_two, 1, 1e-12);
  EXPECT_NEAR(e.two_to_infty, 1, 1e-12);
  EXPECT_NEAR(e.z, 1, 1e-12);
}

TEST(DualNorm, IdentityProjector) {
  // P = I on R^4 with expectation norms: ||f||_2 / ||f||_{4/3} is maximized at indicators, 4^{1/4}.
  EXPECT_NEAR(dual_norm_lower(RMat::Identity(4, 4), 4).value, std::pow(4.0, 0.25), 1e-6);
}

TEST(SphereGrid, UnitPoints) {
  for (const RVec& p : sphere_grid(3, 100)) EXPECT_NEAR(p.norm(), 1, 1e-12);
}
