#include <gtest/gtest.h>

#include <random>

#include "hypernorm/linalg.hpp"
#include "hypernorm/tensor_sdp.hpp"

using namespace hypernorm;

namespace {

RMat gaussian(int r, int c, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  RMat a(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) a(i, j) = g(rng);
  return a;
}

CMat phi(int n) {
  CVec v = CVec::Zero(n * n);
  for (int i = 0; i < n; ++i) v(i * n + i) = 1 / std::sqrt(static_cast<double>(n));
  return v * v.adjoint();
}

}  // namespace

TEST(TensorSdp, IdentityHasValueOne) {
  TensorSdpResult r = tensor_sdp(OperatorInstance::counting(RMat::Identity(2, 2)), 4);
  EXPECT_NEAR(r.value, 1.0, 1e-6);
  EXPECT_NEAR(r.oracle, 1.0, 1e-9);
  EXPECT_LT(r.sos_residual, 1e-6);
  EXPECT_EQ(r.status, SdpStatus::optimal);
}

TEST(TensorSdp, SandwichOnRandomInstance) {
  OperatorInstance a = OperatorInstance::counting(gaussian(6, 3, 1));
  TensorSdpResult r = tensor_sdp(a, 4);
  EXPECT_LE(r.oracle, r.bound + 1e-6);
  EXPECT_LE(r.value, elementary_norms(a).z + 1e-6);
}

TEST(TensorSdp, RejectsTooManyColumns) {
  EXPECT_THROW(tensor_sdp(OperatorInstance::counting(RMat::Identity(7, 7)), 8), PreconditionError);
  EXPECT_THROW(tensor_sdp(OperatorInstance::counting(RMat::Identity(2, 2)), 5), PreconditionError);
}

TEST(TensorSdp, LevelSixNotAboveLevelFour) {
  OperatorInstance a = OperatorInstance::counting(gaussian(5, 3, 2));
  double v4 = tensor_sdp(a, 4).value, v6 = tensor_sdp(a, 6).value;
  EXPECT_LE(v6, v4 + 1e-5);
}

TEST(A22, FormulationsAgree) {
  OperatorInstance a = OperatorInstance::counting(gaussian(4, 3, 3));
  TensorSdpOptions o;
  o.tol = 1e-9;
  double t = tensor_sdp(a, 4, o).value;
  EXPECT_NEAR(a22_value(a, o).value / t, 1.0, 1e-5);
  EXPECT_GE(a22_value(a, o, false).value, t - 1e-6);
  EXPECT_NEAR(dps_value(a, 1, true, o).value, t, 1e-4);
  RMat m = a22_matrix(a);
  EXPECT_GE(lambda_min(m), -1e-10);
}

TEST(Dps, MaximallyEntangledFixtures) {
  for (int n : {2, 3}) {
    EXPECT_NEAR(dps_value(phi(n), n, n, 1, true).value, 1.0 / n, 1e-3);
    EXPECT_NEAR(dps_value(phi(n), n, n, 1, false).value, 1.0, 1e-3);
  }
  EXPECT_NEAR(dps_value(phi(2), 2, 2, 2, true).value, 0.5, 1e-3);
}

TEST(Dps, BoundDominatesValue) {
  // The primal point may be infeasible by ~1e-9 and overshoot; the bound must dominate the true optimum 1/2.
  DpsResult r = dps_value(phi(2), 2, 2, 2, true);
  EXPECT_GE(r.bound, 0.5 - 1e-12);
  EXPECT_NEAR(r.bound, r.value, 1e-6);
  EXPECT_GT(r.variables, 0);
  EXPECT_GT(r.constraints, 0);
}

TEST(HExt, SymmetricExtension) {
  EXPECT_NEAR(h_ext(phi(2), 2, 2, 2), 0.75, 1e-9);
  EXPECT_NEAR(h_ext(phi(2), 2, 2, 1), 1.0, 1e-9);
  RMat v = symmetric_isometry(3, 2);
  EXPECT_LT((v.transpose() * v - RMat::Identity(6, 6)).norm(), 1e-12);
}

TEST(Bcy, SandwichHolds) {
  BcyReport b = bcy_gap(OperatorInstance::counting(gaussian(5, 3, 4)), 4);
  EXPECT_TRUE(b.sandwich_ok);
  EXPECT_GE(b.implied_epsilon, -1e-6);
}

TEST(Hypercontractivity, DegreeOneOnThreeBits) {
  HyperCertificate h = certify_hypercontractivity(3, 1);
  EXPECT_TRUE(h.certified);
  EXPECT_NEAR(h.value, 2.5, 1e-4);
  EXPECT_LE(h.value, 9 + 1e-4);
}
