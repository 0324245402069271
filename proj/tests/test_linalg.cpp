#include <gtest/gtest.h>

#include <random>

#include "hypernorm/linalg.hpp"

using namespace hypernorm;

namespace {

RMat random_symmetric(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  RMat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  return 0.5 * (a + a.transpose());
}

}  // namespace

TEST(TensorShape, FlattenRoundTrip) {
  TensorShape s({2, 3, 4});
  EXPECT_EQ(s.total(), 24);
  EXPECT_EQ(s.flatten({1, 2, 3}), 23);
  for (long f = 0; f < s.total(); ++f) EXPECT_EQ(s.flatten(s.unflatten(f)), f);
}

TEST(SymEig, MatchesReferenceSolver) {
  for (int n : {1, 2, 5, 17}) {
    RMat m = random_symmetric(n, n);
    SymEig e = sym_eig(m);
    Eigen::SelfAdjointEigenSolver<RMat> ref(m);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(e.values(i), ref.eigenvalues()(n - 1 - i), 1e-9);
    EXPECT_LT((e.vectors * e.values.asDiagonal() * e.vectors.transpose() - m).norm(), 1e-9);
    EXPECT_LT((e.vectors.transpose() * e.vectors - RMat::Identity(n, n)).norm(), 1e-9);
  }
}

TEST(SymEig, RejectsNonSymmetric) {
  RMat m(2, 2);
  m << 1, 2, 0, 1;
  EXPECT_THROW(sym_eig(m), PreconditionError);
}

TEST(HermEig, RecoversSpectrum) {
  CMat h(2, 2);
  h << 1, cplx(0, 1), cplx(0, -1), 1;
  HermEig e = herm_eig(h);
  EXPECT_NEAR(e.values(0), 2, 1e-12);
  EXPECT_NEAR(e.values(1), 0, 1e-12);
  EXPECT_NEAR(lambda_max(h), 2, 1e-12);
  EXPECT_NEAR(lambda_min(h), 0, 1e-12);
}

TEST(PsdProject, MatchesEigenvalueClipping) {
  RMat m = random_symmetric(6, 3);
  RMat p = psd_project(m);
  Eigen::SelfAdjointEigenSolver<RMat> es(m);
  RMat ref = es.eigenvectors() * es.eigenvalues().cwiseMax(0).asDiagonal() * es.eigenvectors().transpose();
  EXPECT_LT((p - ref).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_GE(lambda_min(p), -1e-10);
}

TEST(PermOperator, CompositionRule) {
  std::vector<int> pi{1, 2, 0}, sigma{0, 2, 1}, comp(3);
  for (int k = 0; k < 3; ++k) comp[k] = pi[sigma[k]];
  RMat lhs = perm_operator(pi, 2) * perm_operator(sigma, 2);
  EXPECT_LT((lhs - perm_operator(comp, 2)).norm(), 1e-12);
}

TEST(PermOperator, SwapActsOnProducts) {
  RVec x(2), y(2);
  x << 1, 2;
  y << 3, 5;
  RVec xy = kron(RMat(x), RMat(y)).col(0), yx = kron(RMat(y), RMat(x)).col(0);
  EXPECT_LT((perm_operator({1, 0}, 2) * xy - yx).norm(), 1e-12);
}

TEST(SymProjector, IsProjectorWithBinomialRank) {
  RMat p = sym_projector(3, 3);
  EXPECT_LT((p * p - p).norm(), 1e-10);
  EXPECT_NEAR(p.trace(), 10, 1e-10);
}

TEST(PartialTranspose, Involution) {
  RMat m = random_symmetric(6, 9);
  TensorShape s({2, 3});
  RMat t = partial_transpose(m, s, {1});
  EXPECT_LT((partial_transpose(t, s, {1}) - m).norm(), 1e-12);
  EXPECT_LT((partial_transpose(m, s, {0, 1}) - m.transpose()).norm(), 1e-12);
}

TEST(PartialTranspose, MaximallyEntangledHasNegativeEigenvalue) {
  RVec v = RVec::Zero(4);
  v(0) = v(3) = 1 / std::sqrt(2.0);
  RMat t = partial_transpose(RMat(v * v.transpose()), TensorShape::uniform(2, 2), {1});
  EXPECT_NEAR(lambda_min(t), -0.5, 1e-12);
}

TEST(PartialTrace, OfProductState) {
  RMat a = random_symmetric(2, 4), b = random_symmetric(3, 5);
  RMat ab = kron(a, b);
  EXPECT_LT((partial_trace(ab, TensorShape({2, 3}), {1}) - a * b.trace()).norm(), 1e-10);
  EXPECT_LT((partial_trace(ab, TensorShape({2, 3}), {0}) - b * a.trace()).norm(), 1e-10);
}

TEST(GramFactor, ReproducesPsdMatrix) {
  RMat g = random_symmetric(5, 7);
  RMat m = g * g.transpose();
  RMat v = gram_factor(m);
  EXPECT_LT((v.transpose() * v - m).norm(), 1e-9);
  RMat bad = -RMat::Identity(2, 2);
  EXPECT_THROW(gram_factor(bad), PreconditionError);
}

TEST(RealEmbedding, PreservesSpectrum) {
  CMat h(2, 2);
  h << 2, cplx(1, 1), cplx(1, -1), 0;
  RMat r = real_embedding(h);
  SymEig e = sym_eig(r);
  HermEig he = herm_eig(h);
  EXPECT_NEAR(e.values(0), he.values(0), 1e-12);
  EXPECT_NEAR(e.values(1), he.values(0), 1e-12);
  EXPECT_NEAR(e.values(3), he.values(1), 1e-12);
}

TEST(PsdSqrt, SquaresBack) {
  RMat g = random_symmetric(4, 11);
  RMat m = g * g.transpose();
  RMat s = psd_sqrt(m);
  EXPECT_LT((s * s - m).norm(), 1e-9);
}
