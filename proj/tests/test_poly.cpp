#include <gtest/gtest.h>

#include <random>

#include "hypernorm/poly.hpp"

using namespace hypernorm;

TEST(Monomials, BasisSizesAndOrder) {
  EXPECT_EQ(monomial_basis(3, 2).size(), 10u);
  EXPECT_EQ(homogeneous_basis(3, 4).size(), 15u);
  auto b = monomial_basis(2, 2);
  EXPECT_EQ(b[0], (MultiIndex{0, 0}));
  EXPECT_EQ(b[3], (MultiIndex{2, 0}));
  EXPECT_EQ(b[4], (MultiIndex{1, 1}));
  EXPECT_DOUBLE_EQ(multinomial({2, 1, 1}), 12.0);
}

TEST(Polynomial, Arithmetic) {
  Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  Polynomial p = pow(x + y, 2) - x * x - y * y;
  EXPECT_DOUBLE_EQ(p.coeff({1, 1}), 2.0);
  EXPECT_DOUBLE_EQ(p.coeff({2, 0}), 0.0);
  RVec v(2);
  v << 3, -2;
  EXPECT_DOUBLE_EQ(p.evaluate(v), -12.0);
  EXPECT_EQ(pow(x + y, 4).degree(), 4);
}

TEST(Polynomial, ObjectiveMatchesDirectEvaluation) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  RMat a(5, 3);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = g(rng);
  for (auto inst : {OperatorInstance::counting(a), OperatorInstance::expectation(a)}) {
    Polynomial p = objective_expand(inst);
    RVec x(3);
    x << g(rng), g(rng), g(rng);
    x.normalize();
    EXPECT_NEAR(p.evaluate(x), std::pow(inst.ratio(x, 4), 4), 1e-10);
  }
}

TEST(Polynomial, MultilinearReduce) {
  Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  Polynomial r = multilinear_reduce(pow(x, 3) * y + pow(y, 2));
  EXPECT_DOUBLE_EQ(r.coeff({1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(r.coeff({0, 0}), 1.0);
  EXPECT_EQ(r.degree(), 2);
}

TEST(Fourier, RoundTripAndParseval) {
  RVec v(8);
  v << 1, -2, 0.5, 3, 0, 1, -1, 2;
  FourierFunction f = FourierFunction::from_values(3, v);
  EXPECT_LT((f.values() - v).norm(), 1e-12);
  EXPECT_NEAR(f.coeffs.squaredNorm(), v.squaredNorm() / 8, 1e-12);
  EXPECT_NEAR(f.expectation_norm(2), std::sqrt(v.squaredNorm() / 8), 1e-12);
}

TEST(Fourier, LowDegreeProjector) {
  RMat p = low_degree_projector(4, 1);
  EXPECT_LT((p * p - p).norm(), 1e-12);
  EXPECT_NEAR(p.trace(), 5, 1e-12);
  RMat c = character_matrix(4, 1);
  EXPECT_EQ(c.cols(), 5);
  EXPECT_LT((c.transpose() * c / 16.0 - RMat::Identity(5, 5)).norm(), 1e-12);
  EXPECT_EQ(low_degree_subsets(4, 2).size(), 11u);
}
