#include <gtest/gtest.h>

#include <cstdio>
#include <random>

#include "hypernorm/operator.hpp"

using namespace hypernorm;

TEST(Conventions, VectorNormScalings) {
  RVec v(4);
  v << 1, -1, 2, 0;
  double c = vec_norm(v, 4, NormConvention::counting);
  EXPECT_NEAR(vec_norm(v, 4, NormConvention::expectation), c * std::pow(4.0, -0.25), 1e-12);
  RVec mu = RVec::Constant(4, 0.25);
  EXPECT_NEAR(vec_norm(v, 4, NormConvention::measure, mu), vec_norm(v, 4, NormConvention::expectation), 1e-12);
}

TEST(Conventions, RowWeightsAgreeWithRatio) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  RMat a(6, 3);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = g(rng);
  RVec mu(6);
  mu << 0.1, 0.2, 0.3, 0.1, 0.2, 0.1;
  RVec x(3);
  x << 0.3, -1.2, 0.7;
  for (auto inst : {OperatorInstance::counting(a), OperatorInstance::expectation(a), OperatorInstance::weighted(a, mu)}) {
    RVec w = inst.row_weights(4);
    RVec xs = x / x.norm();
    double direct = std::pow(inst.ratio(x, 4), 4);
    double via = (w.array() * (a * xs).array().pow(4)).sum();
    EXPECT_NEAR(direct, via, 1e-10);
    OperatorInstance c = inst.as_counting_q4();
    EXPECT_NEAR(std::pow(c.ratio(x, 4), 4), direct, 1e-10);
  }
}

TEST(MatrixIo, JsonRoundTrip) {
  CMat m(2, 2);
  m << cplx(1, 2), 0, cplx(0, -1), 3;
  Matrix in(m);
  Matrix out = matrix_from_json(matrix_to_json(in));
  EXPECT_FALSE(out.is_real());
  EXPECT_LT((out.data - m).norm(), 1e-15);
  EXPECT_THROW(out.real(), PreconditionError);
  nlohmann::json bad = {{"rows", 2}, {"cols", 2}, {"scalar", "real"}, {"data", {{1, 2}}}};
  EXPECT_THROW(matrix_from_json(bad), PreconditionError);
}

TEST(MatrixIo, FileRoundTrip) {
  std::string path = testing::TempDir() + "/m.json";
  RMat r(1, 3);
  r << 1, 2, 3;
  write_matrix_file(path, Matrix(r));
  EXPECT_LT((read_matrix_file(path).real() - r).norm(), 1e-15);
  std::remove(path.c_str());
}

TEST(Instance, JsonForms) {
  RMat a = RMat::Identity(2, 2);
  OperatorInstance plain = instance_from_json(matrix_to_json(Matrix(a)));
  EXPECT_EQ(plain.convention, NormConvention::counting);
  OperatorInstance w = OperatorInstance::weighted(a, RVec::Constant(2, 0.5));
  OperatorInstance back = instance_from_json(instance_to_json(w));
  EXPECT_EQ(back.convention, NormConvention::measure);
  EXPECT_NEAR(back.measure(1), 0.5, 1e-15);
}

TEST(RandomOperator, Distributions) {
  OperatorInstance s = random_operator(RowDistribution::sign, 4, 50, 1);
  EXPECT_EQ(s.rows(), 50);
  EXPECT_EQ(s.convention, NormConvention::expectation);
  EXPECT_NEAR(std::abs(s.real()(3, 2)), 0.5, 1e-15);
  OperatorInstance u = random_operator(RowDistribution::unit, 4, 10, 2);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(u.real().row(i).norm(), 1.0, 1e-12);
  OperatorInstance g1 = random_operator(RowDistribution::gaussian, 3, 5, 9), g2 = random_operator(RowDistribution::gaussian, 3, 5, 9);
  EXPECT_EQ(g1.real(), g2.real());
  EXPECT_THROW(row_distribution_from_string("cauchy"), PreconditionError);
}
