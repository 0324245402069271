#include <gtest/gtest.h>

#include <random>

#include "hypernorm/graph.hpp"
#include "hypernorm/pseudoexp.hpp"

using namespace hypernorm;

namespace {

PseudoExpectation cube_distribution(int n, int level, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<RVec> pts;
  std::vector<double> w;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    RVec x(n);
    for (int i = 0; i < n; ++i) x(i) = (mask >> i) & 1 ? -1.0 : 1.0;
    pts.push_back(x);
    w.push_back(1.0 + static_cast<double>(rng() % 5));
  }
  PseudoExpectation pe = PseudoExpectation::from_distribution(pts, w, level);
  for (int i = 0; i < n; ++i) pe.constraints.push_back(Polynomial::monomial(unit_index(n, i, 2)) - Polynomial::constant(n, 1));
  return pe;
}

}  // namespace

TEST(PseudoExpectation, TrueDistributionValidates) {
  PseudoExpectation pe = cube_distribution(3, 4, 1);
  PefReport r = validate_pef(pe);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.constraint_residual, 1e-12);
  EXPECT_GE(r.min_eig, -1e-12);
  EXPECT_NEAR(pe.moment({0, 0, 0}), 1.0, 1e-15);
}

TEST(PseudoExpectation, DetectsNegativeSquare) {
  PseudoExpectation pe = cube_distribution(2, 2, 2);
  pe.moments[{2, 0}] = -0.5;
  EXPECT_FALSE(validate_pef(pe).pass);
}

TEST(PseudoExpectation, CauchySchwarz) {
  PseudoExpectation pe = cube_distribution(3, 4, 3);
  Polynomial x = Polynomial::variable(3, 0), y = Polynomial::variable(3, 1);
  EXPECT_TRUE(check_pseudo_cauchy_schwarz(pe, x + y, x * y - y));
  EXPECT_TRUE(check_pseudo_cauchy_schwarz(pe, Polynomial(3), x));
}

TEST(PseudoExpectation, LocalizedMomentMatrix) {
  PseudoExpectation pe = cube_distribution(2, 4, 4);
  Polynomial one_minus_x0 = Polynomial::constant(2, 1) - Polynomial::variable(2, 0);
  RMat l = pe.localized_moment_matrix(one_minus_x0);
  EXPECT_EQ(l.rows(), 3);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<RMat>(l).eigenvalues().minCoeff(), -1e-12);
}

TEST(Rounding, AdjoinedVariableMatchesBooleanInput) {
  // f_0 in {0, 1}: rounding reproduces it, so moments of the new variable equal those of f_0.
  std::vector<RVec> pts;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) pts.push_back((RVec(2) << a, b).finished());
  PseudoExpectation pe = PseudoExpectation::from_distribution(pts, {1, 2, 3, 4}, 4);
  PseudoExpectation out = adjoin_rounded_variable(pe, 0, RoundingWitness{});
  EXPECT_EQ(out.n, 3);
  EXPECT_NEAR(out.moment({0, 0, 1}), pe.moment({1, 0}), 1e-12);
  EXPECT_NEAR(out.moment({0, 1, 1}), pe.moment({1, 1}), 1e-12);
  EXPECT_THROW(adjoin_rounded_variable(pe, 0, std::nullopt), PreconditionError);
}

TEST(Rounding, RejectsVariableOutsideUnitInterval) {
  std::vector<RVec> pts = {(RVec(1) << 2.0).finished(), (RVec(1) << 0.0).finished()};
  PseudoExpectation pe = PseudoExpectation::from_distribution(pts, {1, 1}, 4);
  EXPECT_THROW(adjoin_rounded_variable(pe, 0, RoundingWitness{}), PreconditionError);
}

TEST(Lasserre, FiveCycleRoundTrip) {
  LasserreReport r = lasserre_roundtrip(RegularGraph::cycle(5));
  EXPECT_NEAR(r.lasserre_value, r.sos_value, 1e-5);
  EXPECT_NEAR(r.converted_sos_value, r.lasserre_value, 1e-5);
  EXPECT_NEAR(r.converted_lasserre_value, r.sos_value, 1e-5);
  EXPECT_LT(r.max_moment_discrepancy, 1e-5);
  EXPECT_GT(r.lasserre_value, 0.79);
  EXPECT_LE(r.lasserre_value, 0.905 + 1e-6);
}

TEST(PseudoExpectation, JsonRoundTrip) {
  PseudoExpectation pe = cube_distribution(2, 4, 5);
  PseudoExpectation back = pe_from_json(pe_to_json(pe));
  EXPECT_EQ(back.n, 2);
  EXPECT_EQ(back.level, 4);
  EXPECT_EQ(back.moments.size(), pe.moments.size());
  EXPECT_NEAR(back.moment({2, 2}), pe.moment({2, 2}), 1e-15);
  EXPECT_EQ(back.constraints.size(), pe.constraints.size());
}
