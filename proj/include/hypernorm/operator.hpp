#pragma once

#include "hypernorm/matrix_io.hpp"

namespace hypernorm {

// counting:    sums on both sides.
// expectation: means on both sides (input over cols, output over rows).
// measure:     counting input, output weighted by an explicit nonnegative measure.
enum class NormConvention { counting, expectation, measure };

const char* to_string(NormConvention c);
NormConvention convention_from_string(const std::string& s);

// p-norm of a vector under a convention (for measure, weights apply).
double vec_norm(const RVec& v, double p, NormConvention c, const RVec& measure = RVec());
double vec_norm(const CVec& v, double p, NormConvention c, const RVec& measure = RVec());

struct OperatorInstance {
  Matrix A;
  NormConvention convention = NormConvention::counting;
  RVec measure;  // only read when convention == measure

  OperatorInstance() = default;
  OperatorInstance(Matrix a, NormConvention c, RVec mu = RVec());

  static OperatorInstance counting(const RMat& a) { return {Matrix(a), NormConvention::counting}; }
  static OperatorInstance expectation(const RMat& a) { return {Matrix(a), NormConvention::expectation}; }
  static OperatorInstance weighted(const RMat& a, const RVec& mu) { return {Matrix(a), NormConvention::measure, mu}; }

  int rows() const { return static_cast<int>(A.rows()); }
  int cols() const { return static_cast<int>(A.cols()); }
  bool is_real() const { return A.is_real(); }
  RMat real() const { return A.real(); }

  // w_i such that ||Ax||_q^q / ||x||_2^q = sum_i w_i |<a_i, x>|^q for counting-unit x.
  RVec row_weights(double q) const;

  // Direct ||Ax||_q / ||x||_2 in this instance's convention.
  double ratio(const RVec& x, double q) const;
  double ratio(const CVec& x, double q) const;

  // Same operator rewritten in counting convention with rows scaled by w_i^{1/4}.
  OperatorInstance as_counting_q4() const;
};

enum class RowDistribution { sign, gaussian, unit };
RowDistribution row_distribution_from_string(const std::string& s);
const char* to_string(RowDistribution d);

// m x n operator with rows a_i / sqrt(n): a_i uniform in {-1,1}^n, standard Gaussian, or sqrt(n) times a
// uniform unit vector. Expectation convention, so a typical direction has ||Ax||_4^4 / ||x||_2^4 near 3.
OperatorInstance random_operator(RowDistribution d, int n, int m, uint64_t seed);

// Instance file: a matrix json, or {"matrix": ..., "convention": ..., "measure": [...]}.
OperatorInstance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const OperatorInstance& a);

}  // namespace hypernorm
