#pragma once

#include <string>
#include <vector>

#include "hypernorm/operator.hpp"

namespace hypernorm {

struct OracleResult {
  double value = 0;  // certified lower bound: recomputed from the witness
  RVec witness;      // real witness (for complex operators: (Re z; Im z))
  CVec witness_x, witness_y;  // product-state witness for h_sep
  int restarts = 0;
  long iterations = 0;
  std::string method;
};

// Lower bound on ||A||_{2->q} (q even) by multistart ascent. Restart i is seeded by (seed, i),
// so a larger restart count never lowers the value. n <= 3 also runs a 10^4-point sphere grid.
OracleResult norm_2_to_q_lower(const OperatorInstance& a, int q, int restarts = 64, uint64_t seed = 1);

// Lower bound on max ||P f||_2 / ||f||_{q/(q-1)} for a square operator, expectation norms.
OracleResult dual_norm_lower(const RMat& p, double q, int restarts = 64, uint64_t seed = 1);

// Symmetric 4-tensor stored flat (n^4, row-major). Lower bound on max |<T, x^{(x)4}>|.
OracleResult inj_sym4_lower(const std::vector<double>& t, int n, int restarts = 64, uint64_t seed = 1);

// 3-tensor d1 x d2 x d3 stored flat. Lower bound on max T(x, y, z) over unit vectors.
OracleResult inj3_lower(const std::vector<double>& t, int d1, int d2, int d3, int restarts = 64, uint64_t seed = 1);

// Lower bound on h_Sep(M) = max <x(x)y, M x(x)y> over unit x in C^n, y in C^m.
OracleResult h_sep_lower(const CMat& m, int n, int mdim, int restarts = 64, uint64_t seed = 1);

struct ElementaryNorms {
  double two_to_two = 0;
  double two_to_infty = 0;
  double z = 0;  // two_to_two^2 * two_to_infty^2
};

ElementaryNorms elementary_norms(const OperatorInstance& a);

// Points on the unit sphere of R^n (n <= 3): circle / spherical Fibonacci lattice.
std::vector<RVec> sphere_grid(int n, int points);

}  // namespace hypernorm
