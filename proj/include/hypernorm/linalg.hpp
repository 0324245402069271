#pragma once

#include <vector>

#include "hypernorm/common.hpp"

namespace hypernorm {

// Flattening convention used everywhere: row-major lexicographic, factor 1 slowest.
// (i_1, ..., i_r) -> ((i_1 * d_2 + i_2) * d_3 + ...) + i_r.
struct TensorShape {
  std::vector<int> dims;

  TensorShape() = default;
  explicit TensorShape(std::vector<int> d);
  static TensorShape uniform(int n, int r) { return TensorShape(std::vector<int>(r, n)); }

  int factors() const { return static_cast<int>(dims.size()); }
  long total() const;
  long flatten(const std::vector<int>& idx) const;
  std::vector<int> unflatten(long flat) const;
};

struct SymEig {
  RVec values;   // descending
  RMat vectors;  // orthonormal columns
};

struct HermEig {
  RVec values;   // descending
  CMat vectors;  // unitary columns
};

constexpr double kSelfAdjointTol = 1e-10;
constexpr double kPsdSlack = 1e-10;

SymEig sym_eig(const RMat& m, double sa_tol = kSelfAdjointTol);
HermEig herm_eig(const CMat& m, double sa_tol = kSelfAdjointTol);

double lambda_max(const RMat& m);
double lambda_min(const RMat& m);
double lambda_max(const CMat& m);
double lambda_min(const CMat& m);

RMat psd_project(const RMat& m, double sa_tol = kSelfAdjointTol);

// P_n(pi) = sum_i  (x)_k e_{i_k} e_{i_{pi(k)}}^T, pi given 0-based.
// Maps x_1 (x) ... (x) x_r to x_{pi^-1(1)} (x) ... (x) x_{pi^-1(r)}, so P(pi)P(sigma) = P(pi o sigma).
RMat perm_operator(const std::vector<int>& pi, int n);

// (1/r!) sum over all permutations; projector onto the symmetric subspace.
RMat sym_projector(int r, int n);

// Transposes the factors listed in subsystems (0-based) of a square operator on shape.
RMat partial_transpose(const RMat& x, const TensorShape& shape, const std::vector<int>& subsystems);
CMat partial_transpose(const CMat& x, const TensorShape& shape, const std::vector<int>& subsystems);

// Traces out the factors listed in subsystems; the result lives on the remaining factors.
RMat partial_trace(const RMat& x, const TensorShape& shape, const std::vector<int>& subsystems);
CMat partial_trace(const CMat& x, const TensorShape& shape, const std::vector<int>& subsystems);

RMat kron(const RMat& a, const RMat& b);
CMat kron(const CMat& a, const CMat& b);

// Columns v_a of the result satisfy <v_a, v_b> = M_ab. Negative eigenvalues above -tol are clipped.
RMat gram_factor(const RMat& m, double tol = 1e-8);

// Hermitian H = R + iS  ->  [[R, -S], [S, R]]; PSD-ness is preserved both ways.
RMat real_embedding(const CMat& h);

// Unique PSD square root.
RMat psd_sqrt(const RMat& m);
CMat psd_sqrt(const CMat& m);

bool is_self_adjoint(const CMat& m, double tol = kSelfAdjointTol);

}  // namespace hypernorm
