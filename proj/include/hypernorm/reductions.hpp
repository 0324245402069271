#pragma once

#include <boost/rational.hpp>
#include <json.hpp>
#include <string>
#include <vector>

#include "hypernorm/oracles.hpp"

namespace hypernorm {

struct ReductionArtifact {
  std::string kind;  // A4, A3, A22, P, M1, M2, A1, A2, gadget-real, padded, projector
  Matrix payload;
  nlohmann::json provenance;
};

// Weighted vectors with sum_i w_i z_i z_i* (x) z_i z_i* = (I + F)/2 (F the swap), the fourth moment of a
// complex Gaussian with E aa* = I/sqrt(2).
struct DesignEnsemble {
  int n = 0;
  std::vector<CVec> vectors;
  std::vector<double> weights;
  CMat fourth_moment() const;
};

// Basis vectors (weight 1/2) plus all phase vectors (1, i^k2, ..., i^kn)/sqrt(n)
// (weight n^2 / (2 * 4^{n-1})). For n = 2 these are the six stabilizer states.
DesignEnsemble two_design(int n);

// A4 = sum w_i a_i^{(x)4}, A3 = sum sqrt(w_i) e_i (x) a_i (x) a_i, A22 = sum w_i a_i a_i' (x) a_i a_i'.
struct TensorForms {
  int n = 0, m = 0;
  std::vector<double> a4;
  std::vector<double> a3;
  RMat a22;
  // audit (all should agree)
  double oracle4 = 0;     // ||A||_{2->4}^4 lower bound
  double inj_a4 = 0;      // injective norm of A4
  double inj_a3_sq = 0;   // (injective norm of A3)^2
  double hsep_a22 = 0;    // h_Sep(A22)
  double sdp_upper = 0;   // certified Tensor-SDP bound
  double max_discrepancy = 0;  // relative spread of the five numbers
  bool pass = false;
};

TensorForms build_tensor_forms(const OperatorInstance& a, bool audit = true, double tol = 1e-6, int restarts = 64,
                               uint64_t seed = 1);

struct ProductTest {
  int n = 0;
  RMat p;
  int rank = 0;
  double idempotency_error = 0;
  double design_error = 0;  // || design sum - P ||_max
};

// P = ((I + P(1,3))/2)((I + P(2,4))/2) on (C^n)^{(x)4}, checked against the design sum.
ProductTest product_test_projector(int n);

// M2 = M1^{(x)k} with factors regrouped so the separable cut puts all first halves together.
CMat regroup_tensor_power(const CMat& m1, int half_dim, int k);

struct M1Result {
  int n = 0, k = 1;
  CMat m1, m2;
  CMat a1, a2;
  double hsep_m0 = 0;     // seesaw lower bound on h_Sep(M0)
  double hsep_m1 = 0;
  double hsep_m2 = 0;     // k >= 2 only
  double a1_norm4 = 0;    // ||realified A1||_{2->4}^4
  double lambda_max_m1 = 0;
};

M1Result m1_pipeline(const CMat& m0, int n, int k, int restarts = 64, uint64_t seed = 1);

// The 6x2 gadget's fourth-power constant, derived exactly from its row quartics.
boost::rational<long long> gadget_kappa_exact();
double gadget_kappa();

// Real 6m x 2n matrix acting on (Re z; Im z); with normalize, ||A_real (Re z; Im z)||_4^4 = sum |(Ac z)_i|^4.
RMat complex_to_real(const CMat& ac, bool normalize = true);

struct PadResult {
  OperatorInstance padded;  // measure convention: alpha on A's rows, 1 - alpha on B's rows
  double alpha = 0;
  double delta = 0;
  double sigma_min = 0;
  double sigma_max = 0;
  bool sigma_min_ok = false;  // sigma_min >= 1 - eps
  RMat image_basis;           // orthonormal (in the output measure) basis of image(A_padded)
  RMat pi_v;                  // projector onto the image; empty when the output dimension exceeds 2000
  OperatorInstance projector_instance;  // f in image -> same f; 2->4 norm equals ||Pi_V||_{2->4}
  std::string decision;       // "reject-N" when sigma_max > 1 + delta, else "project"
};

// Appends a Gaussian block B (b_rows rows) with measure weighting alpha = delta / c^4, delta = eps / 2.
PadResult pad_and_project(const OperatorInstance& a, double eps, uint64_t seed, double c = 1.0, int b_rows = 0);

// Orthogonal projector onto the image of an instance's matrix in its output measure.
RMat image_projector(const OperatorInstance& a);

nlohmann::json to_json(const TensorForms& t);
nlohmann::json to_json(const M1Result& r);

}  // namespace hypernorm
