#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "hypernorm/common.hpp"

namespace hypernorm {

// Coefficient on entry (row, col) of block `block`. Blocks are symmetric, so (r,c) and (c,r)
// name the same variable: a linear form is  sum value * X_block(row, col).
struct SdpEntry {
  int block;
  int row;
  int col;
  double value;
};

using LinearForm = std::vector<SdpEntry>;

// maximize <C, X>  s.t.  <A_i, X> = b_i,  X = diag(X_1, ..., X_k) PSD.
struct SdpProblem {
  std::vector<int> blocks;
  LinearForm objective;
  std::vector<LinearForm> constraints;
  std::vector<double> rhs;

  int add_block(int size);
  int add_constraint(LinearForm form, double b);
  int num_constraints() const { return static_cast<int>(constraints.size()); }
  // Symmetric matrices of a linear form, one per block.
  std::vector<RMat> form_matrices(const LinearForm& f) const;
  double evaluate(const LinearForm& f, const std::vector<RMat>& x) const;
  void validate() const;
};

struct SdpOptions {
  double tol = 1e-7;
  long max_iter = 200000;
  uint64_t seed = 0;  // recorded for reproducibility; the iteration itself is deterministic
  double mu0 = 1.0;
  bool verbose = false;
  std::vector<RMat> warm_x;  // optional primal warm start
  RVec warm_y;               // optional dual warm start
};

enum class SdpStatus { optimal, max_iter, infeasible_suspected };
const char* to_string(SdpStatus s);

struct SdpResiduals {
  double primal_infeas = 0;  // relative ||A(X) - b|| plus PSD violation of X
  double dual_infeas = 0;    // relative size of the NSD part of A*y - C
  double gap = 0;            // relative |<C,X> - b'y|
  double max() const;
};

struct SdpSolution {
  std::vector<RMat> X;
  RVec y;  // multipliers of the original constraints (dropped rows get 0)
  double primal_obj = 0;
  double dual_obj = 0;
  SdpResiduals residuals;
  SdpStatus status = SdpStatus::max_iter;
  long iterations = 0;
  std::vector<int> dropped_rows;
};

// Residuals of (X, y) for p computed from scratch.
SdpResiduals compute_residuals(const SdpProblem& p, const std::vector<RMat>& x, const RVec& y);

// Dual slack A*y - C, per block.
std::vector<RMat> dual_slack(const SdpProblem& p, const RVec& y);

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts = {});

struct DualCertificate {
  RVec y;
  double shift = 0;       // max(0, -lambda_min(A*y - C)) over all blocks
  double trace_bound = 0;
  double bound = 0;       // b'y + trace_bound * shift
  std::vector<RMat> slack;
};

// Valid upper bound on the optimum whenever tr X <= trace_bound on the feasible set.
DualCertificate certified_upper_bound(const SdpProblem& p, const RVec& y, double trace_bound);
DualCertificate certified_upper_bound(const SdpProblem& p, const SdpSolution& sol, double trace_bound);

nlohmann::json sdp_problem_to_json(const SdpProblem& p);
SdpProblem sdp_problem_from_json(const nlohmann::json& j);

}  // namespace hypernorm
