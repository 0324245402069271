#pragma once

#include <json.hpp>
#include <string>

#include "hypernorm/moment.hpp"
#include "hypernorm/oracles.hpp"

namespace hypernorm {

struct TensorSdpOptions {
  double tol = 1e-7;
  long max_iter = 200000;
  uint64_t seed = 1;
  int oracle_restarts = 64;
  bool with_oracle = true;
  bool with_certificate = true;
};

struct TensorSdpResult {
  double value = 0;        // <C, X> at the returned primal point
  double bound = 0;        // certified upper bound from the dual
  double sos_residual = -1;
  double oracle = -1;      // ||A||_{2->4}^4 lower bound (negative when not run)
  std::string formulation;
  int level = 0;
  uint64_t seed = 0;
  SdpStatus status = SdpStatus::max_iter;
  long iterations = 0;
  SdpResiduals residuals;
  PseudoExpectation pe;
  PefReport pe_report;
};

// max E ||A f||_4^4 over level-d pseudo-distributions on the unit sphere.
TensorSdpResult tensor_sdp(const OperatorInstance& a, int d, const TensorSdpOptions& opts = {});

// Same relaxation for an arbitrary polynomial objective in n variables.
TensorSdpResult sphere_sdp(const Polynomial& objective, int n, int d, const TensorSdpOptions& opts = {});

// A22 = sum_i w_i (a_i a_i') (x) (a_i a_i'), index (j,k) -> j*n + k.
RMat a22_matrix(const OperatorInstance& a);

struct SimpleSdpResult {
  double value = 0;
  double bound = 0;
  SdpStatus status = SdpStatus::max_iter;
  long iterations = 0;
  SdpResiduals residuals;
};

// max <X, A22> over PSD, trace-one, index-permutation-symmetric X (symmetric = false drops the symmetry).
SimpleSdpResult a22_value(const OperatorInstance& a, const TensorSdpOptions& opts = {}, bool symmetric = true);

struct DpsResult {
  double value = 0;
  double bound = 0;
  SdpStatus status = SdpStatus::max_iter;
  long iterations = 0;
  SdpResiduals residuals;
  int variables = 0;
  int constraints = 0;
};

// max <M, tr_{B2..Br} rho> over rho on C^n (x) Sym^r(C^m), trace one, with all partial transposes PSD if ppt.
DpsResult dps_value(const CMat& m, int n, int mdim, int r, bool ppt, const TensorSdpOptions& opts = {});
DpsResult dps_value(const OperatorInstance& a, int r, bool ppt, const TensorSdpOptions& opts = {});

// lambda_max of (M (x) I) restricted to C^n (x) Sym^r(C^m).
double h_ext(const CMat& m, int n, int mdim, int r);

// Isometry Sym^r(C^m) -> (C^m)^{(x)r}, columns indexed by sorted multisets.
RMat symmetric_isometry(int m, int r);

struct BcyReport {
  double oracle4 = 0;
  double sdp_value = 0;
  double sdp_bound = 0;
  double z = 0;
  double implied_epsilon = 0;  // (sdp - oracle^4) / Z, reported only
  bool sandwich_ok = false;
};

BcyReport bcy_gap(const OperatorInstance& a, int d, const TensorSdpOptions& opts = {});

struct HyperCertificate {
  int l = 0, d = 0;
  double value = 0;
  double bound = 0;          // certified upper bound
  double bound_claimed = 0;  // 9^d
  double oracle = 0;         // ||P_d||_{2->4}^4 lower bound
  double sos_residual = 0;
  SdpStatus status = SdpStatus::max_iter;
  long iterations = 0;
  bool certified = false;    // oracle - tol <= value, bound <= 9^d + tol, residual small
};

// Tensor-SDP over Fourier coefficients of degree <= d functions on {-1,1}^l.
HyperCertificate certify_hypercontractivity(int l, int d, const TensorSdpOptions& opts = {});

nlohmann::json to_json(const TensorSdpResult& r);
nlohmann::json to_json(const HyperCertificate& r);
nlohmann::json to_json(const BcyReport& r);
nlohmann::json to_json(const DpsResult& r);

}  // namespace hypernorm
