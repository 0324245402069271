#include "hypernorm/tensor_sdp.hpp"

#include <algorithm>
#include <cmath>

#include "hypernorm/linalg.hpp"
#include "hypernorm/reductions.hpp"

namespace hypernorm {

namespace {

SdpOptions sdp_options(const TensorSdpOptions& o) {
  SdpOptions s;
  s.tol = o.tol;
  s.max_iter = o.max_iter;
  s.seed = o.seed;
  return s;
}

OperatorInstance realified(const OperatorInstance& a) {
  if (a.is_real()) return a;
  OperatorInstance c = a.as_counting_q4();
  return OperatorInstance::counting(complex_to_real(c.A.data, true));
}

}  // namespace

TensorSdpResult sphere_sdp(const Polynomial& objective, int n, int d, const TensorSdpOptions& opts) {
  // Solve with the objective normalized to unit max coefficient, then scale back.
  double scale = objective.max_abs_coeff();
  if (scale == 0) scale = 1;
  Polynomial obj = objective * (1.0 / scale);
  MomentProgram mp = build_moment_program(obj, n, d, IdealKind::sphere);
  SdpSolution sol = solve_sdp(mp.sdp, sdp_options(opts));

  TensorSdpResult r;
  r.formulation = "moment";
  r.level = d;
  r.seed = opts.seed;
  r.status = sol.status;
  r.iterations = sol.iterations;
  r.residuals = sol.residuals;
  r.value = sol.primal_obj * scale;
  DualCertificate cert = certified_upper_bound(mp.sdp, sol, mp.trace_bound);
  r.bound = cert.bound * scale;
  if (opts.with_certificate) {
    SosCertificate sos = sphere_sos_certificate(mp, cert);
    r.sos_residual = sos.residual * scale;
  }
  r.pe = extract_pseudo_expectation(mp, sol.X);
  r.pe_report = validate_pef(r.pe, 1e-5);
  return r;
}

TensorSdpResult tensor_sdp(const OperatorInstance& a, int d, const TensorSdpOptions& opts) {
  require(d == 4 || d == 6 || d == 8, "tensor_sdp: level must be 4, 6 or 8");
  OperatorInstance ra = realified(a);
  int n = ra.cols();
  int cap = d == 4 ? 20 : d == 6 ? 10 : 6;
  require(n <= cap, "tensor_sdp: " + std::to_string(n) + " columns exceeds the limit " + std::to_string(cap) +
                        " for level " + std::to_string(d));
  TensorSdpResult r = sphere_sdp(objective_expand(ra), n, d, opts);
  if (opts.with_oracle) r.oracle = std::pow(norm_2_to_q_lower(a, 4, opts.oracle_restarts, opts.seed).value, 4);
  return r;
}

RMat a22_matrix(const OperatorInstance& a) {
  require(a.is_real(), "A22: operator must be real");
  RMat m = a.real();
  RVec w = a.row_weights(4.0);
  int n = a.cols();
  RMat k(m.rows(), n * n);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double s = std::sqrt(w(i));
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) k(i, j * n + l) = s * m(i, j) * m(i, l);
  }
  return k.transpose() * k;
}

SimpleSdpResult a22_value(const OperatorInstance& a, const TensorSdpOptions& opts, bool symmetric) {
  require(a.is_real(), "a22_value: operator must be real");
  int n = a.cols();
  require(n <= 30, "a22_value: at most 30 columns");
  RMat a22 = a22_matrix(a);
  double scale = a22.cwiseAbs().maxCoeff();
  if (scale == 0) scale = 1;
  int nn = n * n;
  SdpProblem p;
  p.add_block(nn);
  for (int c = 0; c < nn; ++c)
    for (int r = 0; r <= c; ++r) {
      double v = a22(r, c) / scale * (r == c ? 1.0 : 2.0);
      if (v != 0) p.objective.push_back({0, r, c, v});
    }
  LinearForm tr;
  for (int i = 0; i < nn; ++i) tr.push_back({0, i, i, 1.0});
  p.add_constraint(tr, 1.0);
  if (symmetric) {
    // Entry (jk, lm) is tied to the representative of its index multiset {j, k, l, m}.
    std::map<std::array<int, 4>, std::pair<int, int>> rep;
    for (int c = 0; c < nn; ++c)
      for (int r = 0; r <= c; ++r) {
        std::array<int, 4> key{r / n, r % n, c / n, c % n};
        std::sort(key.begin(), key.end());
        auto [it, inserted] = rep.emplace(key, std::make_pair(r, c));
        if (!inserted) p.add_constraint({{0, r, c, 1.0}, {0, it->second.first, it->second.second, -1.0}}, 0.0);
      }
  }
  SdpSolution sol = solve_sdp(p, sdp_options(opts));
  SimpleSdpResult out;
  out.value = sol.primal_obj * scale;
  out.bound = certified_upper_bound(p, sol, 1.0).bound * scale;
  out.status = sol.status;
  out.iterations = sol.iterations;
  out.residuals = sol.residuals;
  return out;
}

BcyReport bcy_gap(const OperatorInstance& a, int d, const TensorSdpOptions& opts) {
  TensorSdpOptions o = opts;
  o.with_oracle = true;
  TensorSdpResult r = tensor_sdp(a, d, o);
  BcyReport b;
  b.oracle4 = r.oracle;
  b.sdp_value = r.value;
  b.sdp_bound = r.bound;
  b.z = elementary_norms(a).z;
  double tol = 1e-6 * std::max(1.0, b.z);
  b.implied_epsilon = b.z > 0 ? (b.sdp_value - b.oracle4) / b.z : 0.0;
  b.sandwich_ok = b.oracle4 <= b.sdp_bound + tol && b.sdp_value <= b.z + tol;
  return b;
}

HyperCertificate certify_hypercontractivity(int l, int d, const TensorSdpOptions& opts) {
  require(l >= 1 && l <= 20 && d >= 0 && d <= l, "certify-hyper: need 1 <= l <= 20 and 0 <= d <= l");
  auto subsets = low_degree_subsets(l, d);
  require(subsets.size() <= 20, "certify-hyper: more than 20 Fourier coefficients");
  // Rows are the 2^l points; counting 4-norm of 2^{-l/4} C fhat equals E f^4, and ||fhat||_2 = ||f||_2.
  RMat c = character_matrix(l, d) * std::pow(2.0, -l / 4.0);
  OperatorInstance inst = OperatorInstance::counting(c);
  HyperCertificate h;
  h.l = l;
  h.d = d;
  h.bound_claimed = std::pow(9.0, d);
  TensorSdpOptions o = opts;
  o.with_oracle = true;
  o.with_certificate = true;
  TensorSdpResult r = tensor_sdp(inst, 4, o);
  h.value = r.value;
  h.bound = r.bound;
  h.oracle = r.oracle;
  h.sos_residual = r.sos_residual;
  h.status = r.status;
  h.iterations = r.iterations;
  h.certified = r.status == SdpStatus::optimal && h.oracle <= h.value + 1e-4 && h.bound <= h.bound_claimed + 1e-4 &&
                h.sos_residual <= 1e-6;
  return h;
}

nlohmann::json to_json(const TensorSdpResult& r) {
  return {{"value", r.value},
          {"certificate", {{"bound", r.bound}, {"residual", r.sos_residual}}},
          {"oracle", r.oracle},
          {"formulation", r.formulation},
          {"level", r.level},
          {"seed", r.seed},
          {"status", to_string(r.status)},
          {"iterations", r.iterations},
          {"residuals",
           {{"primal", r.residuals.primal_infeas}, {"dual", r.residuals.dual_infeas}, {"gap", r.residuals.gap}}},
          {"pe_check",
           {{"normalization", r.pe_report.normalization_residual},
            {"min_eig", r.pe_report.min_eig},
            {"constraint", r.pe_report.constraint_residual},
            {"pass", r.pe_report.pass}}}};
}

nlohmann::json to_json(const HyperCertificate& r) {
  return {{"l", r.l},
          {"d", r.d},
          {"value", r.value},
          {"certificate", {{"bound", r.bound}, {"residual", r.sos_residual}}},
          {"bound_claimed", r.bound_claimed},
          {"oracle", r.oracle},
          {"formulation", "moment"},
          {"level", 4},
          {"status", to_string(r.status)},
          {"iterations", r.iterations},
          {"certified", r.certified}};
}

nlohmann::json to_json(const BcyReport& r) {
  return {{"oracle4", r.oracle4},   {"sdp_value", r.sdp_value},           {"sdp_bound", r.sdp_bound},
          {"z", r.z},               {"implied_epsilon", r.implied_epsilon}, {"sandwich_ok", r.sandwich_ok}};
}

nlohmann::json to_json(const DpsResult& r) {
  return {{"value", r.value},
          {"certificate", {{"bound", r.bound}}},
          {"status", to_string(r.status)},
          {"iterations", r.iterations},
          {"variables", r.variables},
          {"constraints", r.constraints}};
}

}  // namespace hypernorm
