#include "hypernorm/reductions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "hypernorm/linalg.hpp"
#include "hypernorm/tensor_sdp.hpp"

namespace hypernorm {

CMat DesignEnsemble::fourth_moment() const {
  CMat s = CMat::Zero(n * n, n * n);
  for (size_t k = 0; k < vectors.size(); ++k) {
    CVec zz(n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) zz(a * n + b) = vectors[k](a) * vectors[k](b);
    s += weights[k] * zz * zz.adjoint();
  }
  return s;
}

DesignEnsemble two_design(int n) {
  require(n >= 1 && n <= 6, "2-design: n must lie in [1, 6]");
  DesignEnsemble d;
  d.n = n;
  for (int i = 0; i < n; ++i) {
    d.vectors.push_back(CVec::Unit(n, i));
    d.weights.push_back(0.5);
  }
  long count = 1;
  for (int k = 1; k < n; ++k) count *= 4;
  const cplx phase[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  double w = n * n / (2.0 * count);
  for (long code = 0; code < count; ++code) {
    CVec z(n);
    z(0) = 1;
    long c = code;
    for (int k = 1; k < n; ++k, c /= 4) z(k) = phase[c % 4];
    d.vectors.push_back(z / std::sqrt(static_cast<double>(n)));
    d.weights.push_back(w);
  }
  return d;
}

TensorForms build_tensor_forms(const OperatorInstance& a, bool audit, double tol, int restarts, uint64_t seed) {
  require(a.is_real(), "tensor forms: operator must be real");
  int n = a.cols(), m = a.rows();
  require(n <= 6, "tensor forms: at most 6 columns");
  if (audit) require(m <= 12, "tensor forms: the audit needs at most 12 rows");
  RMat mat = a.real();
  RVec w = a.row_weights(4.0);
  TensorForms t;
  t.n = n;
  t.m = m;

  // A4 entries are computed once per index multiset, so the 24-fold symmetry is exact.
  long n4 = static_cast<long>(n) * n * n * n;
  t.a4.assign(n4, 0.0);
  std::map<std::array<int, 4>, double> cache;
  for (long f = 0; f < n4; ++f) {
    std::array<int, 4> k{static_cast<int>(f / (n * n * n)), static_cast<int>(f / (n * n) % n),
                         static_cast<int>(f / n % n), static_cast<int>(f % n)};
    std::sort(k.begin(), k.end());
    auto it = cache.find(k);
    if (it == cache.end()) {
      double s = 0;
      for (int i = 0; i < m; ++i) s += w(i) * mat(i, k[0]) * mat(i, k[1]) * mat(i, k[2]) * mat(i, k[3]);
      it = cache.emplace(k, s).first;
    }
    t.a4[f] = it->second;
  }
  t.a3.assign(static_cast<size_t>(m) * n * n, 0.0);
  for (int i = 0; i < m; ++i) {
    double s = std::sqrt(w(i));
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) t.a3[(static_cast<size_t>(i) * n + j) * n + l] = s * mat(i, j) * mat(i, l);
  }
  t.a22 = a22_matrix(a);
  if (!audit) return t;

  t.oracle4 = std::pow(norm_2_to_q_lower(a, 4, restarts, seed).value, 4);
  t.inj_a4 = inj_sym4_lower(t.a4, n, restarts, seed).value;
  double i3 = inj3_lower(t.a3, m, n, n, restarts, seed).value;
  t.inj_a3_sq = i3 * i3;
  t.hsep_a22 = h_sep_lower(t.a22.cast<cplx>(), n, n, restarts, seed).value;
  TensorSdpOptions o;
  o.tol = 1e-9;
  o.with_oracle = false;
  o.with_certificate = false;
  o.seed = seed;
  t.sdp_upper = tensor_sdp(a, 4, o).bound;
  std::array<double, 4> lower{t.oracle4, t.inj_a4, t.inj_a3_sq, t.hsep_a22};
  double lo = *std::min_element(lower.begin(), lower.end());
  double hi = *std::max_element(lower.begin(), lower.end());
  double scale = std::max(1.0, hi);
  t.max_discrepancy = (std::max(hi, t.sdp_upper) - lo) / scale;
  t.pass = t.max_discrepancy <= tol && t.sdp_upper >= hi - tol * scale;
  return t;
}

ProductTest product_test_projector(int n) {
  require(n >= 1 && n <= 4, "product test: n must lie in [1, 4]");
  int dim = n * n * n * n;
  RMat id = RMat::Identity(dim, dim);
  RMat p13 = perm_operator({2, 1, 0, 3}, n), p24 = perm_operator({0, 3, 2, 1}, n);
  ProductTest pt;
  pt.n = n;
  pt.p = 0.25 * (id + p13) * (id + p24);
  pt.idempotency_error = (pt.p * pt.p - pt.p).cwiseAbs().maxCoeff();
  pt.rank = static_cast<int>(std::lround(pt.p.trace()));

  DesignEnsemble d = two_design(n);
  CMat sum = CMat::Zero(dim, dim);
  for (size_t i = 0; i < d.vectors.size(); ++i)
    for (size_t j = 0; j < d.vectors.size(); ++j) {
      CVec xy = kron(CMat(d.vectors[i]), CMat(d.vectors[j])).col(0);
      CVec v = kron(CMat(xy), CMat(xy)).col(0);
      sum += (d.weights[i] * d.weights[j]) * v * v.adjoint();
    }
  pt.design_error = (sum - pt.p.cast<cplx>()).cwiseAbs().maxCoeff();
  return pt;
}

CMat regroup_tensor_power(const CMat& m1, int half, int k) {
  require(m1.rows() == static_cast<Eigen::Index>(half) * half, "regroup: operator size is not half^2");
  require(k >= 1, "regroup: k must be >= 1");
  CMat mk = m1;
  for (int i = 1; i < k; ++i) mk = kron(mk, m1);
  if (k == 1) return mk;
  // Old factor order (A1, B1, ..., Ak, Bk) -> new order (A1..Ak, B1..Bk).
  TensorShape shape = TensorShape::uniform(half, 2 * k);
  long dim = shape.total();
  std::vector<long> old_of(dim);
  for (long f = 0; f < dim; ++f) {
    std::vector<int> idx = shape.unflatten(f);
    std::vector<int> old(2 * k);
    for (int i = 0; i < k; ++i) {
      old[2 * i] = idx[i];
      old[2 * i + 1] = idx[k + i];
    }
    old_of[f] = shape.flatten(old);
  }
  CMat out(dim, dim);
  for (long c = 0; c < dim; ++c)
    for (long r = 0; r < dim; ++r) out(r, c) = mk(old_of[r], old_of[c]);
  return out;
}

M1Result m1_pipeline(const CMat& m0, int n, int k, int restarts, uint64_t seed) {
  require(n >= 1 && n <= 3, "m1: n must lie in [1, 3]");
  require(k == 1 || k == 2, "m1: k must be 1 or 2");
  require(k == 1 || n == 2, "m1: k = 2 is supported for n = 2 only");
  require(m0.rows() == n * n && m0.cols() == n * n, "m1: M0 must be n^2 x n^2");
  require(is_self_adjoint(m0, 1e-9), "m1: M0 is not Hermitian");
  HermEig e = herm_eig(m0, 1e-9);
  require(e.values.minCoeff() >= -1e-9 && e.values.maxCoeff() <= 1 + 1e-9, "m1: M0 eigenvalues outside [0, 1]");

  M1Result r;
  r.n = n;
  r.k = k;
  CMat s = psd_sqrt(m0);
  CMat ss = kron(s, s);
  ProductTest pt = product_test_projector(n);
  r.m1 = ss * pt.p.cast<cplx>() * ss;
  r.m1 = 0.5 * (r.m1 + r.m1.adjoint()).eval();
  r.lambda_max_m1 = lambda_max(r.m1);

  DesignEnsemble d = two_design(n);
  int nd = static_cast<int>(d.vectors.size());
  r.a1.resize(nd * nd, n * n);
  for (int i = 0; i < nd; ++i)
    for (int j = 0; j < nd; ++j) {
      CVec w = s * kron(CMat(d.vectors[i]), CMat(d.vectors[j])).col(0);
      r.a1.row(i * nd + j) = std::pow(d.weights[i] * d.weights[j], 0.25) * w.adjoint();
    }

  r.hsep_m0 = h_sep_lower(m0, n, n, restarts, seed).value;
  r.hsep_m1 = h_sep_lower(r.m1, n * n, n * n, restarts, seed).value;
  r.a1_norm4 = std::pow(norm_2_to_q_lower(OperatorInstance::counting(complex_to_real(r.a1, true)), 4, restarts, seed).value, 4);
  if (k == 2) {
    r.m2 = regroup_tensor_power(r.m1, n * n, 2);
    r.a2 = kron(r.a1, r.a1);
    r.hsep_m2 = h_sep_lower(r.m2, n * n * n * n, n * n * n * n, restarts, seed).value;
  }
  return r;
}

namespace {

// Gadget rows c * (p, q) with c^4 = c4: the two diagonals and two copies of each axis.
struct GadgetRow {
  long long c4_num, c4_den;
  int p, q;
};
constexpr std::array<GadgetRow, 6> kGadget{{{1, 4, 1, 1}, {1, 4, 1, -1}, {1, 2, 1, 0}, {1, 2, 1, 0}, {1, 2, 0, 1}, {1, 2, 0, 1}}};

}  // namespace

boost::rational<long long> gadget_kappa_exact() {
  using Q = boost::rational<long long>;
  // Coefficients of u1^4, u1^3 u2, u1^2 u2^2, u1 u2^3, u2^4 in sum_r c_r^4 (p u1 + q u2)^4.
  std::array<Q, 5> coef{};
  const long long binom[5] = {1, 4, 6, 4, 1};
  for (const GadgetRow& g : kGadget) {
    Q c4(g.c4_num, g.c4_den);
    for (int k = 0; k <= 4; ++k) {
      long long pk = 1;
      for (int i = 0; i < 4 - k; ++i) pk *= g.p;
      for (int i = 0; i < k; ++i) pk *= g.q;
      coef[k] += c4 * Q(binom[k] * pk);
    }
  }
  // Must be kappa * (u1^2 + u2^2)^2 = kappa * (1, 0, 2, 0, 1).
  Q kappa = coef[0];
  if (coef[1] != Q(0) || coef[3] != Q(0) || coef[4] != kappa || coef[2] != kappa * Q(2))
    throw std::logic_error("gadget: fourth powers are not a multiple of |z|^4");
  return kappa;
}

double gadget_kappa() {
  auto k = gadget_kappa_exact();
  return static_cast<double>(k.numerator()) / static_cast<double>(k.denominator());
}

RMat complex_to_real(const CMat& ac, bool normalize) {
  int m = static_cast<int>(ac.rows()), n = static_cast<int>(ac.cols());
  double norm = normalize ? std::pow(gadget_kappa(), -0.25) : 1.0;
  RMat out(6 * m, 2 * n);
  RMat re = ac.real(), im = ac.imag();
  for (int i = 0; i < m; ++i) {
    // u1 = Re(a z) = [Re a, -Im a] . (x; y),  u2 = Im(a z) = [Im a, Re a] . (x; y)
    Eigen::RowVectorXd u1(2 * n), u2(2 * n);
    u1 << re.row(i), -im.row(i);
    u2 << im.row(i), re.row(i);
    for (int r = 0; r < 6; ++r) {
      const GadgetRow& g = kGadget[r];
      double c = std::pow(static_cast<double>(g.c4_num) / g.c4_den, 0.25) * norm;
      out.row(6 * i + r) = c * (g.p * u1 + g.q * u2);
    }
  }
  return out;
}

namespace {

// Instance rewritten as (matrix, output measure) with counting input.
std::pair<RMat, RVec> measure_form(const OperatorInstance& a) {
  RMat m = a.real();
  switch (a.convention) {
    case NormConvention::counting: return {m, RVec::Ones(a.rows())};
    case NormConvention::expectation:
      return {m * std::sqrt(static_cast<double>(a.cols())), RVec::Constant(a.rows(), 1.0 / a.rows())};
    case NormConvention::measure: return {m, a.measure};
  }
  return {};
}

}  // namespace

RMat image_projector(const OperatorInstance& a) {
  auto [m, mu] = measure_form(a);
  require(mu.minCoeff() > 0, "image projector: measure must be strictly positive");
  RVec sq = mu.cwiseSqrt();
  Eigen::JacobiSVD<RMat> svd(sq.asDiagonal() * m, Eigen::ComputeThinU);
  RVec sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-10 * std::max(1.0, sv(0))) ++rank;
  RMat u = svd.matrixU().leftCols(rank);
  return sq.cwiseInverse().asDiagonal() * (u * u.transpose()) * sq.asDiagonal();
}

PadResult pad_and_project(const OperatorInstance& a, double eps, uint64_t seed, double c, int b_rows) {
  require(eps > 0 && eps < 0.5, "pad: eps must lie in (0, 1/2)");
  require(a.is_real(), "pad: operator must be real");
  require(c >= 1, "pad: c must be >= 1");
  auto [m, mu] = measure_form(a);
  int n = a.cols();
  PadResult r;
  r.delta = eps / 2;
  r.alpha = r.delta / std::pow(c, 4);
  if (b_rows <= 0)
    b_rows = static_cast<int>(std::clamp(std::ceil(n * n / (r.delta * r.delta)), 500.0, 20000.0));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RMat b(b_rows, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < b_rows; ++i) b(i, j) = gauss(rng);
  RMat big(m.rows() + b_rows, n);
  big << m, b;
  RVec meas(m.rows() + b_rows);
  meas << r.alpha * mu, RVec::Constant(b_rows, (1 - r.alpha) / b_rows);
  r.padded = OperatorInstance::weighted(big, meas);

  RVec sq = meas.cwiseSqrt();
  Eigen::JacobiSVD<RMat> svd(sq.asDiagonal() * big, Eigen::ComputeThinU);
  RVec sv = svd.singularValues();
  r.sigma_max = sv(0);
  r.sigma_min = sv(sv.size() - 1);
  r.sigma_min_ok = r.sigma_min >= 1 - eps;
  int rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-10 * std::max(1.0, sv(0))) ++rank;
  RMat u = svd.matrixU().leftCols(rank);
  r.image_basis = sq.cwiseInverse().asDiagonal() * u;
  if (big.rows() <= 2000) r.pi_v = r.image_basis * (u.transpose() * sq.asDiagonal());
  r.projector_instance = OperatorInstance::weighted(r.image_basis, meas);
  r.decision = r.sigma_max > 1 + r.delta ? "reject-N" : "project";
  return r;
}

nlohmann::json to_json(const TensorForms& t) {
  return {{"n", t.n},
          {"m", t.m},
          {"oracle4", t.oracle4},
          {"inj_a4", t.inj_a4},
          {"inj_a3_sq", t.inj_a3_sq},
          {"hsep_a22", t.hsep_a22},
          {"sdp_upper", t.sdp_upper},
          {"max_discrepancy", t.max_discrepancy},
          {"pass", t.pass}};
}

nlohmann::json to_json(const M1Result& r) {
  nlohmann::json j = {{"n", r.n},
                      {"k", r.k},
                      {"hsep_m0", r.hsep_m0},
                      {"hsep_m1", r.hsep_m1},
                      {"a1_norm4", r.a1_norm4},
                      {"lambda_max_m1", r.lambda_max_m1},
                      {"m1_side", r.m1.rows()}};
  if (r.k == 2) {
    j["hsep_m2"] = r.hsep_m2;
    j["hsep_m1_squared"] = r.hsep_m1 * r.hsep_m1;
    j["m2_side"] = r.m2.rows();
  }
  return j;
}

}  // namespace hypernorm
