#include "hypernorm/sdp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>
#include <iostream>

#include "hypernorm/linalg.hpp"

namespace hypernorm {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using SpCol = Eigen::SparseMatrix<double>;

// svec coordinates: packed upper triangle per block, off-diagonals scaled by sqrt(2)
// so that <A, X> = svec(A) . svec(X).
struct Layout {
  std::vector<int> sizes;
  std::vector<long> offset;
  long total = 0;

  explicit Layout(const std::vector<int>& s) : sizes(s) {
    for (int n : sizes) {
      offset.push_back(total);
      total += static_cast<long>(n) * (n + 1) / 2;
    }
  }
  long index(int b, int r, int c) const {
    if (r > c) std::swap(r, c);
    return offset[b] + static_cast<long>(c) * (c + 1) / 2 + r;
  }
  // scale applied to a coefficient on X(r,c) to get its svec weight
  static double coef_scale(int r, int c) { return r == c ? 1.0 : 1.0 / kSqrt2; }

  RMat smat(const RVec& v, int b) const {
    int n = sizes[b];
    RMat m(n, n);
    long o = offset[b];
    for (int c = 0; c < n; ++c)
      for (int r = 0; r <= c; ++r) {
        double val = v(o + static_cast<long>(c) * (c + 1) / 2 + r);
        if (r != c) val /= kSqrt2;
        m(r, c) = val;
        m(c, r) = val;
      }
    return m;
  }
  void svec(const RMat& m, int b, RVec& v) const {
    int n = sizes[b];
    long o = offset[b];
    for (int c = 0; c < n; ++c)
      for (int r = 0; r <= c; ++r)
        v(o + static_cast<long>(c) * (c + 1) / 2 + r) = r == c ? m(r, c) : kSqrt2 * 0.5 * (m(r, c) + m(c, r));
  }
};

SpMat build_constraint_matrix(const SdpProblem& p, const Layout& lay, const std::vector<int>& rows) {
  std::vector<Eigen::Triplet<double>> trip;
  for (size_t k = 0; k < rows.size(); ++k)
    for (const SdpEntry& e : p.constraints[rows[k]])
      trip.emplace_back(static_cast<int>(k), lay.index(e.block, e.row, e.col), e.value * Layout::coef_scale(e.row, e.col));
  SpMat a(static_cast<long>(rows.size()), lay.total);
  a.setFromTriplets(trip.begin(), trip.end());
  a.prune(0.0);
  return a;
}

RVec form_svec(const LinearForm& f, const Layout& lay) {
  RVec v = RVec::Zero(lay.total);
  for (const SdpEntry& e : f) v(lay.index(e.block, e.row, e.col)) += e.value * Layout::coef_scale(e.row, e.col);
  return v;
}

// Greedy pivoted Cholesky on the Gram matrix of the rows; returns indices of a maximal independent subset.
std::vector<int> independent_rows(const SpMat& a) {
  long m = a.rows();
  require(m <= 8000, "solve_sdp: constraint system is rank deficient and too large for the dense fallback");
  RMat g = RMat(a * a.transpose());
  RVec d = g.diagonal();
  double scale = std::max(1e-300, d.maxCoeff());
  std::vector<int> chosen;
  RMat l = RMat::Zero(m, m);
  std::vector<bool> used(m, false);
  for (long k = 0; k < m; ++k) {
    long piv = -1;
    double best = 1e-10 * scale;
    for (long i = 0; i < m; ++i)
      if (!used[i] && d(i) > best) { best = d(i); piv = i; }
    if (piv < 0) break;
    used[piv] = true;
    long j = static_cast<long>(chosen.size());
    chosen.push_back(static_cast<int>(piv));
    double root = std::sqrt(d(piv));
    for (long i = 0; i < m; ++i) {
      if (used[i] && i != piv) continue;
      double v = g(i, piv);
      for (long t = 0; t < j; ++t) v -= l(i, t) * l(piv, t);
      l(i, j) = v / root;
      if (i != piv) d(i) -= l(i, j) * l(i, j);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::max_iter: return "max-iter";
    case SdpStatus::infeasible_suspected: return "infeasible-suspected";
  }
  return "?";
}

double SdpResiduals::max() const { return std::max({primal_infeas, dual_infeas, gap}); }

int SdpProblem::add_block(int size) {
  require(size >= 1, "sdp: block size must be positive");
  blocks.push_back(size);
  return static_cast<int>(blocks.size()) - 1;
}

int SdpProblem::add_constraint(LinearForm form, double b) {
  constraints.push_back(std::move(form));
  rhs.push_back(b);
  return num_constraints() - 1;
}

void SdpProblem::validate() const {
  require(!blocks.empty(), "sdp: no blocks");
  require(!constraints.empty(), "sdp: at least one constraint is required");
  require(constraints.size() == rhs.size(), "sdp: constraint/rhs count mismatch");
  auto check = [&](const LinearForm& f) {
    for (const SdpEntry& e : f) {
      require(e.block >= 0 && e.block < static_cast<int>(blocks.size()), "sdp: block index out of range");
      require(e.row >= 0 && e.col >= 0 && e.row < blocks[e.block] && e.col < blocks[e.block], "sdp: entry index out of range");
      require(std::isfinite(e.value), "sdp: non-finite coefficient");
    }
  };
  check(objective);
  for (const auto& c : constraints) check(c);
  for (double b : rhs) require(std::isfinite(b), "sdp: non-finite right-hand side");
}

std::vector<RMat> SdpProblem::form_matrices(const LinearForm& f) const {
  std::vector<RMat> out;
  for (int n : blocks) out.push_back(RMat::Zero(n, n));
  for (const SdpEntry& e : f) {
    if (e.row == e.col) {
      out[e.block](e.row, e.col) += e.value;
    } else {
      out[e.block](e.row, e.col) += 0.5 * e.value;
      out[e.block](e.col, e.row) += 0.5 * e.value;
    }
  }
  return out;
}

double SdpProblem::evaluate(const LinearForm& f, const std::vector<RMat>& x) const {
  double acc = 0;
  for (const SdpEntry& e : f) acc += e.value * 0.5 * (x[e.block](e.row, e.col) + x[e.block](e.col, e.row));
  return acc;
}

std::vector<RMat> dual_slack(const SdpProblem& p, const RVec& y) {
  std::vector<RMat> s = p.form_matrices(p.objective);
  for (auto& m : s) m = -m;
  for (int i = 0; i < p.num_constraints(); ++i) {
    if (y(i) == 0.0) continue;
    for (const SdpEntry& e : p.constraints[i]) {
      double v = y(i) * e.value;
      if (e.row == e.col) {
        s[e.block](e.row, e.col) += v;
      } else {
        s[e.block](e.row, e.col) += 0.5 * v;
        s[e.block](e.col, e.row) += 0.5 * v;
      }
    }
  }
  return s;
}

SdpResiduals compute_residuals(const SdpProblem& p, const std::vector<RMat>& x, const RVec& y) {
  SdpResiduals r;
  double bnorm = 0, res = 0;
  for (int i = 0; i < p.num_constraints(); ++i) {
    double d = p.evaluate(p.constraints[i], x) - p.rhs[i];
    res += d * d;
    bnorm += p.rhs[i] * p.rhs[i];
  }
  double xneg = 0, xnorm = 0, sneg = 0, cnorm = 0;
  std::vector<RMat> c = p.form_matrices(p.objective);
  std::vector<RMat> s = dual_slack(p, y);
  for (size_t b = 0; b < p.blocks.size(); ++b) {
    RVec ex = Eigen::SelfAdjointEigenSolver<RMat>(0.5 * (x[b] + x[b].transpose()), Eigen::EigenvaluesOnly).eigenvalues();
    RVec es = Eigen::SelfAdjointEigenSolver<RMat>(s[b], Eigen::EigenvaluesOnly).eigenvalues();
    xneg += ex.cwiseMin(0.0).squaredNorm();
    sneg += es.cwiseMin(0.0).squaredNorm();
    xnorm += x[b].squaredNorm();
    cnorm += c[b].squaredNorm();
  }
  r.primal_infeas = std::max(std::sqrt(res) / (1 + std::sqrt(bnorm)), std::sqrt(xneg) / (1 + std::sqrt(xnorm)));
  r.dual_infeas = std::sqrt(sneg) / (1 + std::sqrt(cnorm));
  double pobj = p.evaluate(p.objective, x);
  double dobj = 0;
  for (int i = 0; i < p.num_constraints(); ++i) dobj += p.rhs[i] * y(i);
  r.gap = std::abs(pobj - dobj) / (1 + std::abs(pobj) + std::abs(dobj));
  return r;
}

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& o) {
  p.validate();
  require(o.tol > 0 && o.max_iter >= 1, "solve_sdp: tol and max-iter must be positive");
  Layout lay(p.blocks);
  int m = p.num_constraints();

  std::vector<int> rows;
  SdpSolution sol;
  {
    std::vector<int> all(m);
    for (int i = 0; i < m; ++i) all[i] = i;
    SpMat full = build_constraint_matrix(p, lay, all);
    for (int i = 0; i < m; ++i) {
      if (full.row(i).norm() == 0.0) {
        require(std::abs(p.rhs[i]) <= 1e-12, "solve_sdp: empty constraint with nonzero right-hand side");
        sol.dropped_rows.push_back(i);
      } else {
        rows.push_back(i);
      }
    }
  }
  SpMat a = build_constraint_matrix(p, lay, rows);
  RVec rnorm(a.rows());
  for (long i = 0; i < a.rows(); ++i) rnorm(i) = a.row(i).norm();

  auto normalize = [&](SpMat& mat, RVec& norms) {
    RVec inv = norms.cwiseInverse();
    mat = inv.asDiagonal() * mat;
  };
  normalize(a, rnorm);

  Eigen::SimplicialLLT<SpCol> llt;
  SpCol aat = SpCol(a * a.transpose());
  llt.compute(aat);
  if (llt.info() != Eigen::Success) {
    std::vector<int> keep = independent_rows(a);
    std::vector<int> new_rows;
    std::vector<bool> kept(rows.size(), false);
    for (int k : keep) kept[k] = true;
    for (size_t k = 0; k < rows.size(); ++k) {
      if (kept[k]) new_rows.push_back(rows[k]);
      else sol.dropped_rows.push_back(rows[k]);
    }
    std::cerr << "warning: solve_sdp dropped " << rows.size() - new_rows.size() << " dependent constraint rows\n";
    rows = new_rows;
    a = build_constraint_matrix(p, lay, rows);
    rnorm.resize(a.rows());
    for (long i = 0; i < a.rows(); ++i) rnorm(i) = a.row(i).norm();
    normalize(a, rnorm);
    aat = SpCol(a * a.transpose());
    llt.compute(aat);
    if (llt.info() != Eigen::Success) throw SolverError("solve_sdp: normal equations could not be factored");
  }
  std::sort(sol.dropped_rows.begin(), sol.dropped_rows.end());

  long mr = a.rows();
  RVec b(mr);
  for (long k = 0; k < mr; ++k) b(k) = p.rhs[rows[k]] / rnorm(k);
  RVec c = form_svec(p.objective, lay);
  double bscale = std::max(1.0, b.norm());
  double cscale = std::max(1.0, c.norm());
  b /= bscale;
  RVec cp = -c / cscale;  // internal problem: minimize <cp, x>

  RVec x = RVec::Zero(lay.total), s = RVec::Zero(lay.total), y = RVec::Zero(mr);
  if (!o.warm_x.empty()) {
    require(o.warm_x.size() == p.blocks.size(), "solve_sdp: warm start has wrong block count");
    for (size_t bl = 0; bl < p.blocks.size(); ++bl) lay.svec(o.warm_x[bl], static_cast<int>(bl), x);
    x /= bscale;
  }
  if (o.warm_y.size() == m) {
    for (long k = 0; k < mr; ++k) y(k) = -o.warm_y(rows[k]) * rnorm(k) / cscale;
  }

  auto unscaled = [&](const RVec& xv, const RVec& yv, std::vector<RMat>& xm, RVec& yo) {
    xm.clear();
    for (size_t bl = 0; bl < p.blocks.size(); ++bl) xm.push_back(lay.smat(xv, static_cast<int>(bl)) * bscale);
    yo = RVec::Zero(m);
    for (long k = 0; k < mr; ++k) yo(rows[k]) = -yv(k) * cscale / rnorm(k);
  };

  const double rho = 1.6;
  double mu = o.mu0;
  double bn = b.norm(), cn = cp.norm();
  int streak_p = 0, streak_d = 0;
  RVec v(lay.total), xn(lay.total), ax(mr);
  sol.status = SdpStatus::max_iter;
  long it = 0;
  for (it = 1; it <= o.max_iter; ++it) {
    ax = a * x;
    RVec rhs = mu * (b - ax) + a * (cp - s);
    y = llt.solve(rhs);
    v = cp - a.transpose() * y - mu * x;
    for (size_t bl = 0; bl < p.blocks.size(); ++bl) {
      int n = p.blocks[bl];
      if (n == 1) {
        long idx = lay.offset[bl];
        s(idx) = std::max(0.0, v(idx));
        continue;
      }
      Eigen::SelfAdjointEigenSolver<RMat> es(lay.smat(v, static_cast<int>(bl)));
      const RVec& ev = es.eigenvalues();
      int neg = 0;
      while (neg < n && ev(neg) <= 0) ++neg;
      RMat pos = RMat::Zero(n, n);
      if (neg < n) {
        RMat vecs = es.eigenvectors().rightCols(n - neg);
        pos = vecs * ev.tail(n - neg).asDiagonal() * vecs.transpose();
      }
      lay.svec(pos, static_cast<int>(bl), s);
    }
    xn = (s - v) / mu;
    RVec dres = mu * (x - xn);  // cp - A'y - s
    x = (1 - rho) * x + rho * xn;

    if (!x.allFinite() || !y.allFinite()) {
      sol.status = SdpStatus::infeasible_suspected;
      break;
    }
    if (it % 10 != 0 && it != o.max_iter) continue;

    double pinf = (a * x - b).norm() / (1 + bn);
    double dinf = dres.norm() / (1 + cn);
    double pobj = cp.dot(x), dobj = b.dot(y);
    double gap = std::abs(pobj - dobj) / (1 + std::abs(pobj) + std::abs(dobj));
    if (o.verbose && it % 1000 == 0)
      std::cerr << "iter " << it << " mu " << mu << " pinf " << pinf << " dinf " << dinf << " gap " << gap << "\n";
    if (x.norm() > 1e14 || y.norm() > 1e14) {
      sol.status = SdpStatus::infeasible_suspected;
      break;
    }
    if (std::max({pinf, dinf, gap}) < 0.5 * o.tol) {
      std::vector<RMat> xm;
      RVec yo;
      unscaled(x, y, xm, yo);
      SdpResiduals r = compute_residuals(p, xm, yo);
      if (r.max() <= o.tol) {
        sol.status = SdpStatus::optimal;
        break;
      }
    }
    // residual balancing: a small mu weights dual feasibility, a large mu primal feasibility
    if (pinf > 3 * dinf) { ++streak_p; streak_d = 0; }
    else if (dinf > 3 * pinf) { ++streak_d; streak_p = 0; }
    else { streak_p = streak_d = 0; }
    if (streak_p >= 3) { mu = std::min(mu * 1.6, 1e6); streak_p = 0; }
    if (streak_d >= 3) { mu = std::max(mu / 1.6, 1e-6); streak_d = 0; }
  }
  sol.iterations = std::min(it, o.max_iter);
  unscaled(x, y, sol.X, sol.y);
  sol.residuals = compute_residuals(p, sol.X, sol.y);
  sol.primal_obj = p.evaluate(p.objective, sol.X);
  sol.dual_obj = 0;
  for (int i = 0; i < m; ++i) sol.dual_obj += p.rhs[i] * sol.y(i);
  return sol;
}

DualCertificate certified_upper_bound(const SdpProblem& p, const RVec& y, double trace_bound) {
  require(trace_bound > 0 && std::isfinite(trace_bound), "certified_upper_bound: a positive trace bound is required");
  require(y.size() == p.num_constraints(), "certified_upper_bound: multiplier count mismatch");
  DualCertificate cert;
  cert.y = y;
  cert.trace_bound = trace_bound;
  cert.slack = dual_slack(p, y);
  // Floating-point slack: eigenvalue error of the slack blocks and rounding in b'y, so the bound
  // stays valid in exact arithmetic rather than only to machine precision.
  const double eps = std::numeric_limits<double>::epsilon();
  double shift = 0, eig_err = 0;
  for (const RMat& s : cert.slack) {
    shift = std::max(shift, -lambda_min(s));
    eig_err = std::max(eig_err, 8.0 * eps * static_cast<double>(s.rows()) * s.norm());
  }
  cert.shift = shift;
  double by = 0, by_abs = 0;
  for (int i = 0; i < p.num_constraints(); ++i) {
    by += p.rhs[i] * y(i);
    by_abs += std::abs(p.rhs[i] * y(i));
  }
  cert.bound = by + trace_bound * (shift + eig_err) + 4.0 * eps * by_abs;
  return cert;
}

DualCertificate certified_upper_bound(const SdpProblem& p, const SdpSolution& sol, double trace_bound) {
  return certified_upper_bound(p, sol.y, trace_bound);
}

nlohmann::json sdp_problem_to_json(const SdpProblem& p) {
  using nlohmann::json;
  auto form = [](const LinearForm& f) {
    json arr = json::array();
    for (const SdpEntry& e : f) arr.push_back({e.block, e.row, e.col, e.value});
    return arr;
  };
  json cons = json::array();
  for (int i = 0; i < p.num_constraints(); ++i) cons.push_back({{"terms", form(p.constraints[i])}, {"rhs", p.rhs[i]}});
  return {{"sense", "max"}, {"blocks", p.blocks}, {"objective", form(p.objective)}, {"constraints", cons}};
}

SdpProblem sdp_problem_from_json(const nlohmann::json& j) {
  SdpProblem p;
  try {
    p.blocks = j.at("blocks").get<std::vector<int>>();
    auto form = [](const nlohmann::json& arr) {
      LinearForm f;
      for (const auto& t : arr) f.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>(), t[3].get<double>()});
      return f;
    };
    p.objective = form(j.at("objective"));
    for (const auto& c : j.at("constraints")) p.add_constraint(form(c.at("terms")), c.at("rhs").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed sdp problem: ") + e.what());
  }
  p.validate();
  return p;
}

}  // namespace hypernorm
