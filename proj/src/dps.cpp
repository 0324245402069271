#include <algorithm>
#include <cmath>
#include <map>

#include "hypernorm/linalg.hpp"
#include "hypernorm/tensor_sdp.hpp"

namespace hypernorm {

namespace {

// Sorted multisets of size r over [m], lex order, with their word counts.
struct Multisets {
  std::vector<std::vector<int>> items;
  std::map<std::vector<int>, int> index;
  std::vector<double> count;

  Multisets(int m, int r) {
    std::vector<int> cur(r, 0);
    std::function<void(int, int)> rec = [&](int pos, int lo) {
      if (pos == r) {
        index[cur] = static_cast<int>(items.size());
        items.push_back(cur);
        return;
      }
      for (int v = lo; v < m; ++v) {
        cur[pos] = v;
        rec(pos + 1, v);
      }
    };
    rec(0, 0);
    for (const auto& s : items) {
      MultiIndex mult(m, 0);
      for (int v : s) mult[v]++;
      count.push_back(multinomial(mult));
    }
  }
  int size() const { return static_cast<int>(items.size()); }
  int merged(const std::vector<int>& a, const std::vector<int>& b) const {
    std::vector<int> s(a);
    s.insert(s.end(), b.begin(), b.end());
    std::sort(s.begin(), s.end());
    return index.at(s);
  }
};

CMat restricted_operator(const CMat& m, int n, int mdim, int r) {
  long tail = 1;
  for (int k = 1; k < r; ++k) tail *= mdim;
  CMat big = kron(m, CMat(CMat::Identity(tail, tail)));
  RMat u = kron(RMat(RMat::Identity(n, n)), symmetric_isometry(mdim, r));
  CMat uc = u.cast<cplx>();
  return uc.adjoint() * big * uc;
}

}  // namespace

RMat symmetric_isometry(int m, int r) {
  require(m >= 1 && r >= 0, "symmetric isometry: bad dimensions");
  Multisets ms(m, r);
  TensorShape shape = TensorShape::uniform(m, r);
  long words = shape.total();
  RMat v = RMat::Zero(words, ms.size());
  for (long w = 0; w < words; ++w) {
    std::vector<int> idx = r ? shape.unflatten(w) : std::vector<int>{};
    std::sort(idx.begin(), idx.end());
    int s = ms.index.at(idx);
    v(w, s) = 1.0 / std::sqrt(ms.count[s]);
  }
  return v;
}

double h_ext(const CMat& m, int n, int mdim, int r) {
  require(m.rows() == n * mdim && m.cols() == n * mdim, "h_ext: operator size does not match n * m");
  require(r >= 1, "h_ext: r must be >= 1");
  double dim = n * std::pow(static_cast<double>(mdim), r);
  require(dim <= 4096, "h_ext: n * m^r exceeds 4096");
  require(is_self_adjoint(m, 1e-9), "h_ext: operator is not Hermitian");
  return lambda_max(restricted_operator(m, n, mdim, r));
}

DpsResult dps_value(const CMat& m, int n, int mdim, int r, bool ppt, const TensorSdpOptions& opts) {
  require(m.rows() == n * mdim && m.cols() == n * mdim, "dps: operator size does not match n * m");
  require(n >= 1 && n <= 4 && mdim >= 1 && mdim <= 4, "dps: subsystem dimensions must be <= 4");
  require(r >= 1 && r <= 3, "dps: extension level must be 1, 2 or 3");
  require(is_self_adjoint(m, 1e-9), "dps: operator is not Hermitian");
  bool real = m.imag().cwiseAbs().maxCoeff() <= 1e-14;
  int f = real ? 1 : 2;

  Multisets sr(mdim, r);
  int d = sr.size(), nsig = n * d;
  CMat mt = restricted_operator(m, n, mdim, r);
  double scale = mt.cwiseAbs().maxCoeff();
  if (scale == 0) scale = 1;
  mt /= scale;

  SdpProblem p;
  int bs = p.add_block(f * nsig);
  RMat c = real ? RMat(mt.real()) : RMat(0.5 * real_embedding(mt));
  for (int col = 0; col < c.cols(); ++col)
    for (int row = 0; row <= col; ++row) {
      double v = c(row, col) * (row == col ? 1.0 : 2.0);
      if (v != 0) p.objective.push_back({bs, row, col, v});
    }
  LinearForm tr;
  for (int i = 0; i < f * nsig; ++i) tr.push_back({bs, i, i, 1.0});
  p.add_constraint(tr, f);

  // Real / imaginary part of a Hermitian block stored through its real embedding, as linear forms.
  auto re_part = [&](int block, int size, int a, int b, double coef, LinearForm& lf) {
    if (real) {
      lf.push_back({block, a, b, coef});
    } else {
      lf.push_back({block, a, b, 0.5 * coef});
      lf.push_back({block, size + a, size + b, 0.5 * coef});
    }
  };
  auto im_part = [&](int block, int size, int a, int b, double coef, LinearForm& lf) {
    lf.push_back({block, size + a, b, 0.5 * coef});
    lf.push_back({block, a, size + b, -0.5 * coef});
  };

  double trace_bound = f;
  if (ppt) {
    // Partial transpose on B_1..B_j lives on C^n (x) Sym^j (x) Sym^{r-j}; each entry is one scaled sigma entry.
    for (int j = 1; j <= r; ++j) {
      Multisets sj(mdim, j), sk(mdim, r - j);
      int dj = sj.size(), dk = sk.size(), nz = n * dj * dk;
      int bz = p.add_block(f * nz);
      trace_bound += f;
      auto decode = [&](int z, int& a, int& t, int& u) {
        a = z / (dj * dk);
        t = (z / dk) % dj;
        u = z % dk;
      };
      for (int zb = 0; zb < nz; ++zb)
        for (int za = 0; za <= zb; ++za) {
          int a, t, u, a2, t2, u2;
          decode(za, a, t, u);
          decode(zb, a2, t2, u2);
          int s1 = sr.merged(sj.items[t2], sk.items[u]);
          int s2 = sr.merged(sj.items[t], sk.items[u2]);
          double coef = std::sqrt(sj.count[t] * sk.count[u] * sj.count[t2] * sk.count[u2] / (sr.count[s1] * sr.count[s2]));
          int pr = a * d + s1, pc = a2 * d + s2;
          LinearForm lf;
          re_part(bz, nz, za, zb, 1.0, lf);
          re_part(bs, nsig, pr, pc, -coef, lf);
          p.add_constraint(std::move(lf), 0.0);
          if (!real && za != zb) {
            LinearForm li;
            im_part(bz, nz, za, zb, 1.0, li);
            im_part(bs, nsig, pr, pc, -coef, li);
            p.add_constraint(std::move(li), 0.0);
          }
        }
    }
  }

  SdpOptions so;
  so.tol = opts.tol;
  so.max_iter = opts.max_iter;
  so.seed = opts.seed;
  SdpSolution sol = solve_sdp(p, so);
  DpsResult out;
  out.value = sol.primal_obj * scale;
  out.bound = certified_upper_bound(p, sol, trace_bound).bound * scale;
  out.status = sol.status;
  out.iterations = sol.iterations;
  out.residuals = sol.residuals;
  for (int b : p.blocks) out.variables += b * (b + 1) / 2;
  out.constraints = p.num_constraints();
  return out;
}

DpsResult dps_value(const OperatorInstance& a, int r, bool ppt, const TensorSdpOptions& opts) {
  int n = a.cols();
  return dps_value(CMat(a22_matrix(a).cast<cplx>()), n, n, r, ppt, opts);
}

}  // namespace hypernorm
