#include "hypernorm/oracles.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hypernorm/linalg.hpp"
#include "hypernorm/reductions.hpp"

namespace hypernorm {

namespace {

constexpr int kGridPoints = 10000;
constexpr int kGridPolish = 8;

RVec random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  RVec x(n);
  do {
    for (int i = 0; i < n; ++i) x(i) = g(rng);
  } while (x.norm() == 0.0);
  return x / x.norm();
}

CVec random_unit_complex(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  CVec x(n);
  for (int i = 0; i < n; ++i) x(i) = cplx(g(rng), g(rng));
  return x / x.norm();
}

// F(x) = sum_i w_i |<a_i, x>|^q on the unit sphere, maximized by x <- grad F / |grad F|.
// For convex even F each step does not decrease F.
struct PowerAscent {
  const RMat& a;
  const RVec& w;
  int q;

  double value(const RVec& x) const {
    RVec t = a * x;
    return (w.array() * t.array().abs().pow(q)).sum();
  }
  long run(RVec& x, long max_iter = 20000) const {
    long it = 0;
    double f = value(x);
    for (; it < max_iter; ++it) {
      RVec t = a * x;
      RVec s = (w.array() * t.array().abs().pow(q - 2) * t.array()).matrix();
      RVec g = a.transpose() * s;
      double gn = g.norm();
      if (gn == 0.0) break;
      RVec xn = g / gn;
      double fn = value(xn);
      double step = (xn - x).norm();
      if (fn < f) break;  // rounding level; keep the better point
      x = xn;
      bool flat = fn - f <= 1e-16 * std::max(1.0, fn);
      f = fn;
      if (step < 1e-13 || (flat && step < 1e-9)) break;
    }
    return it;
  }
};

struct Candidate {
  double value = -1;
  RVec x;
  long iters = 0;
};

// Deterministic best-of: highest value, ties to the lowest index.
template <class T>
int best_index(const std::vector<T>& c) {
  int best = 0;
  for (size_t i = 1; i < c.size(); ++i)
    if (c[i].value > c[best].value) best = static_cast<int>(i);
  return best;
}

OracleResult real_norm_oracle(const OperatorInstance& inst, int q, int restarts, uint64_t seed) {
  RMat a = inst.real();
  RVec w = inst.row_weights(q);
  int n = inst.cols();
  PowerAscent pa{a, w, q};
  OracleResult out;
  out.method = "power-ascent";
  out.restarts = restarts;
  if (a.cwiseAbs().maxCoeff() == 0.0 || (w.array() > 0).count() == 0) {
    out.value = 0;
    out.witness = RVec::Unit(n, 0);
    return out;
  }

  std::vector<Candidate> cand(restarts);
  parallel_for(restarts, [&](int i) {
    std::mt19937_64 rng(mix_seed(seed, i));
    RVec x = random_unit(rng, n);
    cand[i].iters = pa.run(x);
    cand[i].x = x;
    cand[i].value = pa.value(x);
  });

  if (n <= 3) {
    std::vector<RVec> grid = sphere_grid(n, kGridPoints);
    std::vector<std::pair<double, int>> scored;
    for (size_t k = 0; k < grid.size(); ++k) scored.emplace_back(pa.value(grid[k]), static_cast<int>(k));
    std::partial_sort(scored.begin(), scored.begin() + std::min<size_t>(kGridPolish, scored.size()), scored.end(),
                      [](auto& l, auto& r) { return l.first > r.first || (l.first == r.first && l.second < r.second); });
    for (size_t k = 0; k < std::min<size_t>(kGridPolish, scored.size()); ++k) {
      Candidate c;
      c.x = grid[scored[k].second];
      c.iters = pa.run(c.x);
      c.value = pa.value(c.x);
      cand.push_back(c);
    }
    out.method = "grid+power-ascent";
  }
  int b = best_index(cand);
  RVec x = cand[b].x / cand[b].x.norm();
  for (const auto& c : cand) out.iterations += c.iters;
  out.witness = x;
  out.value = inst.ratio(x, q);
  return out;
}

}  // namespace

std::vector<RVec> sphere_grid(int n, int points) {
  require(n >= 1 && n <= 3, "sphere_grid: dimension must be 1, 2 or 3");
  std::vector<RVec> out;
  if (n == 1) {
    out.push_back(RVec::Ones(1));
    return out;
  }
  if (n == 2) {
    for (int k = 0; k < points; ++k) {
      double th = std::numbers::pi * k / points;  // half circle suffices for even objectives
      RVec x(2);
      x << std::cos(th), std::sin(th);
      out.push_back(x);
    }
    return out;
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < points; ++k) {
    double z = 1.0 - (2.0 * k + 1.0) / points;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    RVec x(3);
    x << r * std::cos(golden * k), r * std::sin(golden * k), z;
    out.push_back(x);
  }
  return out;
}

OracleResult norm_2_to_q_lower(const OperatorInstance& a, int q, int restarts, uint64_t seed) {
  require(q >= 2 && q % 2 == 0, "norm oracle: q must be even");
  require(restarts >= 1, "norm oracle: restarts must be >= 1");
  if (a.is_real()) return real_norm_oracle(a, q, restarts, seed);
  require(q == 4, "norm oracle: complex operators are supported for q = 4 (via the real gadget)");
  OperatorInstance real = OperatorInstance::counting(complex_to_real(a.as_counting_q4().A.data, true));
  OracleResult r = real_norm_oracle(real, 4, restarts, seed);
  int n = a.cols();
  CVec z(n);
  for (int j = 0; j < n; ++j) z(j) = cplx(r.witness(j), r.witness(n + j));
  r.value = a.ratio(z, 4);
  r.method += "+gadget";
  return r;
}

OracleResult dual_norm_lower(const RMat& p, double q, int restarts, uint64_t seed) {
  require(p.rows() == p.cols(), "dual norm oracle: operator must be square");
  require(q > 2, "dual norm oracle: q must exceed 2");
  int n = static_cast<int>(p.rows());
  double pp = q / (q - 1.0);  // input norm exponent; its dual exponent is q
  auto pnorm = [](const RVec& v, double e) { return std::pow(v.array().abs().pow(e).sum(), 1.0 / e); };
  auto ratio = [&](const RVec& x) { return (p * x).norm() / pnorm(x, pp); };
  std::vector<Candidate> cand(restarts);
  parallel_for(restarts, [&](int i) {
    std::mt19937_64 rng(mix_seed(seed, i));
    RVec x = random_unit(rng, n);
    x /= pnorm(x, pp);
    long it = 0;
    for (; it < 5000; ++it) {
      RVec y = p * x;
      double yn = y.norm();
      if (yn == 0.0) break;
      RVec z = p.transpose() * (y / yn);
      double zq = pnorm(z, q);
      if (zq <= z.dot(x) * (1 + 1e-14)) break;
      RVec xn = (z.array().sign() * z.array().abs().pow(q - 1)).matrix();
      xn /= pnorm(xn, pp);
      if ((xn - x).norm() < 1e-13) { x = xn; break; }
      x = xn;
    }
    cand[i].x = x;
    cand[i].iters = it;
    cand[i].value = ratio(x);
  });
  int b = best_index(cand);
  OracleResult out;
  out.method = "boyd-power";
  out.restarts = restarts;
  out.witness = cand[b].x;
  // expectation norms: ||Pf||_2 / sqrt(N) over ||f||_pp N^{-1/pp}
  out.value = cand[b].value * std::pow(static_cast<double>(n), 1.0 / pp - 0.5);
  for (const auto& c : cand) out.iterations += c.iters;
  return out;
}

OracleResult inj_sym4_lower(const std::vector<double>& t, int n, int restarts, uint64_t seed) {
  long n2 = static_cast<long>(n) * n;
  require(static_cast<long>(t.size()) == n2 * n2, "inj_sym4: tensor must have n^4 entries");
  TensorShape shape = TensorShape::uniform(n, 4);
  double scale = 0;
  for (double v : t) scale = std::max(scale, std::abs(v));
  std::vector<int> pi = {0, 1, 2, 3};
  do {
    for (long f = 0; f < n2 * n2; ++f) {
      std::vector<int> idx = shape.unflatten(f), p(4);
      for (int k = 0; k < 4; ++k) p[k] = idx[pi[k]];
      require(std::abs(t[f] - t[shape.flatten(p)]) <= 1e-10 * std::max(1.0, scale), "inj_sym4: tensor is not symmetric");
    }
  } while (std::next_permutation(pi.begin(), pi.end()));

  RMat flat(n2, n2);
  for (long r = 0; r < n2; ++r)
    for (long c = 0; c < n2; ++c) flat(r, c) = t[r * n2 + c];
  double alpha = 3.0 * std::max(1e-300, Eigen::JacobiSVD<RMat>(flat).singularValues()(0));

  auto form = [&](const RVec& x, double sgn) {
    RVec xx = kron(RMat(x), RMat(x)).col(0);
    return sgn * xx.dot(flat * xx);
  };
  auto hopm = [&](RVec& x, double sgn) {
    long it = 0;
    double f = form(x, sgn);
    for (; it < 20000; ++it) {
      RVec xx = kron(RMat(x), RMat(x)).col(0);
      RVec v = flat * xx;
      Eigen::Map<RMat> vm(v.data(), n, n);  // column-major view: vm(j, i) = v[i*n + j]
      RVec g = sgn * (vm.transpose() * x) + alpha * x;
      RVec xn = g / g.norm();
      double fn = form(xn, sgn);
      double step = (xn - x).norm();
      if (fn < f) break;
      x = xn;
      bool flatstep = fn - f <= 1e-16 * std::max(1.0, std::abs(fn));
      f = fn;
      if (step < 1e-13 || (flatstep && step < 1e-9)) break;
    }
    return it;
  };

  std::vector<Candidate> cand(2 * restarts);
  parallel_for(2 * restarts, [&](int k) {
    int i = k / 2;
    double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    std::mt19937_64 rng(mix_seed(seed, i));
    RVec x = random_unit(rng, n);
    cand[k].iters = hopm(x, sgn);
    cand[k].x = x;
    cand[k].value = std::abs(form(x, 1.0));
  });
  if (n <= 3) {
    for (double sgn : {1.0, -1.0}) {
      std::vector<RVec> grid = sphere_grid(n, kGridPoints);
      std::vector<std::pair<double, int>> scored;
      for (size_t k = 0; k < grid.size(); ++k) scored.emplace_back(form(grid[k], sgn), static_cast<int>(k));
      size_t keep = std::min<size_t>(kGridPolish, scored.size());
      std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(),
                        [](auto& l, auto& r) { return l.first > r.first || (l.first == r.first && l.second < r.second); });
      for (size_t k = 0; k < keep; ++k) {
        Candidate c;
        c.x = grid[scored[k].second];
        c.iters = hopm(c.x, sgn);
        c.value = std::abs(form(c.x, 1.0));
        cand.push_back(c);
      }
    }
  }
  int b = best_index(cand);
  OracleResult out;
  out.method = n <= 3 ? "grid+ss-hopm" : "ss-hopm";
  out.restarts = restarts;
  out.witness = cand[b].x / cand[b].x.norm();
  out.value = std::abs(form(out.witness, 1.0));
  for (const auto& c : cand) out.iterations += c.iters;
  return out;
}

OracleResult inj3_lower(const std::vector<double>& t, int d1, int d2, int d3, int restarts, uint64_t seed) {
  require(static_cast<long>(t.size()) == static_cast<long>(d1) * d2 * d3, "inj3: tensor size mismatch");
  auto at = [&](int i, int j, int k) { return t[(static_cast<long>(i) * d2 + j) * d3 + k]; };
  auto eval = [&](const RVec& x, const RVec& y, const RVec& z) {
    double acc = 0;
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d2; ++j)
        for (int k = 0; k < d3; ++k) acc += at(i, j, k) * x(i) * y(j) * z(k);
    return acc;
  };
  struct C3 {
    double value = -1;
    RVec x, y, z;
    long iters = 0;
  };
  std::vector<C3> cand(restarts);
  parallel_for(restarts, [&](int r) {
    std::mt19937_64 rng(mix_seed(seed, r));
    RVec x = random_unit(rng, d1), y = random_unit(rng, d2), z = random_unit(rng, d3);
    double f = eval(x, y, z);
    long it = 0;
    for (; it < 20000; ++it) {
      RVec nx = RVec::Zero(d1), ny = RVec::Zero(d2), nz = RVec::Zero(d3);
      for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d2; ++j)
          for (int k = 0; k < d3; ++k) nx(i) += at(i, j, k) * y(j) * z(k);
      if (nx.norm() > 0) x = nx / nx.norm();
      for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d2; ++j)
          for (int k = 0; k < d3; ++k) ny(j) += at(i, j, k) * x(i) * z(k);
      if (ny.norm() > 0) y = ny / ny.norm();
      for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d2; ++j)
          for (int k = 0; k < d3; ++k) nz(k) += at(i, j, k) * x(i) * y(j);
      if (nz.norm() > 0) z = nz / nz.norm();
      double fn = eval(x, y, z);
      bool done = std::abs(fn - f) <= 1e-15 * std::max(1.0, std::abs(fn));
      f = fn;
      if (done) break;
    }
    cand[r] = {f, x, y, z, it};
  });
  int b = best_index(cand);
  OracleResult out;
  out.method = "als";
  out.restarts = restarts;
  RVec w(d1 + d2 + d3);
  w << cand[b].x, cand[b].y, cand[b].z;
  out.witness = w;
  out.value = eval(cand[b].x, cand[b].y, cand[b].z);
  for (const auto& c : cand) out.iterations += c.iters;
  return out;
}

namespace {

// <x(x)y, M x(x)y>
double product_value(const CMat& m, const CVec& x, const CVec& y) {
  CVec v = kron(CMat(x), CMat(y)).col(0);
  return (v.adjoint() * m * v)(0, 0).real();
}

// (x* (x) I) M (x (x) I) and (I (x) y*) M (I (x) y)
CMat contract_first(const CMat& m, const CVec& x, int n, int md) {
  CMat out = CMat::Zero(md, md);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      cplx w = std::conj(x(a)) * x(b);
      if (w == 0.0) continue;
      out += w * m.block(a * md, b * md, md, md);
    }
  return out;
}

CMat contract_second(const CMat& m, const CVec& y, int n, int md) {
  CMat out(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out(a, b) = (y.adjoint() * m.block(a * md, b * md, md, md) * y)(0, 0);
  return out;
}

CVec top_vector(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (h + h.adjoint()));
  return es.eigenvectors().col(h.rows() - 1);
}

struct SepCandidate {
  double value = -1;
  CVec x, y;
  long iters = 0;
};

void seesaw(const CMat& m, int n, int md, SepCandidate& c) {
  double f = product_value(m, c.x, c.y);
  for (long it = 0; it < 2000; ++it) {
    c.x = top_vector(contract_second(m, c.y, n, md));
    c.y = top_vector(contract_first(m, c.x, n, md));
    double fn = product_value(m, c.x, c.y);
    ++c.iters;
    bool done = fn - f <= 1e-15 * std::max(1.0, std::abs(fn));
    f = std::max(f, fn);
    if (done) break;
  }
  c.value = product_value(m, c.x, c.y);
}

}  // namespace

OracleResult h_sep_lower(const CMat& m, int n, int md, int restarts, uint64_t seed) {
  require(m.rows() == m.cols() && m.rows() == static_cast<Eigen::Index>(n) * md, "h_sep: operator size must be n*m");
  require(static_cast<long>(n) * md <= 1024, "h_sep: n*m must be <= 1024");
  require(is_self_adjoint(m, 1e-9), "h_sep: operator must be Hermitian");
  double scale = std::max(1.0, m.norm());
  require(lambda_min(m) >= -1e-9 * scale, "h_sep: operator must be PSD");

  std::vector<SepCandidate> cand(restarts);
  parallel_for(restarts, [&](int i) {
    std::mt19937_64 rng(mix_seed(seed, i));
    cand[i].y = random_unit_complex(rng, md);
    cand[i].x = random_unit_complex(rng, n);
    seesaw(m, n, md, cand[i]);
  });
  OracleResult out;
  out.method = "seesaw";
  if (n == 2 && md == 2) {
    // Bloch-sphere grid on the first factor; the second factor is optimal for each grid point.
    std::vector<std::pair<double, CVec>> scored;
    const int nt = 60, np = 120;
    for (int a = 0; a <= nt; ++a)
      for (int b = 0; b < np; ++b) {
        double th = std::numbers::pi * a / nt, ph = 2 * std::numbers::pi * b / np;
        CVec x(2);
        x << std::cos(th / 2), std::polar(std::sin(th / 2), ph);
        CMat h = contract_first(m, x, n, md);
        scored.emplace_back(lambda_max(h), x);
      }
    std::stable_sort(scored.begin(), scored.end(), [](auto& l, auto& r) { return l.first > r.first; });
    for (int k = 0; k < kGridPolish && k < static_cast<int>(scored.size()); ++k) {
      SepCandidate c;
      c.x = scored[k].second;
      c.y = top_vector(contract_first(m, c.x, n, md));
      seesaw(m, n, md, c);
      cand.push_back(c);
    }
    out.method = "bloch-grid+seesaw";
  }
  int b = best_index(cand);
  out.restarts = restarts;
  out.witness_x = cand[b].x / cand[b].x.norm();
  out.witness_y = cand[b].y / cand[b].y.norm();
  out.value = product_value(m, out.witness_x, out.witness_y);
  for (const auto& c : cand) out.iterations += c.iters;
  return out;
}

ElementaryNorms elementary_norms(const OperatorInstance& a) {
  CMat m = a.A.data;
  int rows = a.rows(), cols = a.cols();
  ElementaryNorms e;
  RVec rn(rows);
  for (int i = 0; i < rows; ++i) rn(i) = m.row(i).norm();
  switch (a.convention) {
    case NormConvention::counting:
      e.two_to_two = Eigen::JacobiSVD<CMat>(m).singularValues()(0);
      e.two_to_infty = rn.maxCoeff();
      break;
    case NormConvention::expectation:
      e.two_to_two = Eigen::JacobiSVD<CMat>(m).singularValues()(0) * std::sqrt(static_cast<double>(cols) / rows);
      e.two_to_infty = rn.maxCoeff() * std::sqrt(static_cast<double>(cols));
      break;
    case NormConvention::measure: {
      CMat wm = a.measure.cwiseSqrt().cast<cplx>().asDiagonal() * m;
      e.two_to_two = Eigen::JacobiSVD<CMat>(wm).singularValues()(0);
      double mx = 0;
      for (int i = 0; i < rows; ++i)
        if (a.measure(i) > 0) mx = std::max(mx, rn(i));
      e.two_to_infty = mx;
      break;
    }
  }
  e.z = e.two_to_two * e.two_to_two * e.two_to_infty * e.two_to_infty;
  return e;
}

}  // namespace hypernorm
