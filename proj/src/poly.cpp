#include "hypernorm/poly.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace hypernorm {

int degree(const MultiIndex& a) {
  int d = 0;
  for (int e : a) d += e;
  return d;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  require(a.size() == b.size(), "multi-index size mismatch");
  MultiIndex c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

MultiIndex unit_index(int n, int i, int power) {
  MultiIndex a(n, 0);
  a[i] = power;
  return a;
}

bool GradedLex::operator()(const MultiIndex& a, const MultiIndex& b) const {
  int da = degree(a), db = degree(b);
  if (da != db) return da < db;
  // larger leading exponent sorts first
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<MultiIndex> homogeneous_basis(int n, int k) {
  std::vector<MultiIndex> out;
  MultiIndex cur(n, 0);
  // Enumerate in descending lex: first coordinate takes the largest value first.
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == n - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[pos] = e;
      rec(pos + 1, left - e);
    }
    cur[pos] = 0;
  };
  if (n == 0) {
    if (k == 0) out.push_back(cur);
    return out;
  }
  rec(0, k);
  return out;
}

std::vector<MultiIndex> monomial_basis(int n, int r) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= r; ++k) {
    auto h = homogeneous_basis(n, k);
    out.insert(out.end(), h.begin(), h.end());
  }
  return out;
}

double multinomial(const MultiIndex& a) {
  double v = std::tgamma(degree(a) + 1.0);
  for (int e : a) v /= std::tgamma(e + 1.0);
  return std::round(v);
}

Polynomial Polynomial::constant(int n, double c) {
  Polynomial p(n);
  p.add_term(MultiIndex(n, 0), c);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& a, double c) {
  Polynomial p(static_cast<int>(a.size()));
  p.add_term(a, c);
  return p;
}

Polynomial Polynomial::variable(int n, int i) { return monomial(unit_index(n, i)); }

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [a, c] : terms_) d = std::max(d, hypernorm::degree(a));
  return d;
}

double Polynomial::coeff(const MultiIndex& a) const {
  auto it = terms_.find(a);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const MultiIndex& a, double c) {
  require(static_cast<int>(a.size()) == n_, "polynomial: variable count mismatch");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(a, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (n_ == 0 && terms_.empty()) n_ = o.n_;
  for (const auto& [a, c] : o.terms_) add_term(a, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (n_ == 0 && terms_.empty()) n_ = o.n_;
  for (const auto& [a, c] : o.terms_) add_term(a, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [a, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out(std::max(a.n_vars(), b.n_vars()));
  for (const auto& [x, cx] : a.terms())
    for (const auto& [y, cy] : b.terms()) out.add_term(x + y, cx * cy);
  return out;
}

Polynomial pow(const Polynomial& p, int k) {
  Polynomial out = Polynomial::constant(p.n_vars(), 1.0);
  for (int i = 0; i < k; ++i) out = out * p;
  return out;
}

double Polynomial::evaluate(const RVec& x) const {
  require(x.size() == n_, "polynomial: evaluation point has wrong dimension");
  double acc = 0;
  for (const auto& [a, c] : terms_) {
    double t = c;
    for (int i = 0; i < n_; ++i)
      if (a[i]) t *= std::pow(x(i), a[i]);
    acc += t;
  }
  return acc;
}

double Polynomial::max_abs_coeff() const {
  double m = 0;
  for (const auto& [a, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

Polynomial Polynomial::pruned(double tol) const {
  Polynomial out(n_);
  for (const auto& [a, c] : terms_)
    if (std::abs(c) > tol) out.add_term(a, c);
  return out;
}

Polynomial sphere_constraint(int n) {
  Polynomial p = Polynomial::constant(n, -1.0);
  for (int i = 0; i < n; ++i) p.add_term(unit_index(n, i, 2), 1.0);
  return p;
}

Polynomial objective_expand(const OperatorInstance& inst) {
  require(inst.is_real(), "objective_expand: operator must be real (realify complex operators first)");
  RMat a = inst.real();
  RVec w = inst.row_weights(4.0);
  int n = inst.cols();
  Polynomial p(n);
  for (const MultiIndex& alpha : homogeneous_basis(n, 4)) {
    double mult = multinomial(alpha);
    double acc = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      double t = w(i);
      for (int j = 0; j < n && t != 0.0; ++j)
        if (alpha[j]) t *= std::pow(a(i, j), alpha[j]);
      acc += t;
    }
    p.add_term(alpha, mult * acc);
  }
  return p;
}

Polynomial multilinear_reduce(const Polynomial& p) {
  Polynomial out(p.n_vars());
  for (const auto& [a, c] : p.terms()) {
    MultiIndex r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] % 2;
    out.add_term(r, c);
  }
  return out;
}

double character(unsigned alpha, unsigned point) { return (std::popcount(alpha & point) & 1u) ? -1.0 : 1.0; }

FourierFunction FourierFunction::from_values(int l, const RVec& values) {
  require(l >= 0 && l <= 12, "fourier: cube dimension must be in [0, 12]");
  unsigned size = 1u << l;
  require(values.size() == static_cast<Eigen::Index>(size), "fourier: value vector has wrong length");
  FourierFunction f;
  f.l = l;
  f.coeffs = RVec::Zero(size);
  for (unsigned a = 0; a < size; ++a) {
    double acc = 0;
    for (unsigned x = 0; x < size; ++x) acc += values(x) * character(a, x);
    f.coeffs(a) = acc / size;
  }
  return f;
}

RVec FourierFunction::values() const {
  unsigned size = 1u << l;
  RVec v = RVec::Zero(size);
  for (unsigned x = 0; x < size; ++x)
    for (unsigned a = 0; a < size; ++a) v(x) += coeffs(a) * character(a, x);
  return v;
}

double FourierFunction::expectation_norm(double p) const {
  return vec_norm(values(), p, NormConvention::expectation);
}

int FourierFunction::degree() const {
  int d = 0;
  for (unsigned a = 0; a < (1u << l); ++a)
    if (coeffs(a) != 0.0) d = std::max(d, std::popcount(a));
  return d;
}

std::vector<unsigned> low_degree_subsets(int l, int d) {
  std::vector<unsigned> out;
  for (int k = 0; k <= d; ++k)
    for (unsigned a = 0; a < (1u << l); ++a)
      if (std::popcount(a) == k) out.push_back(a);
  return out;
}

RMat character_matrix(int l, int d) {
  require(l >= 0 && l <= 12, "character_matrix: cube dimension must be in [0, 12]");
  require(d >= 0 && d <= l, "character_matrix: degree must be in [0, l]");
  auto subsets = low_degree_subsets(l, d);
  RMat c(1 << l, subsets.size());
  for (unsigned x = 0; x < (1u << l); ++x)
    for (size_t k = 0; k < subsets.size(); ++k) c(x, k) = character(subsets[k], x);
  return c;
}

RMat low_degree_projector(int l, int d) {
  RMat c = character_matrix(l, d);
  return c * c.transpose() / static_cast<double>(1 << l);
}

}  // namespace hypernorm
