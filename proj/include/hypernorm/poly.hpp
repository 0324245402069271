#pragma once

#include <map>
#include <vector>

#include "hypernorm/operator.hpp"

namespace hypernorm {

// Exponent vector over n variables.
using MultiIndex = std::vector<int>;

int degree(const MultiIndex& a);
MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
MultiIndex unit_index(int n, int i, int power = 1);

// Graded lexicographic order: lower total degree first; within a degree x1 > x2 > ... (x1^2 before x1 x2).
struct GradedLex {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

// All exponent vectors with |alpha| <= r in graded-lex order.
std::vector<MultiIndex> monomial_basis(int n, int r);
// Exactly degree k.
std::vector<MultiIndex> homogeneous_basis(int n, int k);

// Number of orderings of a multiset with multiplicities alpha: |alpha|! / prod alpha_i!.
double multinomial(const MultiIndex& a);

class Polynomial {
 public:
  using Terms = std::map<MultiIndex, double, GradedLex>;

  Polynomial() = default;
  explicit Polynomial(int n_vars) : n_(n_vars) {}
  static Polynomial constant(int n, double c);
  static Polynomial monomial(const MultiIndex& a, double c = 1.0);
  static Polynomial variable(int n, int i);

  int n_vars() const { return n_; }
  int degree() const;
  const Terms& terms() const { return terms_; }
  double coeff(const MultiIndex& a) const;

  void add_term(const MultiIndex& a, double c);
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  double evaluate(const RVec& x) const;
  double max_abs_coeff() const;
  // Drops coefficients with |c| <= tol.
  Polynomial pruned(double tol) const;

 private:
  int n_ = 0;
  Terms terms_;
};

Polynomial pow(const Polynomial& p, int k);

// ||x||_2^2 - 1.
Polynomial sphere_constraint(int n);

// sum_i w_i <a_i, x>^4 with w_i from the instance's norm convention (x on the counting unit sphere).
Polynomial objective_expand(const OperatorInstance& a);

// Replaces x_i^2 by 1 repeatedly; result agrees with the input on {-1,1}^n.
Polynomial multilinear_reduce(const Polynomial& p);

// Boolean cube {-1,1}^l. Points are bitmasks b (bit k set means x_k = -1);
// subsets alpha are bitmasks too; chi_alpha(x) = prod_{k in alpha} x_k.
struct FourierFunction {
  int l = 0;
  RVec coeffs;  // length 2^l, indexed by subset mask

  static FourierFunction from_values(int l, const RVec& values);
  RVec values() const;
  double expectation_norm(double p) const;
  int degree() const;
};

double character(unsigned alpha, unsigned point);
// Subsets of [l] with |alpha| <= d, ordered by size then mask.
std::vector<unsigned> low_degree_subsets(int l, int d);

// P_d as a 2^l x 2^l matrix acting on value vectors.
RMat low_degree_projector(int l, int d);

// 2^l x N matrix of characters chi_alpha(x), |alpha| <= d; maps Fourier coefficients to values.
RMat character_matrix(int l, int d);

}  // namespace hypernorm
