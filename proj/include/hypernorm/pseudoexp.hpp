#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <vector>

#include "hypernorm/poly.hpp"

namespace hypernorm {

struct RegularGraph;

// Level-r pseudo-expectation: moments of every monomial of degree <= r.
struct PseudoExpectation {
  int n = 0;
  int level = 0;
  std::map<MultiIndex, double, GradedLex> moments;
  std::vector<Polynomial> constraints;  // equalities P = 0 it claims to satisfy

  double moment(const MultiIndex& a) const;
  // True expectation over a finite distribution (weights are normalized).
  static PseudoExpectation from_distribution(const std::vector<RVec>& points, const std::vector<double>& weights, int level);

  // M[a,b] = E x^{a+b}, |a|,|b| <= level/2.
  RMat moment_matrix() const;
  // M_g[a,b] = E g x^{a+b}, |a|,|b| <= (level - deg g)/2.
  RMat localized_moment_matrix(const Polynomial& g) const;
};

double pseudo_expect(const PseudoExpectation& pe, const Polynomial& p);

struct PefReport {
  double normalization_residual = 0;
  double min_eig = 0;
  double constraint_residual = 0;  // max |E P_i x^gamma|
  bool pass = false;
};

PefReport validate_pef(const PseudoExpectation& pe, double tol = 1e-8);

bool check_pseudo_cauchy_schwarz(const PseudoExpectation& pe, const Polynomial& p, const Polynomial& q, double tol = 1e-8);

// Certificate that f_i^2 <= f_i holds for the pseudo-distribution.
struct RoundingWitness {
  enum class Kind { localized_moment, sos } kind = Kind::localized_moment;
  // Kind::sos: f_i - f_i^2 = sum_j squares[j]^2 + sum_k multipliers[k] * pe.constraints[k]
  std::vector<Polynomial> squares;
  std::vector<Polynomial> multipliers;
};

// Moments of the rounded variable appended as variable n: fbar^2 reduced to fbar, then fbar -> f_i.
PseudoExpectation rounded_moments(const PseudoExpectation& pe, int i);

// Checked version: requires level 4, a witness, and a PSD output.
PseudoExpectation adjoin_rounded_variable(const PseudoExpectation& pe, int i, const std::optional<RoundingWitness>& witness,
                                          double tol = 1e-8);

struct LasserreReport {
  double lasserre_value = 0;
  double sos_value = 0;
  double converted_sos_value = 0;       // Lasserre solution read as a pseudo-expectation
  double converted_lasserre_value = 0;  // SoS solution Gram-factored into vectors
  double max_moment_discrepancy = 0;
  double lasserre_to_sos_min_eig = 0;
  double sos_to_lasserre_constraint_residual = 0;
};

// Level-2 Lasserre vectors vs degree-4 SoS for Max Cut with objective (1/|E|) sum (x_i - x_j)^2 / 4.
LasserreReport lasserre_roundtrip(const RegularGraph& g, double tol = 1e-8);

nlohmann::json pe_to_json(const PseudoExpectation& pe);
PseudoExpectation pe_from_json(const nlohmann::json& j);

}  // namespace hypernorm
