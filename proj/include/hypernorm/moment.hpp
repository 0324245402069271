#pragma once

#include <map>
#include <utility>
#include <vector>

#include "hypernorm/poly.hpp"
#include "hypernorm/pseudoexp.hpp"
#include "hypernorm/sdp.hpp"

namespace hypernorm {

// sphere: ||x||^2 = 1.  cube: x_i^2 = 1 for every i.
enum class IdealKind { sphere, cube };

// Moment relaxation of  max E P0  over level-d pseudo-expectations satisfying the ideal.
// One PSD block indexed by monomials of degree <= d/2; entries sharing a monomial are tied to a
// representative entry, E 1 = 1, and E[g x^gamma] = 0 for the ideal generators.
struct MomentProgram {
  int n = 0;
  int level = 0;
  IdealKind ideal = IdealKind::sphere;
  Polynomial objective;
  std::vector<MultiIndex> basis;
  std::map<MultiIndex, std::pair<int, int>, GradedLex> rep;
  SdpProblem sdp;
  int normalization_row = -1;
  struct IdealRow {
    int generator;
    MultiIndex gamma;
    int row;
  };
  std::vector<IdealRow> ideal_rows;
  double trace_bound = 0;  // valid bound on tr X over the feasible set

  std::vector<Polynomial> generators() const;
};

MomentProgram build_moment_program(const Polynomial& objective, int n, int level, IdealKind ideal);

// Moments read off a primal solution (entries of one monomial averaged).
PseudoExpectation extract_pseudo_expectation(const MomentProgram& mp, const std::vector<RMat>& x);

// Explicit identity  bound - P0 = sum_i R_i(x)^2 + (||x||^2 - 1) q(x)  from a dual certificate.
struct SosCertificate {
  double bound = 0;
  RMat gram;                       // Gram matrix over the moment basis (PSD)
  std::vector<Polynomial> squares; // R_i
  Polynomial multiplier;           // q
  double residual = 0;             // max coefficient of the re-expanded difference
};

SosCertificate sphere_sos_certificate(const MomentProgram& mp, const DualCertificate& cert);

}  // namespace hypernorm
