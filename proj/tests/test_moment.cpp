#include <gtest/gtest.h>

#include "hypernorm/moment.hpp"
#include "hypernorm/tensor_sdp.hpp"

using namespace hypernorm;

TEST(MomentProgram, SphereQuarticOfOneVariable) {
  // max x1^4 on the circle is 1.
  Polynomial p = Polynomial::monomial({4, 0});
  TensorSdpOptions o;
  o.tol = 1e-9;
  TensorSdpResult r = sphere_sdp(p, 2, 4, o);
  EXPECT_NEAR(r.value, 1.0, 1e-6);
  EXPECT_GE(r.bound, r.value - 1e-9);
  EXPECT_LT(r.sos_residual, 1e-6);
  EXPECT_TRUE(r.pe_report.pass);
}

TEST(MomentProgram, StructureOfLevelFour) {
  MomentProgram mp = build_moment_program(Polynomial::monomial({2, 2}), 2, 4, IdealKind::sphere);
  EXPECT_EQ(mp.basis.size(), 6u);
  EXPECT_EQ(mp.sdp.blocks.size(), 1u);
  EXPECT_GT(mp.trace_bound, 0);
  EXPECT_GE(mp.normalization_row, 0);
}

TEST(MomentProgram, CubeIdealMaxCutTriangle) {
  // max over {-1,1}^3 of (3 - x1x2 - x2x3 - x1x3)/4 is 1; level 4 is tight.
  Polynomial p = Polynomial::constant(3, 0.75);
  p.add_term({1, 1, 0}, -0.25);
  p.add_term({0, 1, 1}, -0.25);
  p.add_term({1, 0, 1}, -0.25);
  MomentProgram mp = build_moment_program(p, 3, 4, IdealKind::cube);
  SdpOptions o;
  o.tol = 1e-9;
  SdpSolution s = solve_sdp(mp.sdp, o);
  EXPECT_NEAR(s.primal_obj, 1.0, 1e-5);
  PseudoExpectation pe = extract_pseudo_expectation(mp, s.X);
  EXPECT_NEAR(pe.moment({0, 0, 0}), 1.0, 1e-6);
  EXPECT_NEAR(pe.moment({2, 0, 0}), 1.0, 1e-6);
}

TEST(SosCertificate, IdentityReexpands) {
  Polynomial p = Polynomial::monomial({4, 0}) + Polynomial::monomial({2, 2}) * 3.0 + Polynomial::monomial({0, 4}) * 0.5;
  MomentProgram mp = build_moment_program(p, 2, 4, IdealKind::sphere);
  SdpOptions o;
  o.tol = 1e-10;
  SdpSolution s = solve_sdp(mp.sdp, o);
  DualCertificate c = certified_upper_bound(mp.sdp, s, mp.trace_bound);
  SosCertificate sos = sphere_sos_certificate(mp, c);
  EXPECT_LT(sos.residual, 1e-6);
  EXPECT_GE(sos.bound, s.primal_obj - 1e-9);
}
