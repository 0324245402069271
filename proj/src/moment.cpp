#include "hypernorm/moment.hpp"

#include "hypernorm/linalg.hpp"

namespace hypernorm {

std::vector<Polynomial> MomentProgram::generators() const {
  std::vector<Polynomial> g;
  if (ideal == IdealKind::sphere) {
    g.push_back(sphere_constraint(n));
  } else {
    for (int i = 0; i < n; ++i) g.push_back(Polynomial::monomial(unit_index(n, i, 2)) - Polynomial::constant(n, 1.0));
  }
  return g;
}

MomentProgram build_moment_program(const Polynomial& objective, int n, int level, IdealKind ideal) {
  require(n >= 1, "moment program: need at least one variable");
  require(level >= 2 && level % 2 == 0, "moment program: level must be even and >= 2");
  require(objective.degree() <= level, "moment program: objective degree exceeds the level");
  require(objective.n_vars() == n || objective.terms().empty(), "moment program: objective has wrong variable count");
  MomentProgram mp;
  mp.n = n;
  mp.level = level;
  mp.ideal = ideal;
  mp.objective = objective;
  mp.basis = monomial_basis(n, level / 2);
  int nb = static_cast<int>(mp.basis.size());
  mp.sdp.add_block(nb);

  for (int c = 0; c < nb; ++c)
    for (int r = 0; r <= c; ++r) {
      MultiIndex a = mp.basis[r] + mp.basis[c];
      auto [it, inserted] = mp.rep.emplace(a, std::make_pair(r, c));
      if (!inserted) {
        auto [rr, rc] = it->second;
        mp.sdp.add_constraint({{0, r, c, 1.0}, {0, rr, rc, -1.0}}, 0.0);
      }
    }
  mp.normalization_row = mp.sdp.add_constraint({{0, 0, 0, 1.0}}, 1.0);

  auto entry = [&](const MultiIndex& a, double v) {
    auto [r, c] = mp.rep.at(a);
    return SdpEntry{0, r, c, v};
  };
  for (const auto& [a, coef] : objective.terms()) mp.sdp.objective.push_back(entry(a, coef));

  if (ideal == IdealKind::sphere) {
    for (const MultiIndex& g : monomial_basis(n, level - 2)) {
      LinearForm f;
      for (int i = 0; i < n; ++i) f.push_back(entry(g + unit_index(n, i, 2), 1.0));
      f.push_back(entry(g, -1.0));
      int row = mp.sdp.add_constraint(std::move(f), 0.0);
      mp.ideal_rows.push_back({0, g, row});
    }
    mp.trace_bound = level / 2 + 1;
  } else {
    // (x_i^2 - 1) x^gamma with i the first index where x^alpha = x_i^2 x^gamma has a square:
    // one row per non-multilinear monomial, so the rows are independent.
    for (const auto& [a, rc] : mp.rep) {
      int i = 0;
      while (i < n && a[i] < 2) ++i;
      if (i == n) continue;
      MultiIndex g = a;
      g[i] -= 2;
      int row = mp.sdp.add_constraint({entry(a, 1.0), entry(g, -1.0)}, 0.0);
      mp.ideal_rows.push_back({i, g, row});
    }
    mp.trace_bound = nb;
  }
  return mp;
}

PseudoExpectation extract_pseudo_expectation(const MomentProgram& mp, const std::vector<RMat>& x) {
  std::map<MultiIndex, std::pair<double, int>, GradedLex> acc;
  int nb = static_cast<int>(mp.basis.size());
  for (int c = 0; c < nb; ++c)
    for (int r = 0; r <= c; ++r) {
      auto& slot = acc[mp.basis[r] + mp.basis[c]];
      slot.first += 0.5 * (x[0](r, c) + x[0](c, r));
      slot.second += 1;
    }
  PseudoExpectation pe;
  pe.n = mp.n;
  pe.level = mp.level;
  for (const auto& [a, s] : acc) pe.moments[a] = s.first / s.second;
  pe.constraints = mp.generators();
  return pe;
}

SosCertificate sphere_sos_certificate(const MomentProgram& mp, const DualCertificate& cert) {
  require(mp.ideal == IdealKind::sphere, "sos certificate: only the sphere ideal is supported");
  int n = mp.n, nb = static_cast<int>(mp.basis.size());
  SosCertificate out;
  out.bound = cert.bound;
  double t = cert.shift;
  out.gram = cert.slack[0];
  for (int a = 0; a < nb; ++a) out.gram(a, a) += t * multinomial(mp.basis[a]);
  RMat r = gram_factor(out.gram, 1e-8);

  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    Polynomial p(n);
    for (int a = 0; a < nb; ++a) p.add_term(mp.basis[a], r(i, a));
    out.squares.push_back(p);
  }

  Polynomial q(n);
  for (const auto& row : mp.ideal_rows) q.add_term(row.gamma, -cert.y(row.row));
  Polynomial norm2 = sphere_constraint(n) + Polynomial::constant(n, 1.0);
  Polynomial powsum(n), pw = Polynomial::constant(n, 1.0);
  for (int k = 1; k <= mp.level / 2; ++k) {
    powsum += pw * static_cast<double>(mp.level / 2 - k + 1);  // ||x||^{2j} appears for every k > j
    pw = pw * norm2;
  }
  q -= powsum * t;
  out.multiplier = q;

  // Re-expand: sum_i R_i^2 = m' (R'R) m.
  RMat g2 = r.transpose() * r;
  Polynomial rhs(n);
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b) rhs.add_term(mp.basis[a] + mp.basis[b], g2(a, b));
  rhs += sphere_constraint(n) * q;
  Polynomial lhs = Polynomial::constant(n, cert.bound) - mp.objective;
  out.residual = (lhs - rhs).max_abs_coeff();
  return out;
}

}  // namespace hypernorm
