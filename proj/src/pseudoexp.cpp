#include "hypernorm/pseudoexp.hpp"

#include <bit>
#include <cmath>

#include "hypernorm/graph.hpp"
#include "hypernorm/linalg.hpp"
#include "hypernorm/moment.hpp"

namespace hypernorm {

double PseudoExpectation::moment(const MultiIndex& a) const {
  auto it = moments.find(a);
  require(it != moments.end(), "pseudo-expectation: monomial degree exceeds the level");
  return it->second;
}

PseudoExpectation PseudoExpectation::from_distribution(const std::vector<RVec>& points, const std::vector<double>& weights,
                                                       int level) {
  require(!points.empty() && points.size() == weights.size(), "from_distribution: points/weights mismatch");
  PseudoExpectation pe;
  pe.n = static_cast<int>(points[0].size());
  pe.level = level;
  double total = 0;
  for (double w : weights) {
    require(w >= 0, "from_distribution: negative weight");
    total += w;
  }
  require(total > 0, "from_distribution: zero total weight");
  for (const MultiIndex& a : monomial_basis(pe.n, level)) {
    double s = 0;
    for (size_t k = 0; k < points.size(); ++k) {
      double v = weights[k];
      for (int i = 0; i < pe.n; ++i)
        if (a[i]) v *= std::pow(points[k](i), a[i]);
      s += v;
    }
    pe.moments[a] = s / total;
  }
  return pe;
}

RMat PseudoExpectation::moment_matrix() const {
  auto basis = monomial_basis(n, level / 2);
  int nb = static_cast<int>(basis.size());
  RMat m(nb, nb);
  for (int a = 0; a < nb; ++a)
    for (int b = a; b < nb; ++b) m(a, b) = m(b, a) = moment(basis[a] + basis[b]);
  return m;
}

RMat PseudoExpectation::localized_moment_matrix(const Polynomial& g) const {
  int dg = g.degree();
  require(dg <= level, "localized moment matrix: localizer degree exceeds the level");
  auto basis = monomial_basis(n, (level - dg) / 2);
  int nb = static_cast<int>(basis.size());
  RMat m = RMat::Zero(nb, nb);
  for (int a = 0; a < nb; ++a)
    for (int b = a; b < nb; ++b) {
      double s = 0;
      for (const auto& [gamma, c] : g.terms()) s += c * moment(gamma + basis[a] + basis[b]);
      m(a, b) = m(b, a) = s;
    }
  return m;
}

double pseudo_expect(const PseudoExpectation& pe, const Polynomial& p) {
  require(p.degree() <= pe.level, "pseudo_expect: polynomial degree exceeds the level");
  double s = 0;
  for (const auto& [a, c] : p.terms()) s += c * pe.moment(a);
  return s;
}

PefReport validate_pef(const PseudoExpectation& pe, double tol) {
  PefReport r;
  r.normalization_residual = std::abs(pe.moment(MultiIndex(pe.n, 0)) - 1.0);
  r.min_eig = lambda_min(pe.moment_matrix());
  for (const Polynomial& p : pe.constraints) {
    int dp = p.degree();
    if (dp > pe.level) continue;
    for (const MultiIndex& g : monomial_basis(pe.n, pe.level - dp)) {
      double s = 0;
      for (const auto& [a, c] : p.terms()) s += c * pe.moment(a + g);
      r.constraint_residual = std::max(r.constraint_residual, std::abs(s));
    }
  }
  r.pass = r.min_eig >= -tol && r.normalization_residual <= tol && r.constraint_residual <= tol;
  return r;
}

bool check_pseudo_cauchy_schwarz(const PseudoExpectation& pe, const Polynomial& p, const Polynomial& q, double tol) {
  require(2 * p.degree() <= pe.level && 2 * q.degree() <= pe.level, "pseudo Cauchy-Schwarz: degree exceeds level/2");
  double pq = pseudo_expect(pe, p * q);
  double pp = std::max(0.0, pseudo_expect(pe, p * p));
  double qq = std::max(0.0, pseudo_expect(pe, q * q));
  return std::abs(pq) <= std::sqrt(pp * qq) + tol;
}

namespace {

Polynomial extend_vars(const Polynomial& p, int n_new) {
  Polynomial out(n_new);
  for (const auto& [a, c] : p.terms()) {
    MultiIndex b = a;
    b.resize(n_new, 0);
    out.add_term(b, c);
  }
  return out;
}

MultiIndex multilinear_index_sum(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex s = a + b;
  for (int& e : s) e %= 2;
  return s;
}

}  // namespace

PseudoExpectation rounded_moments(const PseudoExpectation& pe, int i) {
  require(i >= 0 && i < pe.n, "rounding: variable index out of range");
  PseudoExpectation out;
  out.n = pe.n + 1;
  out.level = pe.level;
  for (const MultiIndex& a : monomial_basis(out.n, out.level)) {
    MultiIndex b(a.begin(), a.end() - 1);
    if (a.back() > 0) b[i] += 1;  // fbar^k -> fbar -> f_i
    out.moments[a] = pe.moment(b);
  }
  for (const Polynomial& p : pe.constraints) out.constraints.push_back(extend_vars(p, out.n));
  Polynomial fbar = Polynomial::variable(out.n, pe.n);
  out.constraints.push_back(fbar * fbar - fbar);
  return out;
}

PseudoExpectation adjoin_rounded_variable(const PseudoExpectation& pe, int i, const std::optional<RoundingWitness>& witness,
                                          double tol) {
  require(pe.level == 4, "rounding: requires a level-4 pseudo-expectation");
  require(witness.has_value(), "rounding: precondition witness for f_i^2 <= f_i missing");
  Polynomial fi = Polynomial::variable(pe.n, i);
  Polynomial slack = fi - fi * fi;
  if (witness->kind == RoundingWitness::Kind::localized_moment) {
    require(lambda_min(pe.localized_moment_matrix(slack)) >= -tol,
            "rounding: localized moment matrix of f_i - f_i^2 is not PSD");
  } else {
    require(witness->multipliers.size() <= pe.constraints.size(), "rounding: more multipliers than constraints");
    Polynomial rest = slack;
    for (const Polynomial& s : witness->squares) rest -= s * s;
    for (size_t k = 0; k < witness->multipliers.size(); ++k) rest -= witness->multipliers[k] * pe.constraints[k];
    require(rest.max_abs_coeff() <= tol, "rounding: SOS witness does not reproduce f_i - f_i^2");
  }
  PseudoExpectation out = rounded_moments(pe, i);
  double me = lambda_min(out.moment_matrix());
  require(me >= -tol, "rounding: output moment matrix not PSD (min eig " + std::to_string(me) + ")");
  return out;
}

LasserreReport lasserre_roundtrip(const RegularGraph& g, double tol) {
  int n = g.n;
  require(n >= 2 && n <= 8, "lasserre roundtrip: need 2 <= |V| <= 8");
  require(g.edge_count() > 0, "lasserre roundtrip: graph has no edges");
  double inv_e = 1.0 / g.edge_count();
  SdpOptions so;
  so.tol = std::min(1e-7, tol);

  // Level-2 Lasserre vectors v_S, |S| <= 2: <v_S, v_T> depends only on S xor T, ||v_empty|| = 1.
  auto subsets = low_degree_subsets(n, 2);
  int ns = static_cast<int>(subsets.size());
  SdpProblem lp;
  lp.add_block(ns);
  std::map<unsigned, std::pair<int, int>> rep;
  for (int c = 0; c < ns; ++c)
    for (int r = 0; r <= c; ++r) {
      auto [it, inserted] = rep.emplace(subsets[r] ^ subsets[c], std::make_pair(r, c));
      if (!inserted) lp.add_constraint({{0, r, c, 1.0}, {0, it->second.first, it->second.second, -1.0}}, 0.0);
    }
  lp.add_constraint({{0, 0, 0, 1.0}}, 1.0);
  std::vector<int> single(n);
  for (int s = 0; s < ns; ++s)
    if (std::popcount(subsets[s]) == 1) single[std::countr_zero(subsets[s])] = s;
  double lconst = 0;
  for (auto [u, v] : g.edges) {
    lconst += 0.5 * inv_e;
    lp.objective.push_back({0, single[u], single[v], -0.5 * inv_e});
  }
  SdpSolution ls = solve_sdp(lp, so);
  if (ls.status != SdpStatus::optimal) throw SolverError("lasserre roundtrip: Lasserre SDP did not converge");

  // Degree-4 SoS over the cube ideal.
  Polynomial obj(n);
  for (auto [u, v] : g.edges) {
    Polynomial d = Polynomial::variable(n, u) - Polynomial::variable(n, v);
    obj += d * d * (0.25 * inv_e);
  }
  MomentProgram mp = build_moment_program(obj, n, 4, IdealKind::cube);
  SdpSolution ss = solve_sdp(mp.sdp, so);
  if (ss.status != SdpStatus::optimal) throw SolverError("lasserre roundtrip: SoS SDP did not converge");

  LasserreReport rep_out;
  const RMat& xl = ls.X[0];
  rep_out.lasserre_value = ls.primal_obj + lconst;
  rep_out.sos_value = ss.primal_obj;

  // Lasserre -> SoS: y_alpha = <v_T, v_U> with T xor U the multilinear reduction of alpha.
  auto entry_of = [&](unsigned mask) {
    auto it = rep.find(mask);
    if (it != rep.end()) return 0.5 * (xl(it->second.first, it->second.second) + xl(it->second.second, it->second.first));
    // |mask| = 3 or 4: split into two disjoint halves of size <= 2.
    unsigned lo = 0, m = mask;
    for (int k = 0; k < 2; ++k) {
      lo |= m & (~m + 1);
      m &= m - 1;
    }
    int a = -1, b = -1;
    for (int s = 0; s < ns; ++s) {
      if (subsets[s] == lo) a = s;
      if (subsets[s] == (mask ^ lo)) b = s;
    }
    return xl(a, b);
  };
  PseudoExpectation pe_l;
  pe_l.n = n;
  pe_l.level = 4;
  for (const MultiIndex& a : monomial_basis(n, 4)) {
    unsigned mask = 0;
    for (int i = 0; i < n; ++i)
      if (a[i] % 2) mask |= 1u << i;
    pe_l.moments[a] = entry_of(mask);
  }
  pe_l.constraints = mp.generators();
  rep_out.converted_sos_value = pseudo_expect(pe_l, obj);
  rep_out.lasserre_to_sos_min_eig = validate_pef(pe_l, tol).min_eig;

  // SoS -> Lasserre: Gram-factor the multilinear block of the moment matrix.
  PseudoExpectation pe_s = extract_pseudo_expectation(mp, ss.X);
  RMat ms(ns, ns);
  auto mono = [&](unsigned mask) {
    MultiIndex a(n, 0);
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) a[i] = 1;
    return a;
  };
  for (int r = 0; r < ns; ++r)
    for (int c = 0; c < ns; ++c) ms(r, c) = pe_s.moment(multilinear_index_sum(mono(subsets[r]), mono(subsets[c])));
  RMat vecs = gram_factor(ms, 1e-6);
  RMat gram = vecs.transpose() * vecs;
  double resid = std::abs(gram(0, 0) - 1.0);
  for (int c = 0; c < ns; ++c)
    for (int r = 0; r <= c; ++r) {
      auto [rr, rc] = rep.at(subsets[r] ^ subsets[c]);
      resid = std::max(resid, std::abs(gram(r, c) - gram(rr, rc)));
    }
  rep_out.sos_to_lasserre_constraint_residual = resid;
  double cv = 0;
  for (auto [u, v] : g.edges) cv += inv_e * 0.5 * (1.0 - gram(single[u], single[v]));
  rep_out.converted_lasserre_value = cv;

  // Round trip Lasserre -> moments -> Gram entries.
  double disc = 0;
  for (int r = 0; r < ns; ++r)
    for (int c = 0; c < ns; ++c)
      disc = std::max(disc, std::abs(pe_l.moment(multilinear_index_sum(mono(subsets[r]), mono(subsets[c]))) - xl(r, c)));
  rep_out.max_moment_discrepancy = disc;
  return rep_out;
}

nlohmann::json pe_to_json(const PseudoExpectation& pe) {
  nlohmann::json j;
  j["n"] = pe.n;
  j["level"] = pe.level;
  j["moments"] = nlohmann::json::array();
  for (const auto& [a, v] : pe.moments) j["moments"].push_back({{"alpha", a}, {"value", v}});
  if (!pe.constraints.empty()) {
    j["constraints"] = nlohmann::json::array();
    for (const Polynomial& p : pe.constraints) {
      nlohmann::json terms = nlohmann::json::array();
      for (const auto& [a, c] : p.terms()) terms.push_back({{"alpha", a}, {"coeff", c}});
      j["constraints"].push_back(terms);
    }
  }
  return j;
}

PseudoExpectation pe_from_json(const nlohmann::json& j) {
  PseudoExpectation pe;
  try {
    pe.n = j.at("n").get<int>();
    pe.level = j.at("level").get<int>();
    for (const auto& m : j.at("moments")) {
      MultiIndex a = m.at("alpha").get<MultiIndex>();
      require(static_cast<int>(a.size()) == pe.n, "pseudo-expectation json: alpha has wrong length");
      pe.moments[a] = m.at("value").get<double>();
    }
    if (j.contains("constraints"))
      for (const auto& terms : j["constraints"]) {
        Polynomial p(pe.n);
        for (const auto& t : terms) p.add_term(t.at("alpha").get<MultiIndex>(), t.at("coeff").get<double>());
        pe.constraints.push_back(p);
      }
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("pseudo-expectation json: ") + e.what());
  }
  for (const MultiIndex& a : monomial_basis(pe.n, pe.level))
    require(pe.moments.count(a), "pseudo-expectation json: missing moments");
  return pe;
}

}  // namespace hypernorm
