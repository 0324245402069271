#include "hypernorm/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "hypernorm/linalg.hpp"
#include "hypernorm/tensor_sdp.hpp"

namespace hypernorm {

RegularGraph RegularGraph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
  require(n >= 1, "graph: need at least one vertex");
  std::vector<int> deg(n, 0);
  for (auto [u, v] : edges) {
    require(u >= 0 && u < n && v >= 0 && v < n, "graph: edge endpoint out of range");
    deg[u] += 1;
    deg[v] += 1;
  }
  for (int v = 1; v < n; ++v) require(deg[v] == deg[0], "graph: not regular (vertex degrees differ)");
  require(deg[0] > 0, "graph: vertices have degree zero");
  RegularGraph g;
  g.n = n;
  g.degree = deg[0];
  g.edges = std::move(edges);
  return g;
}

RegularGraph RegularGraph::parse(const std::string& text) {
  std::istringstream in(text);
  long n = 0, m = 0;
  require(static_cast<bool>(in >> n >> m), "graph file: missing header \"n m\"");
  require(n >= 1 && n <= 1 << 20 && m >= 0, "graph file: bad header");
  std::vector<std::pair<int, int>> e;
  for (long k = 0; k < m; ++k) {
    long u, v;
    require(static_cast<bool>(in >> u >> v), "graph file: fewer edges than declared");
    require(u >= 0 && u < n && v >= 0 && v < n, "graph file: edge endpoint out of range");
    e.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  return from_edges(static_cast<int>(n), std::move(e));
}

RegularGraph RegularGraph::read_file(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), "cannot open graph file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

RegularGraph RegularGraph::cycle(int n) {
  require(n >= 3, "cycle: need n >= 3");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return from_edges(n, e);
}

RegularGraph RegularGraph::complete(int n) {
  require(n >= 2, "complete graph: need n >= 2");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return from_edges(n, e);
}

RegularGraph RegularGraph::petersen() {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
    e.emplace_back(i, 5 + i);
  }
  return from_edges(10, e);
}

RegularGraph RegularGraph::disjoint_cliques(int cliques, int size) {
  require(cliques >= 1 && size >= 2, "disjoint cliques: need >= 1 clique of size >= 2");
  std::vector<std::pair<int, int>> e;
  for (int c = 0; c < cliques; ++c)
    for (int i = 0; i < size; ++i)
      for (int j = i + 1; j < size; ++j) e.emplace_back(c * size + i, c * size + j);
  return from_edges(cliques * size, e);
}

RegularGraph RegularGraph::random_regular(int n, int d, uint64_t seed) {
  require(n >= 3 && d >= 2 && d < n, "random regular: need 2 <= d < n");
  require(d % 2 == 0 || n % 2 == 0, "random regular: odd degree needs an even vertex count");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> e;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int c = 0; c < d / 2; ++c) {
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < n; ++i) e.emplace_back(perm[i], perm[(i + 1) % n]);
  }
  if (d % 2) {
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < n; i += 2) e.emplace_back(perm[i], perm[i + 1]);
  }
  return from_edges(n, e);
}

RMat RegularGraph::adjacency() const {
  RMat a = RMat::Zero(n, n);
  for (auto [u, v] : edges) {
    a(u, v) += 1;
    a(v, u) += 1;
  }
  return a / degree;
}

RMat SpectralDecomposition::top_projector(double lambda) const {
  int k = top_dimension(lambda);
  RMat u = eigenvectors.leftCols(k);
  return u * u.transpose();
}

int SpectralDecomposition::top_dimension(double lambda) const {
  int k = 0;
  while (k < eigenvalues.size() && eigenvalues(k) >= lambda - 1e-9) ++k;
  return k;
}

SpectralDecomposition spectrum(const RegularGraph& g) {
  SymEig e = sym_eig(g.adjacency());
  return {e.values, e.vectors};
}

namespace {

std::vector<int> mask_to_set(unsigned long long mask) {
  std::vector<int> s;
  for (int i = 0; mask; ++i, mask >>= 1)
    if (mask & 1ull) s.push_back(i);
  return s;
}

// Half-edge counts: inside[S] pairs (u in S, v in S) and the boundary.
struct Cut {
  double boundary = 0;
  int size = 0;
};

Cut cut_of(const RegularGraph& g, unsigned long long mask) {
  Cut c;
  c.size = std::popcount(mask);
  for (auto [u, v] : g.edges) {
    bool iu = mask >> u & 1ull, iv = mask >> v & 1ull;
    if (iu != iv) c.boundary += 1;
  }
  return c;
}

}  // namespace

double expansion(const RegularGraph& g, unsigned long long mask) {
  require(mask != 0, "expansion: empty set");
  Cut c = cut_of(g, mask);
  return c.boundary / (static_cast<double>(g.degree) * c.size);
}

double collision_probability(const RegularGraph& g, unsigned long long mask) {
  require(mask != 0, "collision probability: empty set");
  RVec f = RVec::Zero(g.n);
  for (int i = 0; i < g.n; ++i)
    if (mask >> i & 1ull) f(i) = 1;
  RVec gf = g.adjacency() * f;
  double s = f.sum();
  return gf.squaredNorm() / (s * s);
}

ExpansionReport expansion_profile(const RegularGraph& g, double delta) {
  require(delta > 0 && delta <= 1, "expansion profile: delta must lie in (0, 1]");
  int n = g.n;
  int max_size = static_cast<int>(std::floor(delta * n + 1e-9));
  require(max_size >= 1, "expansion profile: delta * |V| < 1, no admissible set");
  ExpansionReport r;
  r.delta = delta;
  RMat adj = g.adjacency();
  auto cp_size = [&](unsigned long long mask) {
    RVec f = RVec::Zero(n);
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1ull) f(i) = 1;
    double s = f.sum();
    return (adj * f).squaredNorm() / s;  // cp * |S|
  };

  unsigned long long best_mask = 0;
  if (n <= 16) {
    unsigned long long total = 1ull << n;
    int chunks = std::max(1, std::min<int>(64, static_cast<int>(total >> 8)));
    struct Slot {
      double phi = 2, cps = 0;
      unsigned long long mask = 0;
    };
    std::vector<Slot> slots(chunks);
    parallel_for(chunks, [&](int c) {
      unsigned long long lo = total * c / chunks, hi = total * (c + 1) / chunks;
      Slot s;
      for (unsigned long long m = std::max(lo, 1ull); m < hi; ++m) {
        if (std::popcount(m) > max_size) continue;
        double phi = expansion(g, m);
        if (phi < s.phi - 1e-15) {
          s.phi = phi;
          s.mask = m;
        }
        s.cps = std::max(s.cps, cp_size(m));
      }
      slots[c] = s;
    });
    double phi = 2;
    for (const Slot& s : slots) {
      if (s.mask && s.phi < phi - 1e-15) {
        phi = s.phi;
        best_mask = s.mask;
      }
      r.max_cp_times_size = std::max(r.max_cp_times_size, s.cps);
    }
    r.phi = phi;
    r.exhaustive = true;
  } else {
    // Greedy growth from every vertex; no optimality claim.
    require(n <= 64, "expansion profile: heuristic mode supports at most 64 vertices");
    r.exhaustive = false;
    double phi = 2;
    for (int s0 = 0; s0 < n; ++s0) {
      unsigned long long m = 1ull << s0;
      for (int size = 1;; ++size) {
        double p = expansion(g, m);
        r.max_cp_times_size = std::max(r.max_cp_times_size, cp_size(m));
        if (p < phi - 1e-15) {
          phi = p;
          best_mask = m;
        }
        if (size == max_size) break;
        double bp = 3;
        int bv = -1;
        for (int v = 0; v < n; ++v) {
          if (m >> v & 1ull) continue;
          double q = expansion(g, m | 1ull << v);
          if (q < bp) {
            bp = q;
            bv = v;
          }
        }
        m |= 1ull << bv;
      }
    }
    r.phi = phi;
  }
  r.argmin = mask_to_set(best_mask);
  r.argmin_cp = collision_probability(g, best_mask);
  return r;
}

OperatorInstance subspace_operator(const RMat& basis) {
  double n = static_cast<double>(basis.rows());
  return OperatorInstance::weighted(basis * std::sqrt(n), RVec::Constant(basis.rows(), 1.0 / n));
}

TopProjectorNorm top_projector_norm(const RegularGraph& g, double lambda, int q, int restarts, uint64_t seed,
                                    bool with_dual) {
  require(lambda > -1 - 1e-12 && lambda <= 1, "top projector: lambda must lie in (-1, 1]");
  require(q >= 2 && q % 2 == 0, "top projector: q must be even");
  SpectralDecomposition sp = spectrum(g);
  TopProjectorNorm t;
  t.dimension = sp.top_dimension(lambda);
  RMat u = sp.eigenvectors.leftCols(t.dimension);
  t.projector = u * u.transpose();
  t.oracle = norm_2_to_q_lower(subspace_operator(u), q, restarts, seed);
  t.norm_lower = t.oracle.value;
  if (with_dual) t.dual_norm_lower = dual_norm_lower(t.projector, q, restarts, seed).value;
  return t;
}

NormToExpansionReport check_norm_implies_expansion(const RegularGraph& g, double lambda, int q, int restarts,
                                                   uint64_t seed, bool with_sdp) {
  require(g.n <= 12, "norm-implies-expansion: |V| <= 12 required for the all-subsets check");
  NormToExpansionReport r;
  r.lambda = lambda;
  r.q = q;
  SpectralDecomposition sp = spectrum(g);
  int dim = sp.top_dimension(lambda);
  RMat u = sp.eigenvectors.leftCols(dim);
  r.norm_lower = norm_2_to_q_lower(subspace_operator(u), q, restarts, seed).value;
  if (q == 4 && with_sdp && dim <= 20) {
    TensorSdpOptions o;
    o.with_oracle = false;
    o.seed = seed;
    TensorSdpResult s = tensor_sdp(subspace_operator(u), 4, o);
    r.norm_upper = std::pow(std::max(s.bound, 0.0), 0.25);
  }
  double n = g.n;
  double expo = (q - 2.0) / q;
  unsigned long long total = 1ull << g.n;
  r.min_slack = r.min_slack_upper = 1e300;
  for (unsigned long long m = 1; m < total; ++m) {
    double mu = std::popcount(m) / n;
    double phi = expansion(g, m);
    double slack = phi - (1 - lambda - r.norm_lower * r.norm_lower * std::pow(mu, expo));
    r.min_slack = std::min(r.min_slack, slack);
    if (r.norm_upper >= 0)
      r.min_slack_upper =
          std::min(r.min_slack_upper, phi - (1 - lambda - r.norm_upper * r.norm_upper * std::pow(mu, expo)));
    if (slack < -1e-6 && r.violations.size() < 20) {
      std::vector<int> s = mask_to_set(m);
      r.violations.push_back(s);
    }
  }
  if (r.norm_upper < 0) r.min_slack_upper = r.min_slack;
  r.subsets_checked = static_cast<long>(total - 1);
  r.pass = r.violations.empty();
  return r;
}

ExpansionToNormReport check_expansion_implies_norm(const RegularGraph& g, double lambda, int q, double delta, double c,
                                                   int restarts, uint64_t seed) {
  require(g.n <= 14, "expansion-implies-norm: |V| <= 14 required");
  require(q == 4 || q == 6, "expansion-implies-norm: q must be 4 or 6");
  require(lambda > 0 && lambda <= 1, "expansion-implies-norm: lambda must lie in (0, 1]");
  ExpansionToNormReport r;
  r.lambda = lambda;
  r.delta = delta;
  r.c = c;
  r.q = q;
  r.e = std::pow(2.0, c * q) / lambda;
  ExpansionReport prof = expansion_profile(g, delta);
  r.max_cp_times_size = prof.max_cp_times_size;
  r.hypothesis_met = std::isfinite(r.e) && r.max_cp_times_size <= 1.0 / r.e + 1e-12;
  SpectralDecomposition sp = spectrum(g);
  RMat u = sp.eigenvectors.leftCols(sp.top_dimension(lambda));
  r.ratio_lower = norm_2_to_q_lower(subspace_operator(u), q, restarts, seed).value;
  r.bound = 2.0 / std::sqrt(delta);
  r.conclusion_holds = r.ratio_lower <= r.bound + 1e-4;
  if (!r.hypothesis_met)
    r.verdict = "hypothesis not met";
  else
    r.verdict = r.conclusion_holds ? "verified" : "violated";
  return r;
}

std::vector<int> heavy_set_extract(const RVec& p, const RVec& g, int n_target) {
  int m = static_cast<int>(p.size());
  require(g.size() == m, "heavy set: distribution and values differ in length");
  require(n_target >= 1 && n_target <= m, "heavy set: N must lie in [1, |ground set|]");
  require(p.minCoeff() >= 0 && std::abs(p.sum() - 1) <= 1e-9, "heavy set: p is not a probability distribution");
  require(p.squaredNorm() <= 1.0 / n_target + 1e-12, "heavy set: cp(D) > 1/N");
  double e = p.dot(g.cwiseAbs());
  std::vector<int> by_p(m), by_g(m);
  std::iota(by_p.begin(), by_p.end(), 0);
  by_g = by_p;
  std::stable_sort(by_p.begin(), by_p.end(), [&](int a, int b) { return p(a) > p(b); });
  std::stable_sort(by_g.begin(), by_g.end(), [&](int a, int b) { return std::abs(g(a)) > std::abs(g(b)); });
  double head = 0;
  for (int k = 0; k < n_target; ++k) head += p(by_p[k]) * std::abs(g(by_p[k]));
  // Head carries half the mass: Cauchy-Schwarz with sum p^2 <= 1/N. Otherwise the tail has p <= 1/N
  // everywhere and the N largest |g| dominate it.
  std::vector<int> t(n_target);
  if (head >= e / 2)
    std::copy_n(by_p.begin(), n_target, t.begin());
  else
    std::copy_n(by_g.begin(), n_target, t.begin());
  double avg = 0;
  for (int x : t) avg += g(x) * g(x);
  avg /= n_target;
  if (avg < e * e / 4 - 1e-12) throw SolverError("heavy set: extracted set fails the bound");
  std::sort(t.begin(), t.end());
  return t;
}

const char* to_string(SubexpVerdict v) { return v == SubexpVerdict::large ? "LARGE" : "SMALL"; }

SubexpResult subexp_decide(const OperatorInstance& a, int q, double c, double C, uint64_t seed, int restart_cap) {
  require(1 < c && c < C, "subexp: need 1 < c < C");
  require(a.convention == NormConvention::expectation, "subexp: operator must use the expectation convention");
  require(q >= 2 && q % 2 == 0, "subexp: q must be even");
  SubexpResult r;
  r.restart_cap = restart_cap;
  int m = a.rows(), n = a.cols();
  Eigen::JacobiSVD<CMat> svd(a.A.data);
  RVec sv = svd.singularValues() * std::sqrt(static_cast<double>(n) / m);
  double smax = sv.size() ? sv(0) : 0;
  int rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-10 * std::max(1.0, smax)) ++rank;
  r.dimension = rank;
  r.sigma_min = (sv.size() == n && n > 0) ? sv(n - 1) : 0.0;
  if (r.sigma_min > c) {
    r.verdict = SubexpVerdict::large;
    r.reason = "sigma-min";
    return r;
  }
  double s_plus = rank ? sv(rank - 1) : 0.0;
  r.gate_threshold = rank ? C * C * std::pow(static_cast<double>(m), 2.0 / q) / (s_plus * s_plus) : 1e300;
  if (rank > r.gate_threshold) {
    r.verdict = SubexpVerdict::large;
    r.reason = "gate";
    return r;
  }
  int budget = rank >= 30 ? restart_cap : std::min(restart_cap, std::max(8, 1 << rank));
  r.reason = "search";
  // Doubling schedule; restart i is seeded by (seed, i) so each round extends the previous one.
  for (int k = std::min(8, budget);; k = std::min(budget, 2 * k)) {
    OracleResult o = norm_2_to_q_lower(a, q, k, seed);
    r.oracle_value = o.value;
    r.restarts_used = k;
    if (o.value >= C || k == budget) break;
  }
  r.verdict = r.oracle_value > c ? SubexpVerdict::large : SubexpVerdict::small;
  return r;
}

SseDecision sse_decide(const RegularGraph& g, double delta, double nu, const SseThresholds& overrides, uint64_t seed) {
  require(delta > 0 && delta < 1, "sse: delta must lie in (0, 1)");
  require(nu > 0 && nu < 1, "sse: nu must lie in (0, 1)");
  SseDecision d;
  d.delta = delta;
  d.nu = nu;
  d.q = 4;
  d.yes_threshold = overrides.yes > 0 ? overrides.yes : 1.0 / (10.0 * std::pow(delta, 0.25));
  d.no_threshold = overrides.no > 0 ? overrides.no : 2.0 / std::sqrt(std::pow(delta, 0.2));
  SpectralDecomposition sp = spectrum(g);
  d.dimension = sp.top_dimension(0.5);
  RMat u = sp.eigenvectors.leftCols(d.dimension);
  d.norm_lower = norm_2_to_q_lower(subspace_operator(u), 4, 64, seed).value;
  if (!(d.yes_threshold > d.no_threshold && d.no_threshold > 1)) {
    d.verdict = "inconclusive-parameters";
    return d;
  }
  double scale = std::sqrt(static_cast<double>(g.n) / d.dimension);
  d.decision = subexp_decide(OperatorInstance::expectation(u * scale), 4, d.no_threshold, d.yes_threshold, seed);
  d.verdict = d.decision.verdict == SubexpVerdict::large ? "not SSE" : "SSE";
  return d;
}

nlohmann::json to_json(const ExpansionReport& r) {
  return {{"delta", r.delta},         {"phi", r.phi},
          {"argmin", r.argmin},       {"argmin_cp", r.argmin_cp},
          {"max_cp_times_size", r.max_cp_times_size}, {"exhaustive", r.exhaustive}};
}

nlohmann::json to_json(const NormToExpansionReport& r) {
  return {{"lambda", r.lambda},
          {"q", r.q},
          {"norm_lower", r.norm_lower},
          {"norm_upper", r.norm_upper},
          {"subsets_checked", r.subsets_checked},
          {"min_slack", r.min_slack},
          {"min_slack_upper", r.min_slack_upper},
          {"violations", r.violations},
          {"pass", r.pass}};
}

nlohmann::json to_json(const ExpansionToNormReport& r) {
  return {{"lambda", r.lambda},
          {"delta", r.delta},
          {"c", r.c},
          {"q", r.q},
          {"e", r.e},
          {"max_cp_times_size", r.max_cp_times_size},
          {"hypothesis_met", r.hypothesis_met},
          {"ratio_lower", r.ratio_lower},
          {"bound", r.bound},
          {"conclusion_holds", r.conclusion_holds},
          {"verdict", r.verdict}};
}

nlohmann::json to_json(const SubexpResult& r) {
  return {{"verdict", to_string(r.verdict)},   {"reason", r.reason},
          {"sigma_min", r.sigma_min},          {"dimension", r.dimension},
          {"gate_threshold", r.gate_threshold}, {"oracle_value", r.oracle_value},
          {"restarts_used", r.restarts_used},  {"restart_cap", r.restart_cap}};
}

nlohmann::json to_json(const SseDecision& r) {
  nlohmann::json j = {{"verdict", r.verdict},
                      {"delta", r.delta},
                      {"nu", r.nu},
                      {"q", r.q},
                      {"yes_threshold", r.yes_threshold},
                      {"no_threshold", r.no_threshold},
                      {"norm_lower", r.norm_lower},
                      {"dimension", r.dimension}};
  if (r.verdict != "inconclusive-parameters") j["decision"] = to_json(r.decision);
  return j;
}

}  // namespace hypernorm
