#pragma once

#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "hypernorm/oracles.hpp"

namespace hypernorm {

// Undirected regular multigraph, vertices 0..n-1.
struct RegularGraph {
  int n = 0;
  int degree = 0;
  std::vector<std::pair<int, int>> edges;

  static RegularGraph from_edges(int n, std::vector<std::pair<int, int>> edges);
  // "n m" then m lines "u v" (0-indexed).
  static RegularGraph read_file(const std::string& path);
  static RegularGraph parse(const std::string& text);

  static RegularGraph cycle(int n);
  static RegularGraph complete(int n);
  static RegularGraph petersen();
  static RegularGraph disjoint_cliques(int cliques, int size);
  // Union of d/2 random Hamiltonian cycles (d even) or a random perfect matching plus cycles.
  static RegularGraph random_regular(int n, int d, uint64_t seed);

  // Normalized adjacency (doubly stochastic, symmetric).
  RMat adjacency() const;
  int edge_count() const { return static_cast<int>(edges.size()); }
};

struct SpectralDecomposition {
  RVec eigenvalues;  // descending
  RMat eigenvectors;
  RMat top_projector(double lambda) const;  // span of eigenvectors with eigenvalue >= lambda
  int top_dimension(double lambda) const;
};

SpectralDecomposition spectrum(const RegularGraph& g);

// Phi(S) = Pr[neighbor of a uniform vertex of S lies outside S].
double expansion(const RegularGraph& g, unsigned long long mask);
// cp(G(S)) = ||G 1_S||_2^2 / (mu(S) |S|) with expectation norms.
double collision_probability(const RegularGraph& g, unsigned long long mask);

struct ExpansionReport {
  double delta = 0;
  double phi = 1;                  // Phi_G(delta)
  std::vector<int> argmin;         // minimizing subset
  double argmin_cp = 0;            // cp(G(argmin))
  double max_cp_times_size = 0;    // max over S with mu(S) <= delta of cp(G(S)) |S|
  bool exhaustive = true;
};

ExpansionReport expansion_profile(const RegularGraph& g, double delta);

struct TopProjectorNorm {
  RMat projector;
  int dimension = 0;
  double norm_lower = 0;  // lower bound on ||P||_{2->q}, expectation norms
  OracleResult oracle;
  double dual_norm_lower = 0;  // independent lower bound on ||P||_{q/(q-1)->2}
};

// Subspace V_{>=lambda} as an operator instance whose 2->q norm equals ||P_{>=lambda}||_{2->q}.
OperatorInstance subspace_operator(const RMat& basis_columns);

TopProjectorNorm top_projector_norm(const RegularGraph& g, double lambda, int q, int restarts, uint64_t seed,
                                    bool with_dual = false);

struct NormToExpansionReport {
  double lambda = 0;
  int q = 4;
  double norm_lower = 0;       // oracle value used in the check
  double norm_upper = -1;      // SDP bound on ||V||_{2->4} when q == 4 (negative when not computed)
  long subsets_checked = 0;
  double min_slack = 0;        // min over S of Phi(S) - rhs(S)
  double min_slack_upper = 0;  // same with the SDP upper bound (two-sided check)
  std::vector<std::vector<int>> violations;
  bool pass = false;
};

NormToExpansionReport check_norm_implies_expansion(const RegularGraph& g, double lambda, int q, int restarts = 32,
                                                   uint64_t seed = 1, bool with_sdp = true);

struct ExpansionToNormReport {
  double lambda = 0, delta = 0, c = 100;
  int q = 4;
  double e = 0;                 // 2^{cq}/lambda
  double max_cp_times_size = 0; // max over S with mu(S) <= delta of cp(G(S)) |S|
  bool hypothesis_met = false;  // cp(G(S)) <= 1/(e|S|) for all such S
  double ratio_lower = 0;       // oracle max ||f||_q / ||f||_2 over V_{>=lambda}
  double bound = 0;             // 2/sqrt(delta)
  bool conclusion_holds = false;
  std::string verdict;          // "verified", "violated", "hypothesis not met"
};

ExpansionToNormReport check_expansion_implies_norm(const RegularGraph& g, double lambda, int q, double delta,
                                                   double c = 100, int restarts = 32, uint64_t seed = 1);

// Finite distribution p over a ground set with values g: returns T with |T| = N and
// E_{x in T} g(x)^2 >= (E_{x~D} |g(x)|)^2 / 4.
std::vector<int> heavy_set_extract(const RVec& p, const RVec& g, int n_target);

enum class SubexpVerdict { small, large };
struct SubexpResult {
  SubexpVerdict verdict = SubexpVerdict::small;
  std::string reason;  // "sigma-min", "gate", "search"
  double sigma_min = 0;
  int dimension = 0;
  double gate_threshold = 0;
  double oracle_value = 0;
  int restarts_used = 0;
  int restart_cap = 1 << 14;
};

const char* to_string(SubexpVerdict v);

// (c, C)-decision for ||A||_{2->q} in the expectation convention.
SubexpResult subexp_decide(const OperatorInstance& a, int q, double c, double C, uint64_t seed = 1,
                           int restart_cap = 1 << 14);

struct SseDecision {
  std::string verdict;  // "SSE", "not SSE", "inconclusive-parameters"
  double delta = 0, nu = 0;
  int q = 4;
  double yes_threshold = 0;  // ||V_{1/2}||_{2->4} >= this in the non-expanding case
  double no_threshold = 0;   // ||V_{1/2}||_{2->4} <= this in the expanding case
  double norm_lower = 0;
  int dimension = 0;
  SubexpResult decision;
};

struct SseThresholds {
  double yes = -1;  // override for the non-expanding side; negative keeps the default
  double no = -1;
};

SseDecision sse_decide(const RegularGraph& g, double delta, double nu, const SseThresholds& overrides = {},
                       uint64_t seed = 1);

nlohmann::json to_json(const ExpansionReport& r);
nlohmann::json to_json(const NormToExpansionReport& r);
nlohmann::json to_json(const ExpansionToNormReport& r);
nlohmann::json to_json(const SubexpResult& r);
nlohmann::json to_json(const SseDecision& r);

}  // namespace hypernorm
