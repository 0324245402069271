#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hypernorm/graph.hpp"
#include "hypernorm/linalg.hpp"
#include "hypernorm/oracles.hpp"
#include "hypernorm/pseudoexp.hpp"
#include "hypernorm/reductions.hpp"
#include "hypernorm/tensor_sdp.hpp"

using namespace hypernorm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Set when a solve ends short of optimal; the report is still written and the exit code becomes 3.
std::string unconverged;

// Flags shared by every subcommand. Unused ones are still serialized so a report can be replayed.
struct Flags {
  std::string in, out, graph, csv, artifacts = ".";
  uint64_t seed = 1;
  double tol = 1e-7;
  long max_iter = 200000;
  int restarts = 64;
  int level = 4;
  int q = 4;
  double delta = 0.5, lambda = 0.5, nu = 0.1, eps = 0.2, c = 100.0;
  int k = 1, n = 0, m = 0, r = 1, l = 4, d = 1;
  std::string formulation = "moment";
  bool no_ppt = false, bcy = false, no_sdp = false;
  double yes = -1, no = -1;
  std::vector<int> sizes{4, 8};
  std::vector<std::string> dists{"sign", "gaussian", "unit"};
  int seeds = 5, m_factor = 50;
  double threshold = 3.5;
};

std::string fnv1a_hex(const std::string& bytes) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json describe_input(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return {{"path", path}, {"fnv1a64", fnv1a_hex(ss.str())}};
}

json config_of(CLI::App* sub) {
  json c;
  for (CLI::Option* o : sub->get_options()) {
    if (o->get_lnames().empty() || o->get_lnames()[0] == "help") continue;
    const std::string& name = o->get_lnames()[0];
    if (o->count() > 0) {
      auto res = o->reduced_results();
      if (o->get_type_size() == 0) c[name] = true;
      else if (res.size() == 1) c[name] = res[0];
      else c[name] = res;
    } else if (!o->get_default_str().empty()) {
      c[name] = o->get_default_str();
    }
  }
  return c;
}

TensorSdpOptions sdp_opts(const Flags& f) {
  TensorSdpOptions o;
  o.tol = f.tol;
  o.max_iter = f.max_iter;
  o.seed = f.seed;
  o.oracle_restarts = f.restarts;
  return o;
}

void need_optimal(SdpStatus s) {
  if (s != SdpStatus::optimal && unconverged.empty()) unconverged = std::string("solver status ") + to_string(s);
}

json residuals_json(const SdpResiduals& r) {
  return {{"primal", r.primal_infeas}, {"dual", r.dual_infeas}, {"gap", r.gap}};
}

OperatorInstance load_instance(const Flags& f) {
  require(!f.in.empty(), "--in is required");
  return instance_from_json(read_json_file(f.in));
}

// Graph spec: a file path, or cycle:N, complete:N, petersen, cliques:CxS, random:N:D.
RegularGraph load_graph(const std::string& spec, uint64_t seed) {
  require(!spec.empty(), "--graph is required");
  auto ints = [&](const std::string& body, char sep) {
    std::vector<int> v;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, sep)) v.push_back(std::stoi(tok));
    return v;
  };
  if (spec == "petersen") return RegularGraph::petersen();
  if (spec.rfind("cycle:", 0) == 0) return RegularGraph::cycle(std::stoi(spec.substr(6)));
  if (spec.rfind("complete:", 0) == 0) return RegularGraph::complete(std::stoi(spec.substr(9)));
  if (spec.rfind("cliques:", 0) == 0) {
    auto v = ints(spec.substr(8), 'x');
    require(v.size() == 2, "cliques:CxS expected");
    return RegularGraph::disjoint_cliques(v[0], v[1]);
  }
  if (spec.rfind("random:", 0) == 0) {
    auto v = ints(spec.substr(7), ':');
    require(v.size() == 2, "random:N:D expected");
    return RegularGraph::random_regular(v[0], v[1], seed);
  }
  return RegularGraph::read_file(spec);
}

void write_artifact(const Flags& f, const std::string& stem, const ReductionArtifact& a, json& listing) {
  fs::create_directories(f.artifacts);
  fs::path mp = fs::path(f.artifacts) / (stem + "." + a.kind + ".json");
  fs::path pp = fs::path(f.artifacts) / (stem + "." + a.kind + ".provenance.json");
  write_matrix_file(mp.string(), a.payload);
  json prov = a.provenance;
  prov["kind"] = a.kind;
  prov["rows"] = a.payload.rows();
  prov["cols"] = a.payload.cols();
  write_json_file(pp.string(), prov);
  listing.push_back({{"kind", a.kind}, {"matrix", mp.string()}, {"provenance", pp.string()}});
}

std::string stem_of(const Flags& f, const std::string& fallback) {
  return f.in.empty() ? fallback : fs::path(f.in).stem().string();
}

// ---- commands ----

json cmd_norm24(const Flags& f) {
  OperatorInstance a = load_instance(f);
  require(f.q >= 2 && f.q % 2 == 0, "--q must be an even integer >= 2");
  OracleResult o = norm_2_to_q_lower(a, f.q, f.restarts, f.seed);
  ElementaryNorms e = elementary_norms(a);
  json r = {{"rows", a.rows()},
            {"cols", a.cols()},
            {"convention", to_string(a.convention)},
            {"q", f.q},
            {"norm_lower", o.value},
            {"oracle", {{"method", o.method}, {"restarts", o.restarts}, {"iterations", o.iterations}}},
            {"witness", std::vector<double>(o.witness.data(), o.witness.data() + o.witness.size())},
            {"elementary", {{"two_to_two", e.two_to_two}, {"two_to_infty", e.two_to_infty}, {"z", e.z}}}};
  if (f.q == 4 && !f.no_sdp) {
    TensorSdpOptions so = sdp_opts(f);
    so.with_oracle = false;
    TensorSdpResult s = tensor_sdp(a, f.level, so);
    r["sdp"] = {{"value", s.value}, {"bound", s.bound}, {"level", f.level}, {"status", to_string(s.status)}};
    r["norm_upper"] = std::pow(std::max(0.0, s.bound), 0.25);
    need_optimal(s.status);
  }
  std::cerr << "norm24: ||A||_{2->" << f.q << "} >= " << o.value << "\n";
  return r;
}

json cmd_tensorsdp(const Flags& f) {
  OperatorInstance a = load_instance(f);
  TensorSdpOptions so = sdp_opts(f);
  json r;
  if (f.bcy) {
    BcyReport b = bcy_gap(a, f.level, so);
    r = to_json(b);
    r["formulation"] = "moment";
    r["level"] = f.level;
    std::cerr << "tensorsdp bcy: oracle4 " << b.oracle4 << " <= sdp " << b.sdp_value << " <= Z " << b.z << "\n";
    return r;
  }
  SdpStatus status;
  if (f.formulation == "moment") {
    TensorSdpResult t = tensor_sdp(a, f.level, so);
    r = to_json(t);
    status = t.status;
  } else if (f.formulation == "a22" || f.formulation == "a22-nosym") {
    SimpleSdpResult s = a22_value(a, so, f.formulation == "a22");
    r = {{"value", s.value},
         {"certificate", {{"bound", s.bound}}},
         {"formulation", f.formulation},
         {"status", to_string(s.status)},
         {"iterations", s.iterations},
         {"residuals", residuals_json(s.residuals)}};
    status = s.status;
  } else if (f.formulation == "dps") {
    DpsResult s = dps_value(a, f.r, !f.no_ppt, so);
    r = to_json(s);
    r["formulation"] = "dps";
    r["r"] = f.r;
    r["ppt"] = !f.no_ppt;
    status = s.status;
  } else {
    throw PreconditionError("unknown formulation " + f.formulation);
  }
  if (f.formulation != "moment") {
    r["oracle"] = std::pow(norm_2_to_q_lower(a, 4, f.restarts, f.seed).value, 4);
    r["seed"] = f.seed;
  }
  std::cerr << "tensorsdp " << f.formulation << ": value " << r["value"].get<double>() << " (oracle "
            << r["oracle"].get<double>() << ")\n";
  need_optimal(status);
  return r;
}

json cmd_certify(const Flags& f) {
  HyperCertificate h = certify_hypercontractivity(f.l, f.d, sdp_opts(f));
  std::cerr << "certify-hyper l=" << f.l << " d=" << f.d << ": " << h.value << " <= " << h.bound_claimed
            << (h.certified ? " certified" : " NOT certified") << "\n";
  need_optimal(h.status);
  return to_json(h);
}

json cmd_sse_analyze(const Flags& f) {
  RegularGraph g = load_graph(f.graph, f.seed);
  SpectralDecomposition sp = spectrum(g);
  json r = {{"n", g.n}, {"degree", g.degree}, {"edges", g.edge_count()}};
  r["eigenvalues"] = std::vector<double>(sp.eigenvalues.data(), sp.eigenvalues.data() + sp.eigenvalues.size());
  r["top_dimension"] = sp.top_dimension(f.lambda);
  r["profile"] = to_json(expansion_profile(g, f.delta));
  TopProjectorNorm t = top_projector_norm(g, f.lambda, f.q, f.restarts, f.seed, true);
  r["top_projector"] = {{"dimension", t.dimension}, {"norm_lower", t.norm_lower}, {"dual_norm_lower", t.dual_norm_lower}};
  if (g.n <= 12) r["norm_implies_expansion"] = to_json(check_norm_implies_expansion(g, f.lambda, f.q, f.restarts, f.seed, !f.no_sdp));
  r["expansion_implies_norm"] = to_json(check_expansion_implies_norm(g, f.lambda, f.q, f.delta, f.c, f.restarts, f.seed));
  std::cerr << "sse analyze: Phi(" << f.delta << ") = " << r["profile"]["phi"].get<double>() << ", ||P||_{2->" << f.q
            << "} >= " << t.norm_lower << "\n";
  return r;
}

json cmd_sse_decide(const Flags& f) {
  RegularGraph g = load_graph(f.graph, f.seed);
  SseDecision d = sse_decide(g, f.delta, f.nu, {f.yes, f.no}, f.seed);
  std::cerr << "sse decide: " << d.verdict << "\n";
  return to_json(d);
}

CMat load_square(const Flags& f, int& n, int& mdim) {
  require(!f.in.empty(), "--in is required");
  Matrix m = read_matrix_file(f.in);
  require(m.rows() == m.cols(), "quantum: operator must be square");
  int dim = static_cast<int>(m.rows());
  n = f.n, mdim = f.m;
  if (n == 0 && mdim == 0) {
    n = static_cast<int>(std::lround(std::sqrt(dim)));
    mdim = n;
  } else if (mdim == 0) {
    require(n > 0 && dim % n == 0, "quantum: --n does not divide the dimension");
    mdim = dim / n;
  } else if (n == 0) {
    require(dim % mdim == 0, "quantum: --m does not divide the dimension");
    n = dim / mdim;
  }
  require(n * mdim == dim, "quantum: dimension is not n * m");
  return m.data;
}

json cmd_quantum(const Flags& f, const std::string& which) {
  int n, mdim;
  CMat m = load_square(f, n, mdim);
  json r = {{"n", n}, {"m", mdim}};
  if (which == "hsep") {
    OracleResult o = h_sep_lower(m, n, mdim, f.restarts, f.seed);
    r["value"] = o.value;
    r["method"] = o.method;
    r["restarts"] = o.restarts;
    std::cerr << "quantum hsep: " << o.value << "\n";
  } else if (which == "dps") {
    DpsResult d = dps_value(m, n, mdim, f.r, !f.no_ppt, sdp_opts(f));
    r.update(to_json(d));
    r["r"] = f.r;
    r["ppt"] = !f.no_ppt;
    r["oracle"] = h_sep_lower(m, n, mdim, f.restarts, f.seed).value;
    std::cerr << "quantum dps r=" << f.r << ": " << d.value << "\n";
    need_optimal(d.status);
  } else {
    r["value"] = h_ext(m, n, mdim, f.r);
    r["r"] = f.r;
    std::cerr << "quantum hext r=" << f.r << ": " << r["value"].get<double>() << "\n";
  }
  return r;
}

json cmd_reduce(const Flags& f, const std::string& which) {
  json r, files = json::array();
  std::string stem = stem_of(f, which);
  json base = {{"seed", f.seed}, {"source", f.in.empty() ? json(nullptr) : describe_input(f.in)}};
  if (which == "tensor-forms") {
    OperatorInstance a = load_instance(f);
    TensorForms t = build_tensor_forms(a, true, 1e-6, f.restarts, f.seed);
    r = to_json(t);
    int n = t.n;
    RMat a4 = Eigen::Map<const RMat>(t.a4.data(), n * n, n * n);
    RMat a3 = Eigen::Map<const RMat>(t.a3.data(), n * n, t.m);
    json p = base;
    p["layout"] = "row-major flattening, rows index the first two factors";
    write_artifact(f, stem, {"A4", Matrix(RMat(a4.transpose())), p}, files);
    write_artifact(f, stem, {"A3", Matrix(RMat(a3.transpose())), p}, files);
    write_artifact(f, stem, {"A22", Matrix(t.a22), base}, files);
    std::cerr << "reduce tensor-forms: discrepancy " << t.max_discrepancy << (t.pass ? " pass" : " FAIL") << "\n";
  } else if (which == "m1") {
    CMat m0;
    int n;
    if (f.in.empty()) {
      require(f.n >= 2, "reduce m1: give --in or --n with --delta");
      n = f.n;
      m0 = CMat::Identity(n * n, n * n) * (1.0 - f.delta);
      base["m0"] = "(1 - delta) I";
      base["delta"] = f.delta;
    } else {
      Matrix mm = read_matrix_file(f.in);
      require(mm.rows() == mm.cols(), "reduce m1: M0 must be square");
      n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(mm.rows()))));
      require(n * n == mm.rows(), "reduce m1: M0 must act on C^n (x) C^n");
      m0 = mm.data;
    }
    M1Result res = m1_pipeline(m0, n, f.k, f.restarts, f.seed);
    r = to_json(res);
    write_artifact(f, stem, {"M1", Matrix(res.m1), base}, files);
    write_artifact(f, stem, {"A1", Matrix(res.a1), base}, files);
    if (f.k >= 2) {
      write_artifact(f, stem, {"M2", Matrix(res.m2), base}, files);
      write_artifact(f, stem, {"A2", Matrix(res.a2), base}, files);
    }
    ProductTest pt = product_test_projector(n);
    write_artifact(f, stem, {"P", Matrix(pt.p), base}, files);
    std::cerr << "reduce m1: h_sep(M1) " << res.hsep_m1 << "\n";
  } else if (which == "realify") {
    require(!f.in.empty(), "--in is required");
    Matrix ac = read_matrix_file(f.in);
    RMat real = complex_to_real(ac.data, true);
    json p = base;
    p["kappa"] = gadget_kappa();
    auto kq = gadget_kappa_exact();
    p["kappa_exact"] = std::to_string(kq.numerator()) + "/" + std::to_string(kq.denominator());
    p["normalized"] = true;
    write_artifact(f, stem, {"gadget-real", Matrix(real), p}, files);
    r = {{"rows", real.rows()}, {"cols", real.cols()}, {"kappa", p["kappa"]}, {"kappa_exact", p["kappa_exact"]}};
    std::cerr << "reduce realify: " << real.rows() << "x" << real.cols() << ", kappa " << gadget_kappa() << "\n";
  } else {
    require(f.eps > 0 && f.eps < 0.5, "reduce pad: --eps must lie in (0, 1/2)");
    OperatorInstance a = load_instance(f);
    PadResult p = pad_and_project(a, f.eps, f.seed, 1.0);
    json prov = base;
    prov["eps"] = f.eps;
    prov["alpha"] = p.alpha;
    prov["delta"] = p.delta;
    prov["measure"] = std::vector<double>(p.padded.measure.data(), p.padded.measure.data() + p.padded.measure.size());
    write_artifact(f, stem, {"padded", p.padded.A, prov}, files);
    if (p.pi_v.size() > 0) write_artifact(f, stem, {"projector", Matrix(p.pi_v), prov}, files);
    r = {{"alpha", p.alpha},         {"delta", p.delta},         {"sigma_min", p.sigma_min},
         {"sigma_max", p.sigma_max}, {"sigma_min_ok", p.sigma_min_ok}, {"decision", p.decision},
         {"image_dimension", p.image_basis.cols()}};
    std::cerr << "reduce pad: sigma in [" << p.sigma_min << ", " << p.sigma_max << "], " << p.decision << "\n";
  }
  r["artifacts"] = files;
  return r;
}

json cmd_random_suite(const Flags& f) {
  struct Task {
    std::string dist;
    int n;
    uint64_t seed;
    double a22 = 0, bound = 0, oracle = 0, lb = 0, seconds = 0;
    std::string status;
  };
  std::vector<Task> tasks;
  for (const auto& d : f.dists)
    for (int n : f.sizes)
      for (int s = 0; s < f.seeds; ++s) tasks.push_back({d, n, mix_seed(f.seed, tasks.size())});
  TensorSdpOptions so = sdp_opts(f);
  so.tol = std::max(f.tol, 1e-6);
  parallel_for(static_cast<int>(tasks.size()), [&](int i) {
    Task& t = tasks[i];
    auto t0 = std::chrono::steady_clock::now();
    OperatorInstance a = random_operator(row_distribution_from_string(t.dist), t.n, f.m_factor * t.n * t.n, t.seed);
    SimpleSdpResult s = a22_value(a, so, true);
    t.a22 = s.value;
    t.bound = s.bound;
    t.status = to_string(s.status);
    t.oracle = norm_2_to_q_lower(a, 4, f.restarts, t.seed).value;
    t.lb = std::pow(3.0 / (1.0 + 2.0 / t.n), 0.25);
    t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });
  json rows = json::array();
  bool all_a22 = true, all_lb = true;
  for (const Task& t : tasks) {
    bool pa = t.a22 <= f.threshold, pl = t.oracle >= t.lb - 0.05;
    all_a22 = all_a22 && pa;
    all_lb = all_lb && pl;
    rows.push_back({{"dist", t.dist},     {"n", t.n},         {"m", f.m_factor * t.n * t.n}, {"seed", t.seed},
                    {"a22_value", t.a22}, {"a22_bound", t.bound}, {"status", t.status},   {"oracle", t.oracle},
                    {"oracle4", std::pow(t.oracle, 4)}, {"lower_bound", t.lb}, {"a22_pass", pa},
                    {"oracle_pass", pl}, {"seconds", t.seconds}});
  }
  if (!f.csv.empty()) {
    std::ofstream out(f.csv);
    require(static_cast<bool>(out), "cannot write " + f.csv);
    out << "dist,n,m,seed,a22_value,a22_bound,oracle,oracle4,lower_bound,seconds\n";
    out.precision(10);
    for (const Task& t : tasks)
      out << t.dist << "," << t.n << "," << f.m_factor * t.n * t.n << "," << t.seed << "," << t.a22 << "," << t.bound
          << "," << t.oracle << "," << std::pow(t.oracle, 4) << "," << t.lb << "," << t.seconds << "\n";
  }
  std::cerr << "random-suite: " << tasks.size() << " instances, a22 <= " << f.threshold << (all_a22 ? " all" : " NOT all")
            << ", oracle lower bound " << (all_lb ? "all" : "NOT all") << "\n";
  return {{"instances", rows},
          {"threshold",
           {{"a22", f.threshold},
            {"note", "calibrated surrogate for an unspecified constant in the random-operator SDP bound"}}},
          {"a22_pass", all_a22},
          {"oracle_pass", all_lb}};
}

json cmd_lasserre(const Flags& f) {
  RegularGraph g = load_graph(f.graph.empty() ? "cycle:5" : f.graph, f.seed);
  LasserreReport l = lasserre_roundtrip(g, f.tol);
  std::cerr << "lasserre: " << l.lasserre_value << " vs " << l.sos_value << "\n";
  return {{"n", g.n},
          {"lasserre_value", l.lasserre_value},
          {"sos_value", l.sos_value},
          {"converted_sos_value", l.converted_sos_value},
          {"converted_lasserre_value", l.converted_lasserre_value},
          {"objective_discrepancy", std::abs(l.lasserre_value - l.sos_value)},
          {"max_moment_discrepancy", l.max_moment_discrepancy},
          {"lasserre_to_sos_min_eig", l.lasserre_to_sos_min_eig},
          {"sos_to_lasserre_constraint_residual", l.sos_to_lasserre_constraint_residual}};
}

void add_common(CLI::App* s, Flags& f) {
  s->add_option("--in", f.in, "input JSON file");
  s->add_option("--out", f.out, "report path (default stdout)");
  s->add_option("--seed", f.seed, "random seed")->capture_default_str();
  s->add_option("--tol", f.tol, "solver tolerance")->capture_default_str();
  s->add_option("--max-iter", f.max_iter, "solver iteration cap")->capture_default_str();
  s->add_option("--restarts", f.restarts, "oracle restarts")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypercontractive norm toolkit"};
  app.require_subcommand(1);
  Flags f;

  auto* norm24 = app.add_subcommand("norm24", "oracle lower bound and SDP upper bound on ||A||_{2->q}");
  add_common(norm24, f);
  norm24->add_option("--q", f.q)->capture_default_str();
  norm24->add_option("--level", f.level)->capture_default_str();
  norm24->add_flag("--no-sdp", f.no_sdp);

  auto* tsdp = app.add_subcommand("tensorsdp", "SoS relaxation of max ||Af||_4^4");
  add_common(tsdp, f);
  tsdp->add_option("--level", f.level)->capture_default_str();
  tsdp->add_option("--formulation", f.formulation)
      ->check(CLI::IsMember({"moment", "a22", "a22-nosym", "dps"}))
      ->capture_default_str();
  tsdp->add_option("--r", f.r, "DPS extension level")->capture_default_str();
  tsdp->add_flag("--no-ppt", f.no_ppt);
  tsdp->add_flag("--bcy", f.bcy, "report the oracle / SDP / Z sandwich");

  auto* cert = app.add_subcommand("certify-hyper", "certify E f^4 <= 9^d for degree-d polynomials on l bits");
  add_common(cert, f);
  cert->add_option("--l", f.l)->capture_default_str();
  cert->add_option("--d", f.d)->capture_default_str();

  auto* sse = app.add_subcommand("sse", "small-set expansion checks");
  sse->require_subcommand(1);
  auto* analyze = sse->add_subcommand("analyze");
  auto* decide = sse->add_subcommand("decide");
  for (auto* s : {analyze, decide}) {
    add_common(s, f);
    s->add_option("--graph", f.graph, "graph file or cycle:N, complete:N, petersen, cliques:CxS, random:N:D")->required();
    s->add_option("--delta", f.delta)->capture_default_str();
    s->add_option("--q", f.q)->capture_default_str();
  }
  analyze->add_option("--lambda", f.lambda)->capture_default_str();
  analyze->add_option("--c", f.c, "constant in e = 2^{cq}/lambda")->capture_default_str();
  analyze->add_flag("--no-sdp", f.no_sdp);
  decide->add_option("--nu", f.nu)->capture_default_str();
  decide->add_option("--yes", f.yes, "override the non-expanding norm threshold");
  decide->add_option("--no", f.no, "override the expanding norm threshold");

  auto* quantum = app.add_subcommand("quantum", "separability relaxations of a bipartite operator");
  quantum->require_subcommand(1);
  std::vector<CLI::App*> qsubs;
  for (const char* name : {"hsep", "dps", "hext"}) {
    auto* s = quantum->add_subcommand(name);
    add_common(s, f);
    s->add_option("--n", f.n, "first subsystem dimension");
    s->add_option("--m", f.m, "second subsystem dimension");
    s->add_option("--r", f.r)->capture_default_str();
    s->add_flag("--no-ppt", f.no_ppt);
    qsubs.push_back(s);
  }

  auto* reduce = app.add_subcommand("reduce", "hardness-reduction artifacts");
  reduce->require_subcommand(1);
  std::vector<CLI::App*> rsubs;
  for (const char* name : {"tensor-forms", "m1", "realify", "pad"}) {
    auto* s = reduce->add_subcommand(name);
    add_common(s, f);
    s->add_option("--artifacts", f.artifacts, "directory for artifact files")->capture_default_str();
    rsubs.push_back(s);
  }
  rsubs[1]->add_option("--k", f.k)->capture_default_str();
  rsubs[1]->add_option("--delta", f.delta)->capture_default_str();
  rsubs[1]->add_option("--n", f.n, "dimension when M0 = (1 - delta) I");
  rsubs[3]->add_option("--eps", f.eps)->capture_default_str();

  auto* suite = app.add_subcommand("random-suite", "a22 value and oracle on random operators");
  add_common(suite, f);
  suite->add_option("--sizes", f.sizes)->capture_default_str();
  suite->add_option("--dists", f.dists)->capture_default_str();
  suite->add_option("--seeds", f.seeds)->capture_default_str();
  suite->add_option("--m-factor", f.m_factor, "m = factor * n^2")->capture_default_str();
  suite->add_option("--threshold", f.threshold)->capture_default_str();
  suite->add_option("--csv", f.csv, "flat CSV of the per-instance values");

  auto* las = app.add_subcommand("lasserre", "Lasserre vectors vs SoS for Max Cut");
  add_common(las, f);
  las->add_option("--graph", f.graph)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  // Deepest selected subcommand and its name path.
  CLI::App* leaf = &app;
  std::string command;
  while (!leaf->get_subcommands().empty()) {
    leaf = leaf->get_subcommands().front();
    command += (command.empty() ? "" : " ") + leaf->get_name();
  }

  json report = {{"command", command}, {"config", config_of(leaf)}};
  auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (!f.in.empty()) report["inputs"] = {describe_input(f.in)};
    if (!f.graph.empty() && fs::exists(f.graph)) report["inputs"].push_back(describe_input(f.graph));
    json result;
    if (leaf == norm24) result = cmd_norm24(f);
    else if (leaf == tsdp) result = cmd_tensorsdp(f);
    else if (leaf == cert) result = cmd_certify(f);
    else if (leaf == analyze) result = cmd_sse_analyze(f);
    else if (leaf == decide) result = cmd_sse_decide(f);
    else if (leaf->get_parent() == quantum) result = cmd_quantum(f, leaf->get_name());
    else if (leaf->get_parent() == reduce) result = cmd_reduce(f, leaf->get_name());
    else if (leaf == suite) result = cmd_random_suite(f);
    else result = cmd_lasserre(f);
    report["result"] = result;
    if (!unconverged.empty()) {
      report["error"] = {{"kind", "solver"}, {"message", unconverged}};
      code = 3;
    }
  } catch (const SolverError& e) {
    report["error"] = {{"kind", "solver"}, {"message", e.what()}};
    code = 3;
  } catch (const PreconditionError& e) {
    report["error"] = {{"kind", "precondition"}, {"message", e.what()}};
    code = 2;
  } catch (const nlohmann::json::exception& e) {
    report["error"] = {{"kind", "input"}, {"message", e.what()}};
    code = 2;
  } catch (const std::exception& e) {
    report["error"] = {{"kind", "input"}, {"message", e.what()}};
    code = 2;
  }
  report["exit_code"] = code;
  report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (code != 0) std::cerr << "error: " << report["error"]["message"].get<std::string>() << "\n";

  try {
    if (f.out.empty()) std::cout << report.dump(2) << "\n";
    else write_json_file(f.out, report);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}
