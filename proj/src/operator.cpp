#include "hypernorm/operator.hpp"

#include <cmath>
#include <random>

namespace hypernorm {

const char* to_string(NormConvention c) {
  switch (c) {
    case NormConvention::counting: return "counting";
    case NormConvention::expectation: return "expectation";
    case NormConvention::measure: return "measure";
  }
  return "?";
}

NormConvention convention_from_string(const std::string& s) {
  if (s == "counting") return NormConvention::counting;
  if (s == "expectation") return NormConvention::expectation;
  if (s == "measure") return NormConvention::measure;
  throw PreconditionError("unknown norm convention: " + s);
}

namespace {
template <class V>
double vec_norm_impl(const V& v, double p, NormConvention c, const RVec& measure) {
  double acc = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double w = 1.0;
    if (c == NormConvention::expectation) w = 1.0 / static_cast<double>(v.size());
    if (c == NormConvention::measure) w = measure(i);
    acc += w * std::pow(std::abs(v(i)), p);
  }
  return std::pow(acc, 1.0 / p);
}
}  // namespace

double vec_norm(const RVec& v, double p, NormConvention c, const RVec& measure) {
  return vec_norm_impl(v, p, c, measure);
}
double vec_norm(const CVec& v, double p, NormConvention c, const RVec& measure) {
  return vec_norm_impl(v, p, c, measure);
}

OperatorInstance::OperatorInstance(Matrix a, NormConvention c, RVec mu)
    : A(std::move(a)), convention(c), measure(std::move(mu)) {
  if (c == NormConvention::measure) {
    require(measure.size() == A.rows(), "operator: measure length must equal row count");
    require(measure.minCoeff() >= 0, "operator: measure must be nonnegative");
  }
  for (Eigen::Index i = 0; i < A.data.size(); ++i)
    require(std::isfinite(A.data(i).real()) && std::isfinite(A.data(i).imag()), "operator: non-finite entry");
}

RVec OperatorInstance::row_weights(double q) const {
  int m = rows(), n = cols();
  switch (convention) {
    case NormConvention::counting: return RVec::Ones(m);
    case NormConvention::expectation: return RVec::Constant(m, std::pow(n, q / 2.0) / m);
    case NormConvention::measure: return measure;
  }
  return RVec();
}

double OperatorInstance::ratio(const RVec& x, double q) const {
  return ratio(CVec(x.cast<cplx>()), q);
}

double OperatorInstance::ratio(const CVec& x, double q) const {
  CVec y = A.data * x;
  NormConvention in = convention == NormConvention::expectation ? NormConvention::expectation : NormConvention::counting;
  return vec_norm(y, q, convention, measure) / vec_norm(x, 2.0, in);
}

OperatorInstance OperatorInstance::as_counting_q4() const {
  RVec w = row_weights(4.0).array().pow(0.25);
  Matrix scaled = A;
  scaled.data = w.cast<cplx>().asDiagonal() * A.data;
  return OperatorInstance(scaled, NormConvention::counting);
}

RowDistribution row_distribution_from_string(const std::string& s) {
  if (s == "sign") return RowDistribution::sign;
  if (s == "gaussian") return RowDistribution::gaussian;
  if (s == "unit") return RowDistribution::unit;
  throw PreconditionError("unknown row distribution: " + s);
}

const char* to_string(RowDistribution d) {
  switch (d) {
    case RowDistribution::sign: return "sign";
    case RowDistribution::gaussian: return "gaussian";
    case RowDistribution::unit: return "unit";
  }
  return "?";
}

OperatorInstance random_operator(RowDistribution d, int n, int m, uint64_t seed) {
  require(n >= 1 && m >= 1, "random operator: empty shape");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  RMat a(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = d == RowDistribution::sign ? (coin(rng) ? 1.0 : -1.0) : gauss(rng);
    if (d == RowDistribution::unit) a.row(i) *= std::sqrt(static_cast<double>(n)) / a.row(i).norm();
  }
  return OperatorInstance::expectation(a / std::sqrt(static_cast<double>(n)));
}

OperatorInstance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("matrix")) return OperatorInstance(matrix_from_json(j), NormConvention::counting);
  NormConvention c = convention_from_string(j.value("convention", "counting"));
  RVec mu;
  if (c == NormConvention::measure) {
    require(j.contains("measure") && j["measure"].is_array(), "instance json: measure convention needs a measure");
    auto v = j["measure"].get<std::vector<double>>();
    mu = Eigen::Map<RVec>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  return OperatorInstance(matrix_from_json(j.at("matrix")), c, mu);
}

nlohmann::json instance_to_json(const OperatorInstance& a) {
  nlohmann::json j = {{"matrix", matrix_to_json(a.A)}, {"convention", to_string(a.convention)}};
  if (a.convention == NormConvention::measure) j["measure"] = std::vector<double>(a.measure.data(), a.measure.data() + a.measure.size());
  return j;
}

}  // namespace hypernorm
