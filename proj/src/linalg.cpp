#include "hypernorm/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <numeric>
#include <thread>

namespace hypernorm {

int thread_budget() {
  if (const char* env = std::getenv("HYPERNORM_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, const std::function<void(int)>& body) {
  int workers = std::min(thread_budget(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

TensorShape::TensorShape(std::vector<int> d) : dims(std::move(d)) {
  for (int x : dims) require(x >= 1, "tensor factor dimensions must be >= 1");
}

long TensorShape::total() const {
  long t = 1;
  for (int d : dims) t *= d;
  return t;
}

long TensorShape::flatten(const std::vector<int>& idx) const {
  long f = 0;
  for (size_t k = 0; k < dims.size(); ++k) f = f * dims[k] + idx[k];
  return f;
}

std::vector<int> TensorShape::unflatten(long flat) const {
  std::vector<int> idx(dims.size());
  for (int k = factors() - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(flat % dims[k]);
    flat /= dims[k];
  }
  return idx;
}

bool is_self_adjoint(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  double scale = std::max(1.0, m.norm());
  return (m - m.adjoint()).norm() <= tol * scale;
}

SymEig sym_eig(const RMat& m, double sa_tol) {
  require(m.rows() == m.cols(), "sym_eig: matrix must be square");
  double scale = std::max(1.0, m.norm());
  require((m - m.transpose()).norm() <= sa_tol * scale, "sym_eig: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) throw SolverError("sym_eig: eigensolver failed");
  SymEig out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

HermEig herm_eig(const CMat& m, double sa_tol) {
  require(m.rows() == m.cols(), "herm_eig: matrix must be square");
  require(is_self_adjoint(m, sa_tol), "herm_eig: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (m + m.adjoint()));
  if (es.info() != Eigen::Success) throw SolverError("herm_eig: eigensolver failed");
  HermEig out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

double lambda_max(const RMat& m) {
  Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(m.rows() - 1);
}
double lambda_min(const RMat& m) {
  Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}
double lambda_max(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(m.rows() - 1);
}
double lambda_min(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

RMat psd_project(const RMat& m, double sa_tol) {
  SymEig e = sym_eig(m, sa_tol);
  RVec clipped = e.values.cwiseMax(0.0);
  return e.vectors * clipped.asDiagonal() * e.vectors.transpose();
}

RMat perm_operator(const std::vector<int>& pi, int n) {
  int r = static_cast<int>(pi.size());
  std::vector<int> check(pi);
  std::sort(check.begin(), check.end());
  for (int k = 0; k < r; ++k) require(check[k] == k, "perm_operator: not a permutation");
  TensorShape shape = TensorShape::uniform(n, r);
  long dim = shape.total();
  RMat p = RMat::Zero(dim, dim);
  std::vector<int> col(r);
  for (long row = 0; row < dim; ++row) {
    std::vector<int> idx = shape.unflatten(row);
    for (int k = 0; k < r; ++k) col[k] = idx[pi[k]];
    p(row, shape.flatten(col)) = 1.0;
  }
  return p;
}

RMat sym_projector(int r, int n) {
  require(r >= 1 && n >= 1, "sym_projector: r and n must be positive");
  std::vector<int> pi(r);
  std::iota(pi.begin(), pi.end(), 0);
  long dim = TensorShape::uniform(n, r).total();
  RMat acc = RMat::Zero(dim, dim);
  long count = 0;
  do {
    acc += perm_operator(pi, n);
    ++count;
  } while (std::next_permutation(pi.begin(), pi.end()));
  return acc / static_cast<double>(count);
}

namespace {

template <class M>
M partial_transpose_impl(const M& x, const TensorShape& shape, const std::vector<int>& subsystems) {
  require(x.rows() == x.cols() && x.rows() == shape.total(), "partial_transpose: shape mismatch");
  for (int s : subsystems) require(s >= 0 && s < shape.factors(), "partial_transpose: subsystem out of range");
  long dim = shape.total();
  M out(dim, dim);
  for (long r = 0; r < dim; ++r) {
    std::vector<int> ri = shape.unflatten(r);
    for (long c = 0; c < dim; ++c) {
      std::vector<int> a = ri, b = shape.unflatten(c);
      for (int s : subsystems) std::swap(a[s], b[s]);
      out(r, c) = x(shape.flatten(a), shape.flatten(b));
    }
  }
  return out;
}

template <class M>
M partial_trace_impl(const M& x, const TensorShape& shape, const std::vector<int>& subsystems) {
  require(x.rows() == x.cols() && x.rows() == shape.total(), "partial_trace: shape mismatch");
  std::vector<bool> traced(shape.factors(), false);
  for (int s : subsystems) {
    require(s >= 0 && s < shape.factors(), "partial_trace: subsystem out of range");
    traced[s] = true;
  }
  std::vector<int> keep_dims;
  for (int k = 0; k < shape.factors(); ++k)
    if (!traced[k]) keep_dims.push_back(shape.dims[k]);
  TensorShape kept(keep_dims.empty() ? std::vector<int>{1} : keep_dims);
  long dim = shape.total();
  M out = M::Zero(kept.total(), kept.total());
  for (long r = 0; r < dim; ++r) {
    std::vector<int> ri = shape.unflatten(r);
    for (long c = 0; c < dim; ++c) {
      std::vector<int> ci = shape.unflatten(c);
      bool diag = true;
      std::vector<int> kr, kc;
      for (int k = 0; k < shape.factors(); ++k) {
        if (traced[k]) {
          if (ri[k] != ci[k]) { diag = false; break; }
        } else {
          kr.push_back(ri[k]);
          kc.push_back(ci[k]);
        }
      }
      if (!diag) continue;
      if (kr.empty()) { kr.push_back(0); kc.push_back(0); }
      out(kept.flatten(kr), kept.flatten(kc)) += x(r, c);
    }
  }
  return out;
}

template <class M>
M kron_impl(const M& a, const M& b) {
  M out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

RMat partial_transpose(const RMat& x, const TensorShape& shape, const std::vector<int>& subsystems) {
  return partial_transpose_impl(x, shape, subsystems);
}
CMat partial_transpose(const CMat& x, const TensorShape& shape, const std::vector<int>& subsystems) {
  return partial_transpose_impl(x, shape, subsystems);
}
RMat partial_trace(const RMat& x, const TensorShape& shape, const std::vector<int>& subsystems) {
  return partial_trace_impl(x, shape, subsystems);
}
CMat partial_trace(const CMat& x, const TensorShape& shape, const std::vector<int>& subsystems) {
  return partial_trace_impl(x, shape, subsystems);
}
RMat kron(const RMat& a, const RMat& b) { return kron_impl(a, b); }
CMat kron(const CMat& a, const CMat& b) { return kron_impl(a, b); }

RMat gram_factor(const RMat& m, double tol) {
  SymEig e = sym_eig(m, 1e-8);
  double scale = std::max(1.0, e.values.cwiseAbs().maxCoeff());
  require(e.values.minCoeff() >= -tol * scale, "gram_factor: matrix is not PSD");
  int rank = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > 0) ++rank;
  RMat v(rank, m.rows());
  for (int i = 0; i < rank; ++i) v.row(i) = std::sqrt(e.values(i)) * e.vectors.col(i).transpose();
  return v;
}

RMat real_embedding(const CMat& h) {
  Eigen::Index n = h.rows();
  RMat out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = h.real();
  out.topRightCorner(n, n) = -h.imag();
  out.bottomLeftCorner(n, n) = h.imag();
  out.bottomRightCorner(n, n) = h.real();
  return out;
}

RMat psd_sqrt(const RMat& m) {
  SymEig e = sym_eig(m, 1e-9);
  RVec s = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * s.asDiagonal() * e.vectors.transpose();
}

CMat psd_sqrt(const CMat& m) {
  HermEig e = herm_eig(m, 1e-9);
  RVec s = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * s.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

}  // namespace hypernorm
