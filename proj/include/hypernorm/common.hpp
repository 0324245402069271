#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace hypernorm {

using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

// Bad input or a violated precondition. CLI maps this to exit code 2.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Solver did not reach the requested accuracy. CLI maps this to exit code 3.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

// Stateless seed mixing (splitmix64), used to derive per-restart / per-task seeds.
inline uint64_t mix_seed(uint64_t seed, uint64_t index) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Worker count: HYPERNORM_THREADS if set, else hardware concurrency.
int thread_budget();

// Runs body(i) for i in [0, count) on up to thread_budget() threads.
// Callers write results into per-index slots so reductions stay deterministic.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace hypernorm
