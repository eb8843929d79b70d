#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace tvn {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Invalid input: wrong dimensions, bad parameters, unreadable files.
/// The message names the offending key or quantity.
class ConfigurationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numerical breakdown inside a solver (e.g. the Armijo search ran out of
/// halvings).
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline void check_dim(Index got, Index expected, const char* what) {
  if (got != expected)
    throw ConfigurationError(std::string(what) + ": dimension mismatch (got " + std::to_string(got) +
                             ", expected " + std::to_string(expected) + ")");
}

/// Operator-internal thread cap, read from TVNEWTON_THREADS (default 1).
inline int thread_count() {
  static const int count = [] {
    const char* env = std::getenv("TVNEWTON_THREADS");
    if (env == nullptr) return 1;
    const int n = std::atoi(env);
    return n > 0 ? n : 1;
  }();
  return count;
}

/// Runs body(i) for i in [0, n). Each index is handled by exactly one thread,
/// so results do not depend on the thread count as long as body(i) only
/// writes its own outputs.
template <typename Body>
void parallel_for(Index n, Body&& body, int threads = thread_count()) {
  if (threads <= 1 || n < 256) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  const Index chunk = (n + threads - 1) / threads;
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    const Index begin = t * chunk;
    const Index end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &body] {
      for (Index i = begin; i < end; ++i) body(i);
    });
  }
}

}  // namespace tvn
