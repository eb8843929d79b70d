#pragma once

#include "tvnewton/common.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace tvn {

/// One row of a run log.
///
/// Row k describes iterate k: its relative first-order residual, its errors
/// against a reference solution (when one is known) and the wall time at
/// which it became available. The work columns (inner_iters, cg_iters) count
/// what was spent producing iterate k+1, and active_count is the number of
/// nonzeros of the z that step produced. The terminating row carries no work.
struct IterationRecord {
  long k = 0;
  double sigma = 0.0;
  double rel_residual = 0.0;
  std::optional<double> err2;
  std::optional<double> err_inf;
  double time_s = 0.0;
  long inner_iters = 0;
  long cg_iters = 0;
  long active_count = 0;

  bool operator==(const IterationRecord&) const = default;
};

struct RelativeErrors {
  std::optional<double> err2;
  std::optional<double> err_inf;
};

/// Relative distances |x - ref| / |ref| in the 2- and max-norms. A zero
/// reference leaves the corresponding entry empty.
template <typename Scalar>
RelativeErrors errors_vs_reference(const Vector<Scalar>& x, const Vector<Scalar>& ref) {
  check_dim(x.size(), ref.size(), "errors_vs_reference");
  RelativeErrors e;
  const Vector<Scalar> d = x - ref;
  const Scalar n2 = ref.norm();
  const Scalar ninf = ref.template lpNorm<Eigen::Infinity>();
  if (n2 > Scalar(0)) e.err2 = static_cast<double>(d.norm() / n2);
  if (ninf > Scalar(0)) e.err_inf = static_cast<double>(d.template lpNorm<Eigen::Infinity>() / ninf);
  return e;
}

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

enum class SolveStatus { Converged, MaxIterations, SubproblemNotConverged, LineSearchFailed, Diverged };

const char* to_string(SolveStatus s);

/// CSV with header k,sigma,rel_residual,err2,err_inf,time_s,inner_iters,cg_iters,active_count.
/// Reals are written with 17 significant digits; absent errors are empty fields.
void write_run_log(const std::vector<IterationRecord>& records, const std::string& path);
std::vector<IterationRecord> read_run_log(const std::string& path);

}  // namespace tvn
