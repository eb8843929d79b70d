#pragma once

#include "tvnewton/linear_map.hpp"
#include "tvnewton/metrics.hpp"
#include "tvnewton/spectral.hpp"

#include <string>
#include <vector>

namespace tvn {

/// min_x 0.5|Ax - b|^2 + alpha |Bx|_1, together with the cached spectral
/// quantities every solver derives its parameters from.
template <typename Scalar = double>
struct L1Problem {
  OperatorPtr<Scalar> A;
  OperatorPtr<Scalar> B;
  Vector<Scalar> b;
  Scalar alpha = Scalar(0);
  Scalar lambda_a = Scalar(0);  // lambda_max(A^T A)
  Scalar lambda_b = Scalar(0);  // lambda_max(B^T B)

  Index n() const { return A->cols(); }

  void validate() const {
    if (!A || !B) throw ConfigurationError("problem: operators A and B are required");
    check_dim(B->cols(), A->cols(), "problem: B domain vs A domain");
    check_dim(b.size(), A->rows(), "problem: data b vs range of A");
    if (!(alpha > Scalar(0))) throw ConfigurationError("alpha: must be positive");
  }

  /// Power iteration on A^T A and B^T B; call once after assembling.
  void compute_spectra(int iters = 200, Scalar tol = Scalar(1e-4), std::uint64_t seed = 0) {
    lambda_a = largest_eigenvalue_of_normal<Scalar>(A, iters, tol, seed);
    lambda_b = largest_eigenvalue_of_normal<Scalar>(B, iters, tol, seed);
  }

  void require_spectra() const {
    if (!(lambda_b > Scalar(0))) throw ConfigurationError("lambda_max(B^T B) is zero or not computed");
    if (!(lambda_a > Scalar(0))) throw ConfigurationError("lambda_max(A^T A) is zero or not computed");
  }

  /// Weight of |Bx - z| in the first-order residual.
  Scalar gamma_scale() const { return lambda_a / std::sqrt(lambda_b); }
};

template <typename Scalar>
struct ResidualParts {
  Scalar stationarity = Scalar(0);  // |A^T(Ax - b) + B^T z*|
  Scalar feasibility = Scalar(0);   // |Bx - z|
  Scalar total = Scalar(0);
};

/// First-order residual (|A^T(Ax-b) + B^T z*|^2 + gamma^2 |Bx - z|^2)^(1/2),
/// shared by every solver so their curves are comparable.
template <typename Scalar>
ResidualParts<Scalar> first_order_residual(const L1Problem<Scalar>& p, const Vector<Scalar>& x,
                                           const Vector<Scalar>& z, const Vector<Scalar>& zstar) {
  ResidualParts<Scalar> r;
  const Vector<Scalar> g = p.A->adjoint(p.A->forward(x) - p.b) + p.B->adjoint(zstar);
  r.stationarity = g.norm();
  r.feasibility = (p.B->forward(x) - z).norm();
  const Scalar gs = p.gamma_scale();
  r.total = std::sqrt(r.stationarity * r.stationarity + gs * gs * r.feasibility * r.feasibility);
  return r;
}

template <typename Scalar = double>
struct SolveResult {
  Vector<Scalar> x;
  Vector<Scalar> z;
  Vector<Scalar> zeta_star;
  SolveStatus status = SolveStatus::MaxIterations;
  std::string message;
  std::vector<IterationRecord> records;
  long iterations = 0;
  long total_cg = 0;
  long cg_cap_hits = 0;
  Scalar r0 = Scalar(0);
  Scalar final_residual = Scalar(0);
  double total_time_s = 0.0;

  bool converged() const { return status == SolveStatus::Converged; }
};

}  // namespace tvn
