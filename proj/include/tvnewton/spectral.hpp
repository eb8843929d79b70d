#pragma once

#include "tvnewton/linear_map.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

namespace tvn {

template <typename Scalar>
using SelfAdjointApply = std::function<void(const Vector<Scalar>&, Vector<Scalar>&)>;

/// x -> M^T M x.
template <typename Scalar>
SelfAdjointApply<Scalar> normal_operator(OperatorPtr<Scalar> m) {
  return [m, tmp = Vector<Scalar>()](const Vector<Scalar>& x, Vector<Scalar>& y) mutable {
    m->forward(x, tmp);
    m->adjoint(tmp, y);
  };
}

template <typename Scalar>
Vector<Scalar> seeded_normal_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector<Scalar> v(n);
  for (Index i = 0; i < n; ++i) v[i] = static_cast<Scalar>(normal(rng));
  return v;
}

/// Power iteration for the largest eigenvalue of a symmetric positive
/// semidefinite map on R^n. Stops when the Rayleigh quotient changes by at
/// most tol relative, or after iters products.
template <typename Scalar>
Scalar estimate_largest_eigenvalue(const SelfAdjointApply<Scalar>& apply, Index n, int iters = 200,
                                   Scalar tol = Scalar(1e-4), std::uint64_t seed = 0,
                                   std::vector<Scalar>* trace = nullptr) {
  if (iters < 1) throw ConfigurationError("power iteration: iters must be >= 1");
  Vector<Scalar> v = seeded_normal_vector<Scalar>(n, seed);
  v.normalize();
  Vector<Scalar> w(n);
  Scalar lambda(0);
  for (int it = 0; it < iters; ++it) {
    apply(v, w);
    const Scalar next = v.dot(w);
    if (trace) trace->push_back(next);
    const Scalar norm = w.norm();
    if (norm == Scalar(0)) return Scalar(0);
    const bool done = it > 0 && std::abs(next - lambda) <= tol * std::abs(next);
    lambda = next;
    if (done) break;
    v = w / norm;
  }
  return lambda;
}

template <typename Scalar>
Scalar largest_eigenvalue_of_normal(const OperatorPtr<Scalar>& m, int iters = 200, Scalar tol = Scalar(1e-4),
                                    std::uint64_t seed = 0) {
  return estimate_largest_eigenvalue<Scalar>(normal_operator<Scalar>(m), m->cols(), iters, tol, seed);
}

/// |<Mu, v> - <u, M^T v>| / (|Mu| |v|) for seeded random u, v.
template <typename Scalar>
Scalar adjoint_mismatch(const LinearMap<Scalar>& m, std::uint64_t seed = 1) {
  const Vector<Scalar> u = seeded_normal_vector<Scalar>(m.cols(), seed);
  const Vector<Scalar> v = seeded_normal_vector<Scalar>(m.rows(), seed + 1);
  const Vector<Scalar> mu = m.forward(u);
  const Scalar scale = mu.norm() * v.norm();
  const Scalar gap = std::abs(mu.dot(v) - u.dot(m.adjoint(v)));
  return scale > Scalar(0) ? gap / scale : gap;
}

}  // namespace tvn
