#pragma once

#include "tvnewton/common.hpp"

#include <cmath>

namespace tvn {

/// Soft thresholding: argmin_z 0.5|z - zeta|^2 + tau |z|_1. Components with
/// |zeta_i| <= tau map to exactly zero.
template <typename Derived>
auto prox_l1(const Eigen::MatrixBase<Derived>& zeta, typename Derived::Scalar tau) {
  using Scalar = typename Derived::Scalar;
  return zeta.unaryExpr([tau](Scalar v) {
    if (v > tau) return v - tau;
    if (v < -tau) return v + tau;
    return Scalar(0);
  });
}

/// Moreau envelope of tau |.|_1 evaluated at zeta. Its gradient is
/// zeta - prox_l1(zeta, tau).
template <typename Derived>
typename Derived::Scalar moreau_env(const Eigen::MatrixBase<Derived>& zeta, typename Derived::Scalar tau) {
  using Scalar = typename Derived::Scalar;
  Scalar total(0);
  for (Index i = 0; i < zeta.size(); ++i) {
    const Scalar v = zeta[i];
    const Scalar a = std::abs(v);
    // Either the quadratic part (|v| <= tau) or tau|v| - tau^2/2 (shrunk).
    total += a <= tau ? Scalar(0.5) * v * v : tau * a - Scalar(0.5) * tau * tau;
  }
  return total;
}

/// Projection onto the l-infinity ball of radius alpha.
template <typename Derived>
auto clamp_linf(const Eigen::MatrixBase<Derived>& v, typename Derived::Scalar alpha) {
  return v.cwiseMax(-alpha).cwiseMin(alpha);
}

/// Euclidean distance of zstar from the subdifferential of alpha |.|_1 at z.
template <typename DerivedZ, typename DerivedS>
typename DerivedZ::Scalar l1_subgradient_residual(const Eigen::MatrixBase<DerivedZ>& z,
                                                   const Eigen::MatrixBase<DerivedS>& zstar,
                                                   typename DerivedZ::Scalar alpha) {
  using Scalar = typename DerivedZ::Scalar;
  check_dim(zstar.size(), z.size(), "l1_subgradient_residual");
  Scalar sq(0);
  for (Index i = 0; i < z.size(); ++i) {
    Scalar d;
    if (z[i] == Scalar(0))
      d = std::max(Scalar(0), std::abs(zstar[i]) - alpha);
    else
      d = std::abs(zstar[i] - (z[i] > Scalar(0) ? alpha : -alpha));
    sq += d * d;
  }
  return std::sqrt(sq);
}

}  // namespace tvn
