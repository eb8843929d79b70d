#pragma once

#include "tvnewton/common.hpp"

#include <cmath>

namespace tvn {

template <typename Scalar>
struct CgResult {
  int iterations = 0;
  bool converged = false;
  Scalar residual_norm = Scalar(0);
};

/// Preconditioned conjugate gradients for H x = rhs with H symmetric positive
/// (semi)definite, given as apply(p, Hp), and a symmetric positive definite
/// preconditioner given as precond(r, s) with s = M^-1 r.
///
/// On entry x holds the start point and r the matching residual rhs - H x;
/// both are updated in place. Iterates until |r| <= tol or max_iter steps.
/// The test is on the unpreconditioned residual. When the cap is hit x is
/// the last iterate, which has the lowest value of the quadratic
/// 0.5<x,Hx> - <rhs,x> seen so far; converged is false then.
template <typename Scalar, typename Apply, typename Precond>
CgResult<Scalar> preconditioned_cg(Apply&& apply, Precond&& precond, Vector<Scalar>& x, Vector<Scalar>& r, Scalar tol,
                                   int max_iter) {
  CgResult<Scalar> out;
  out.residual_norm = r.norm();
  if (out.residual_norm <= tol) {
    out.converged = true;
    return out;
  }
  Vector<Scalar> s(x.size());
  precond(r, s);
  Scalar rs = r.dot(s);
  Vector<Scalar> p = s;
  Vector<Scalar> hp(x.size());
  while (out.iterations < max_iter) {
    apply(p, hp);
    const Scalar php = p.dot(hp);
    if (!(php > Scalar(0))) break;  // direction of zero curvature
    const Scalar step = rs / php;
    x.noalias() += step * p;
    r.noalias() -= step * hp;
    ++out.iterations;
    out.residual_norm = r.norm();
    if (out.residual_norm <= tol) {
      out.converged = true;
      break;
    }
    precond(r, s);
    const Scalar rs_next = r.dot(s);
    p = s + (rs_next / rs) * p;
    rs = rs_next;
  }
  return out;
}

/// Plain CG, or Jacobi-preconditioned CG with M^-1 = diag(inv_diag).
template <typename Scalar, typename Apply>
CgResult<Scalar> conjugate_gradient(Apply&& apply, Vector<Scalar>& x, Vector<Scalar>& r, Scalar tol, int max_iter,
                                    const Vector<Scalar>* inv_diag = nullptr) {
  if (inv_diag)
    return preconditioned_cg<Scalar>(
        apply, [inv_diag](const Vector<Scalar>& in, Vector<Scalar>& o) { o.noalias() = inv_diag->cwiseProduct(in); },
        x, r, tol, max_iter);
  return preconditioned_cg<Scalar>(
      apply, [](const Vector<Scalar>& in, Vector<Scalar>& o) { o = in; }, x, r, tol, max_iter);
}

}  // namespace tvn
